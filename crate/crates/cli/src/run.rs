//! Mode execution and deterministic artifact emission.

use std::collections::BTreeMap;
use std::path::Path;

use jcsim_core::claims::{self, ClaimKind, ClaimReport, Verdict, Witness};
use jcsim_core::converge::{self, ConvergenceVerdict, SweepPlan};
use jcsim_core::evolve::{self, TrajectoryRecord};

use crate::canon::{self, csv_line, fmt_f64, Value};
use crate::config::{operator_value, Mode, RunConfig};
use crate::error::CliError;

/// Exit status plus human-readable summary lines.
pub struct RunOutcome {
    pub exit_code: u8,
    pub summary: Vec<String>,
}

pub fn execute(cfg: &RunConfig, output_dir: &Path) -> Result<RunOutcome, CliError> {
    std::fs::create_dir_all(output_dir).map_err(|e| CliError::Io {
        path: output_dir.display().to_string(),
        message: e.to_string(),
    })?;
    match cfg.mode {
        Mode::Evolve => run_evolve(cfg, output_dir),
        Mode::Sweep => run_sweep(cfg, output_dir),
        Mode::Check => run_check(cfg, output_dir),
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

// ---------------------------------------------------------------------------
// evolve

/// Exact column set of the observables CSV.
pub const OBSERVABLES_HEADER: &str =
    "t,trace_re,trace_im,hs_norm,purity,min_eig,inversion,photon_number";

fn observables_csv(record: &TrajectoryRecord) -> String {
    let mut out = String::new();
    out.push_str(OBSERVABLES_HEADER);
    out.push('\n');
    for (t, obs) in record.times.iter().zip(&record.observables) {
        out.push_str(&csv_line(&[
            fmt_f64(*t),
            fmt_f64(obs.trace.re),
            fmt_f64(obs.trace.im),
            fmt_f64(obs.hs_norm),
            fmt_f64(obs.purity),
            fmt_f64(obs.min_eigenvalue),
            fmt_f64(obs.inversion),
            fmt_f64(obs.photon_number),
        ]));
    }
    out
}

fn snapshots_json(snapshots: &[(f64, jcsim_core::DensityMatrix)]) -> String {
    let items: Vec<Value> = snapshots
        .iter()
        .map(|(t, rho)| {
            Value::object([
                ("rho", Value::matrix(rho.operator().matrix())),
                ("t", Value::Float(*t)),
            ])
        })
        .collect();
    canon::to_json(&Value::object([("snapshots", Value::Array(items))]))
}

fn run_evolve(cfg: &RunConfig, output_dir: &Path) -> Result<RunOutcome, CliError> {
    let rho0 = cfg.initial_state.build(cfg.model.level)?;
    let record = evolve::integrate(&cfg.model, &rho0, &cfg.integrator)?;
    write_file(output_dir, &cfg.outputs.observables, &observables_csv(&record))?;
    let mut summary = vec![
        format!(
            "evolve: {} steps to t = {}, {} recorded rows -> {}",
            record.steps,
            fmt_f64(cfg.integrator.t_max),
            record.times.len(),
            cfg.outputs.observables
        ),
        format!(
            "  max hermiticity defect {:.3e}, min eigenvalue {:.3e}, max norm ratio {:.9}",
            record.max_hermiticity_defect, record.min_eigenvalue_seen, record.hs_norm_max_ratio
        ),
    ];
    if let Some(snapshots) = &record.snapshots {
        write_file(output_dir, &cfg.outputs.snapshots, &snapshots_json(snapshots))?;
        summary.push(format!(
            "  {} snapshot(s) -> {}",
            snapshots.len(),
            cfg.outputs.snapshots
        ));
    }
    Ok(RunOutcome {
        exit_code: 0,
        summary,
    })
}

// ---------------------------------------------------------------------------
// sweep

/// Exact column set of the convergence CSV. Probe entries are rendered as
/// `n s;n' s'` (e.g. `0+;1-`) to stay comma-free.
pub const CONVERGENCE_HEADER: &str = "entry,t,nu,re,im,diff_to_next";

fn entry_label(entry: &(jcsim_core::BasisIndex, jcsim_core::BasisIndex)) -> String {
    format!(
        "{}{};{}{}",
        entry.0.n,
        entry.0.s.symbol(),
        entry.1.n,
        entry.1.s.symbol()
    )
}

fn run_sweep(cfg: &RunConfig, output_dir: &Path) -> Result<RunOutcome, CliError> {
    let sweep_cfg = cfg.sweep.as_ref().expect("sweep mode carries a plan");
    let plan = SweepPlan {
        base: cfg.model.clone(),
        levels: sweep_cfg.levels.clone(),
        probe_entries: sweep_cfg.probe_entries.clone(),
        probe_times: sweep_cfg.probe_times.clone(),
        integrator: cfg.integrator.clone(),
    };
    let table = converge::sweep(&plan, &cfg.initial_state)?;

    let mut out = String::new();
    out.push_str(CONVERGENCE_HEADER);
    out.push('\n');
    for row in &table.rows {
        for (i, level) in table.levels.iter().enumerate() {
            let diff = if i < row.diffs.len() {
                fmt_f64(row.diffs[i])
            } else {
                String::new()
            };
            out.push_str(&csv_line(&[
                entry_label(&row.entry),
                fmt_f64(row.time),
                level.get().to_string(),
                fmt_f64(row.values[i].re),
                fmt_f64(row.values[i].im),
                diff,
            ]));
        }
    }
    write_file(output_dir, &cfg.outputs.convergence, &out)?;

    let mut summary = vec![format!(
        "sweep: {} probe row(s) across levels {:?} -> {}",
        table.rows.len(),
        table.levels.iter().map(|l| l.get()).collect::<Vec<_>>(),
        cfg.outputs.convergence
    )];
    for row in &table.rows {
        summary.push(format!(
            "  entry {} at t = {}: diffs {:?} ({}), {}",
            entry_label(&row.entry),
            row.time,
            row.diffs,
            if row.strictly_decreasing {
                "strictly decreasing"
            } else {
                "not monotone"
            },
            match row.verdict {
                ConvergenceVerdict::Converging => "converging",
                ConvergenceVerdict::NotConverging => "NOT converging",
            },
        ));
    }
    summary.push(
        "  note: decaying entrywise differences are a finite-level diagnostic, not a proof"
            .to_string(),
    );
    Ok(RunOutcome {
        exit_code: 0,
        summary,
    })
}

// ---------------------------------------------------------------------------
// check

fn witness_value(witness: &Witness) -> Value {
    let mut fields: Vec<(&'static str, Value)> = vec![
        ("rho", Value::matrix(witness.rho.operator().matrix())),
        ("value", Value::Float(witness.value)),
    ];
    fields.push((
        "dissipator",
        witness
            .dissipator
            .as_ref()
            .map(operator_value)
            .unwrap_or(Value::Null),
    ));
    fields.push((
        "t",
        witness.t.map(Value::Float).unwrap_or(Value::Null),
    ));
    Value::object(fields)
}

fn claim_value(report: &ClaimReport, allowed: bool) -> Value {
    Value::object([
        ("claim", Value::Str(report.claim.name().into())),
        ("trials", Value::UInt(report.trials as u64)),
        ("max_violation", Value::Float(report.max_violation)),
        (
            "verdict",
            Value::Str(
                match report.verdict {
                    Verdict::HoldsWithinTol => "holds_within_tol",
                    Verdict::Violated => "violated",
                }
                .into(),
            ),
        ),
        ("allowed", Value::Bool(allowed)),
        (
            "witness",
            report
                .witness
                .as_ref()
                .map(witness_value)
                .unwrap_or(Value::Null),
        ),
    ])
}

fn run_check(cfg: &RunConfig, output_dir: &Path) -> Result<RunOutcome, CliError> {
    let plan = cfg.check.as_ref().expect("check mode carries a plan");
    let model = &cfg.model;

    let mut reports: Vec<ClaimReport> = Vec::new();
    for claim in &plan.claims {
        match claim {
            ClaimKind::DissipatorSign => {
                for vspec in &model.dissipators {
                    reports.push(claims::check_dissipator_sign(
                        vspec,
                        model.level,
                        plan.trials,
                        cfg.seed,
                    )?);
                }
            }
            ClaimKind::Contraction => {
                reports.push(claims::check_contraction(
                    model,
                    &plan.states,
                    &cfg.integrator,
                )?);
            }
            ClaimKind::TracePositivity => {
                reports.push(claims::check_trace_and_positivity(
                    model,
                    &plan.states,
                    &cfg.integrator,
                )?);
            }
            ClaimKind::KOrthogonality => {
                reports.push(claims::check_k_orthogonality(model, plan.trials, cfg.seed)?);
            }
        }
    }

    let is_allowed =
        |report: &ClaimReport| plan.allow_violations.iter().any(|n| n == report.claim.name());
    let exit_ok = reports
        .iter()
        .all(|r| r.verdict == Verdict::HoldsWithinTol || is_allowed(r));

    let claims_json: Vec<Value> = reports
        .iter()
        .map(|r| claim_value(r, is_allowed(r)))
        .collect();
    let mut root = BTreeMap::new();
    root.insert("claims".to_string(), Value::Array(claims_json));
    root.insert("exit_ok".to_string(), Value::Bool(exit_ok));
    root.insert("seed".to_string(), Value::UInt(cfg.seed));
    write_file(
        output_dir,
        &cfg.outputs.claims,
        &canon::to_json(&Value::Object(root)),
    )?;

    let mut summary = vec![format!(
        "check: {} claim report(s) -> {}",
        reports.len(),
        cfg.outputs.claims
    )];
    for report in &reports {
        summary.push(format!(
            "  {}: {} (max_violation {:.6e}){}",
            report.claim.name(),
            match report.verdict {
                Verdict::HoldsWithinTol => "holds",
                Verdict::Violated => "VIOLATED",
            },
            report.max_violation,
            if report.verdict == Verdict::Violated && is_allowed(report) {
                " [allow-listed]"
            } else {
                ""
            },
        ));
    }
    Ok(RunOutcome {
        exit_code: if exit_ok { 0 } else { 2 },
        summary,
    })
}
