//! Truncation-refinement diagnostics: integrate the same scenario at an
//! ascending ladder of truncation levels and track selected matrix entries
//! at selected times.
//!
//! All levels see compatible initial data: the state is built once at a
//! reference level `max(levels) + 16` and truncated down, so the initial
//! entries agree wherever both levels retain them. Convergence is diagnosed
//! entrywise — successive absolute differences between consecutive levels —
//! which is a finite heuristic: a decaying difference sequence is evidence,
//! not proof, of convergence.

use num_complex::Complex64;

use crate::density::{DensityMatrix, StateSpec};
use crate::error::{Error, Result};
use crate::evolve::{self, IntegratorConfig};
use crate::fock::{BasisIndex, TruncationLevel};
use crate::lindblad::ModelSpec;

/// Margin above the largest requested level at which the common reference
/// initial state is built.
pub const REFERENCE_MARGIN: usize = 16;

/// A probe row converges when its final difference is the smallest and lies
/// at or below this threshold.
pub const CONVERGENCE_THRESHOLD: f64 = 1e-6;

/// Sweep description: a model template (its level is replaced per run), the
/// level ladder, and the probes.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub base: ModelSpec,
    pub levels: Vec<TruncationLevel>,
    pub probe_entries: Vec<(BasisIndex, BasisIndex)>,
    pub probe_times: Vec<f64>,
    pub integrator: IntegratorConfig,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        if self.levels.len() < 2 {
            return Err(Error::InvalidSweep(
                "need at least two truncation levels".into(),
            ));
        }
        if !self.levels.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidSweep(
                "levels must be strictly increasing".into(),
            ));
        }
        if self.probe_entries.is_empty() {
            return Err(Error::InvalidSweep("no probe entries".into()));
        }
        if self.probe_times.is_empty() {
            return Err(Error::InvalidSweep("no probe times".into()));
        }
        let smallest = self.levels[0];
        for (row, col) in &self.probe_entries {
            if !row.is_valid_at(smallest) || !col.is_valid_at(smallest) {
                return Err(Error::InvalidSweep(format!(
                    "probe entry ({row}; {col}) exceeds the smallest level {smallest}"
                )));
            }
        }
        for &t in &self.probe_times {
            if !(t >= 0.0) || t > self.integrator.t_max {
                return Err(Error::InvalidSweep(format!(
                    "probe time {t} outside [0, t_max = {}]",
                    self.integrator.t_max
                )));
            }
        }
        self.integrator.validate()
    }
}

/// Verdict for one probe row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceVerdict {
    Converging,
    NotConverging,
}

/// One probed entry at one probe time across the level ladder.
#[derive(Debug, Clone)]
pub struct ProbeRow {
    pub entry: (BasisIndex, BasisIndex),
    pub time: f64,
    /// Entry value per level, aligned with the plan's ladder.
    pub values: Vec<Complex64>,
    /// `|value[i] - value[i+1]|` for consecutive levels.
    pub diffs: Vec<f64>,
    /// Each difference is strictly below its predecessor, except that once
    /// the sequence reaches exactly 0.0 — consecutive levels in bit-exact
    /// agreement, the floor of the diagnostic — it may stay there.
    pub strictly_decreasing: bool,
    pub verdict: ConvergenceVerdict,
}

/// Full sweep result.
#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub levels: Vec<TruncationLevel>,
    pub rows: Vec<ProbeRow>,
    pub threshold: f64,
}

impl ConvergenceTable {
    pub fn all_converging(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.verdict == ConvergenceVerdict::Converging)
    }
}

/// Run the sweep: one integration per level (levels run concurrently), probe
/// extraction from exact-time snapshots, and difference assembly.
pub fn sweep(plan: &SweepPlan, initial: &StateSpec) -> Result<ConvergenceTable> {
    plan.validate()?;
    let reference_level = TruncationLevel::new(
        plan.levels.last().expect("validated nonempty").get() + REFERENCE_MARGIN,
    )?;
    let reference = initial.build(reference_level)?;

    let mut cfg = plan.integrator.clone();
    cfg.snapshot_times = plan.probe_times.clone();

    type LevelSnapshots = Result<Vec<(f64, DensityMatrix)>>;
    let mut results: Vec<Option<LevelSnapshots>> = (0..plan.levels.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for &level in &plan.levels {
            let cfg = &cfg;
            let reference = &reference;
            let base = &plan.base;
            handles.push(scope.spawn(move || -> LevelSnapshots {
                let model = base.with_level(level);
                let rho0 = reference.truncate(level)?;
                let record = evolve::integrate(&model, &rho0, cfg)?;
                record.snapshots.ok_or_else(|| {
                    Error::InvalidSweep("integrator returned no snapshots".into())
                })
            }));
        }
        for (slot, handle) in results.iter_mut().zip(handles) {
            *slot = Some(handle.join().expect("sweep worker panicked"));
        }
    });

    let mut snapshots_per_level = Vec::with_capacity(plan.levels.len());
    for (level, slot) in plan.levels.iter().zip(results) {
        let snaps = slot.expect("filled above").map_err(|e| Error::SweepLevel {
            level: level.get(),
            source: Box::new(e),
        })?;
        snapshots_per_level.push(snaps);
    }

    let mut rows = Vec::new();
    for &entry in &plan.probe_entries {
        for &time in &plan.probe_times {
            let mut values = Vec::with_capacity(plan.levels.len());
            for snaps in &snapshots_per_level {
                let (_, rho) = snaps
                    .iter()
                    .find(|(t, _)| (t - time).abs() <= 1e-9 * (1.0 + time.abs()))
                    .ok_or_else(|| {
                        Error::InvalidSweep(format!("missing snapshot at t = {time}"))
                    })?;
                values.push(rho.entry(entry.0, entry.1));
            }
            let diffs: Vec<f64> = values
                .windows(2)
                .map(|w| (w[0] - w[1]).norm())
                .collect();
            let strictly_decreasing = diffs
                .windows(2)
                .all(|w| w[1] < w[0] || (w[0] == 0.0 && w[1] == 0.0));
            let last = *diffs.last().expect("at least two levels");
            let last_is_smallest = diffs.iter().all(|&d| last <= d);
            let verdict = if last_is_smallest && last <= CONVERGENCE_THRESHOLD {
                ConvergenceVerdict::Converging
            } else {
                ConvergenceVerdict::NotConverging
            };
            rows.push(ProbeRow {
                entry,
                time,
                values,
                diffs,
                strictly_decreasing,
                verdict,
            });
        }
    }
    Ok(ConvergenceTable {
        levels: plan.levels.clone(),
        rows,
        threshold: CONVERGENCE_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::AtomicLevel;
    use crate::genspec::PolynomialOperatorSpec;

    fn lvl(nu: usize) -> TruncationLevel {
        TruncationLevel::new(nu).unwrap()
    }

    fn free_model() -> ModelSpec {
        ModelSpec {
            omega_c: 1.0,
            omega_a: 1.0,
            coupling: 0.0,
            damping: 0.0,
            pump: PolynomialOperatorSpec::default(),
            dissipators: vec![],
            level: lvl(4),
        }
    }

    #[test]
    fn invariant_subspace_is_level_independent() {
        // p = 0, gamma = 0, Fock start: the dynamics never leaves the
        // initial level, so all levels agree exactly.
        let plan = SweepPlan {
            base: free_model(),
            levels: vec![lvl(2), lvl(4), lvl(6)],
            probe_entries: vec![(
                BasisIndex::new(1, AtomicLevel::Up),
                BasisIndex::new(1, AtomicLevel::Up),
            )],
            probe_times: vec![0.5, 1.0],
            integrator: IntegratorConfig::rk4(1e-2, 1.0),
        };
        let initial = StateSpec::Fock {
            n: 1,
            s: AtomicLevel::Up,
        };
        let table = sweep(&plan, &initial).unwrap();
        assert_eq!(table.rows.len(), 2);
        for row in &table.rows {
            assert!(row.diffs.iter().all(|&d| d == 0.0));
            assert_eq!(row.verdict, ConvergenceVerdict::Converging);
        }
        assert!(table.all_converging());
    }

    #[test]
    fn probe_validation_rejects_out_of_range_entries() {
        let plan = SweepPlan {
            base: free_model(),
            levels: vec![lvl(2), lvl(4)],
            probe_entries: vec![(
                BasisIndex::new(3, AtomicLevel::Up),
                BasisIndex::new(0, AtomicLevel::Up),
            )],
            probe_times: vec![0.5],
            integrator: IntegratorConfig::rk4(1e-2, 1.0),
        };
        let initial = StateSpec::Fock {
            n: 0,
            s: AtomicLevel::Up,
        };
        assert!(matches!(
            sweep(&plan, &initial),
            Err(Error::InvalidSweep(_))
        ));
    }

    #[test]
    fn plan_validation_rules() {
        let mut plan = SweepPlan {
            base: free_model(),
            levels: vec![lvl(4), lvl(2)],
            probe_entries: vec![(
                BasisIndex::new(0, AtomicLevel::Up),
                BasisIndex::new(0, AtomicLevel::Up),
            )],
            probe_times: vec![0.5],
            integrator: IntegratorConfig::rk4(1e-2, 1.0),
        };
        assert!(plan.validate().is_err(), "levels must ascend");
        plan.levels = vec![lvl(2), lvl(4)];
        assert!(plan.validate().is_ok());
        plan.probe_times = vec![5.0];
        assert!(plan.validate().is_err(), "probe beyond t_max");
    }

    #[test]
    fn reference_truncation_norms_nondecreasing() {
        // ||truncate(ref, nu)|| is nondecreasing in nu and bounded by the
        // reference norm.
        let initial = StateSpec::Coherent {
            alpha: Complex64::new(1.2, 0.3),
            s: AtomicLevel::Up,
        };
        let reference = initial.build(lvl(40)).unwrap();
        let mut prev = 0.0;
        for nu in [4, 8, 16, 24] {
            let cut = reference.truncate(lvl(nu)).unwrap();
            let norm = cut.hs_norm();
            assert!(norm + 1e-15 >= prev);
            assert!(norm <= reference.hs_norm() + 1e-15);
            prev = norm;
        }
    }
}
