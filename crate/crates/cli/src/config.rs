//! JSON run configuration: schema, semantic validation, and conversion into
//! core types. Every rejection names the JSON path of the offending field.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use jcsim_core::evolve::{IntegratorConfig, Method};
use jcsim_core::fock::two_level;
use jcsim_core::genspec::{self, MonomialTerm, Preset, TrigCoefficient};
use jcsim_core::{
    AtomicLevel, BasisIndex, Complex64, DensityMatrix, ModelSpec, OperatorMatrix,
    PolynomialOperatorSpec, StateSpec, TruncationLevel,
};
use nalgebra::{DMatrix, Matrix2};

use crate::canon::{self, Value};
use crate::error::CliError;

fn cfg_err(path: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Config {
        path: path.into(),
        message: message.into(),
    }
}

// ---------------------------------------------------------------------------
// raw schema

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeConfig {
    Evolve,
    Sweep,
    Check,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub mode: ModeConfig,
    #[serde(default)]
    pub seed: u64,
    pub model: ModelSection,
    pub initial_state: StateSection,
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub check: Option<CheckSection>,
    #[serde(default)]
    pub outputs: OutputsSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub omega_c: f64,
    pub omega_a: f64,
    pub coupling: f64,
    pub damping: f64,
    pub truncation: usize,
    #[serde(default)]
    pub pump: Option<OperatorSection>,
    #[serde(default)]
    pub dissipators: Vec<OperatorSection>,
}

/// Either `{"preset": name, ...}` or `{"terms": [...]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSection {
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub omega_p: Option<f64>,
    #[serde(default)]
    pub terms: Option<Vec<TermSection>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSection {
    pub raising: usize,
    pub lowering: usize,
    pub coeff: Vec<CoeffSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffSection {
    /// 2x2 complex matrix, row-major, entries as `[re, im]`.
    pub matrix: [[[f64; 2]; 2]; 2],
    #[serde(default)]
    pub omega: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSection {
    Fock { n: usize, s: String },
    Coherent { alpha: [f64; 2], s: String },
    Thermal { mean_n: f64, s: String },
    Explicit { entries: Vec<Vec<[f64; 2]>> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodConfig {
    Rk4,
    Rk45,
    UnitaryExact,
    PiecewiseConst,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    #[serde(default = "default_method")]
    pub method: MethodConfig,
    /// Defaults to `1e-3` of the cavity period `2 pi / omega_c`.
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    pub t_max: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
}

fn default_method() -> MethodConfig {
    MethodConfig::Rk4
}
fn default_rel_tol() -> f64 {
    1e-8
}
fn default_abs_tol() -> f64 {
    1e-10
}
fn default_record_every() -> usize {
    10
}
fn default_epsilon() -> f64 {
    0.1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub levels: Vec<usize>,
    pub probe_entries: Vec<ProbeSection>,
    pub probe_times: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSection {
    pub n: usize,
    pub s: String,
    pub np: usize,
    pub sp: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSection {
    #[serde(default)]
    pub claims: Option<Vec<String>>,
    #[serde(default)]
    pub allow_violations: Vec<String>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// States driven through the trajectory claims; defaults to the
    /// top-level `initial_state`.
    #[serde(default)]
    pub states: Option<Vec<StateSection>>,
}

fn default_trials() -> usize {
    1000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSection {
    #[serde(default = "default_observables_file")]
    pub observables: String,
    #[serde(default = "default_snapshots_file")]
    pub snapshots: String,
    #[serde(default = "default_convergence_file")]
    pub convergence: String,
    #[serde(default = "default_claims_file")]
    pub claims: String,
}

impl Default for OutputsSection {
    fn default() -> Self {
        OutputsSection {
            observables: default_observables_file(),
            snapshots: default_snapshots_file(),
            convergence: default_convergence_file(),
            claims: default_claims_file(),
        }
    }
}

fn default_observables_file() -> String {
    "observables.csv".into()
}
fn default_snapshots_file() -> String {
    "snapshots.json".into()
}
fn default_convergence_file() -> String {
    "convergence.csv".into()
}
fn default_claims_file() -> String {
    "claims.json".into()
}

// ---------------------------------------------------------------------------
// resolved configuration

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Evolve,
    Sweep,
    Check,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Evolve => "evolve",
            Mode::Sweep => "sweep",
            Mode::Check => "check",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepPlanConfig {
    pub levels: Vec<TruncationLevel>,
    pub probe_entries: Vec<(BasisIndex, BasisIndex)>,
    pub probe_times: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct CheckPlan {
    pub claims: Vec<jcsim_core::claims::ClaimKind>,
    pub allow_violations: Vec<String>,
    pub trials: usize,
    pub states: Vec<StateSpec>,
}

/// Fully validated run description.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub seed: u64,
    pub model: ModelSpec,
    pub initial_state: StateSpec,
    pub integrator: IntegratorConfig,
    pub sweep: Option<SweepPlanConfig>,
    pub check: Option<CheckPlan>,
    pub outputs: OutputsSection,
}

/// Read and fully validate a configuration file.
pub fn parse_config(path: &Path) -> Result<RunConfig, CliError> {
    load(path, None, None)
}

/// Read a configuration file, apply command-line overrides, validate.
pub fn load(
    path: &Path,
    mode_override: Option<&str>,
    seed_override: Option<u64>,
) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut raw = parse_raw(&text)?;
    if let Some(mode) = mode_override {
        raw.mode = match mode {
            "evolve" => ModeConfig::Evolve,
            "sweep" => ModeConfig::Sweep,
            "check" => ModeConfig::Check,
            other => {
                return Err(cfg_err(
                    "--mode",
                    format!("unknown mode `{other}`; expected evolve, sweep, or check"),
                ))
            }
        };
    }
    if let Some(seed) = seed_override {
        raw.seed = seed;
    }
    resolve(raw)
}

/// Parse and validate configuration text.
pub fn parse_config_str(text: &str) -> Result<RunConfig, CliError> {
    resolve(parse_raw(text)?)
}

fn parse_raw(text: &str) -> Result<RawConfig, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        cfg_err(
            if path == "." { "<root>".to_string() } else { path },
            e.inner().to_string(),
        )
    })
}

fn resolve(raw: RawConfig) -> Result<RunConfig, CliError> {
    let mode = match raw.mode {
        ModeConfig::Evolve => Mode::Evolve,
        ModeConfig::Sweep => Mode::Sweep,
        ModeConfig::Check => Mode::Check,
    };

    let level = TruncationLevel::new(raw.model.truncation)
        .map_err(|e| cfg_err("model.truncation", e.to_string()))?;

    let pump = match &raw.model.pump {
        Some(section) => operator_spec(section, "model.pump")?,
        None => PolynomialOperatorSpec::default(),
    };
    let mut dissipators = Vec::new();
    for (i, section) in raw.model.dissipators.iter().enumerate() {
        dissipators.push(operator_spec(section, &format!("model.dissipators[{i}]"))?);
    }

    let model = ModelSpec {
        omega_c: raw.model.omega_c,
        omega_a: raw.model.omega_a,
        coupling: raw.model.coupling,
        damping: raw.model.damping,
        pump,
        dissipators,
        level,
    };

    let integrator = integrator_config(&raw.integrator, model.omega_c)?;
    integrator
        .validate()
        .map_err(|e| cfg_err("integrator", e.to_string()))?;

    // Pump Hermiticity is part of model validation; attribute the failure
    // to the pump field.
    model.validate(integrator.t_max).map_err(|e| match e {
        jcsim_core::Error::PumpNotHermitian(report) => {
            cfg_err("model.pump", format!("pump must be Hermitian: {report}"))
        }
        other => cfg_err("model", other.to_string()),
    })?;

    let initial_state = state_spec(&raw.initial_state, "initial_state", level)?;
    // Surface unbuildable states (photon index out of range &c.) now.
    initial_state
        .build(level)
        .map_err(|e| cfg_err("initial_state", e.to_string()))?;

    let sweep = match (&mode, &raw.sweep) {
        (Mode::Sweep, Some(section)) => Some(sweep_plan(section, level)?),
        (Mode::Sweep, None) => {
            return Err(cfg_err("sweep", "sweep mode requires a `sweep` section"))
        }
        (_, Some(_)) => {
            return Err(cfg_err(
                "sweep",
                format!("`sweep` section is only valid in sweep mode (mode is {})", mode.name()),
            ))
        }
        (_, None) => None,
    };

    let check = match (&mode, &raw.check) {
        (Mode::Check, section) => Some(check_plan(
            section.as_ref(),
            &raw.initial_state,
            level,
            &model,
        )?),
        (_, Some(_)) => {
            return Err(cfg_err(
                "check",
                format!("`check` section is only valid in check mode (mode is {})", mode.name()),
            ))
        }
        (_, None) => None,
    };

    Ok(RunConfig {
        mode,
        seed: raw.seed,
        model,
        initial_state,
        integrator,
        sweep,
        check,
        outputs: raw.outputs,
    })
}

fn complex_of(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

fn atomic_level(s: &str, path: &str) -> Result<AtomicLevel, CliError> {
    match s {
        "+" => Ok(AtomicLevel::Up),
        "-" => Ok(AtomicLevel::Down),
        other => Err(cfg_err(path, format!("atomic level must be \"+\" or \"-\", got \"{other}\""))),
    }
}

fn operator_spec(
    section: &OperatorSection,
    path: &str,
) -> Result<PolynomialOperatorSpec, CliError> {
    match (&section.preset, &section.terms) {
        (Some(_), Some(_)) => Err(cfg_err(
            path,
            "give either `preset` or `terms`, not both",
        )),
        (None, None) => Err(cfg_err(path, "give `preset` or `terms`")),
        (Some(name), None) => {
            let preset = Preset::by_name(name, section.omega_p)
                .map_err(|e| cfg_err(format!("{path}.preset"), e.to_string()))?;
            if section.omega_p.is_some() && !matches!(preset, Preset::PumpCollapseRevival { .. }) {
                return Err(cfg_err(
                    format!("{path}.omega_p"),
                    format!("preset `{name}` takes no omega_p parameter"),
                ));
            }
            Ok(genspec::preset(preset))
        }
        (None, Some(terms)) => {
            if section.omega_p.is_some() {
                return Err(cfg_err(
                    format!("{path}.omega_p"),
                    "omega_p is only meaningful with a preset",
                ));
            }
            let mut out = Vec::new();
            for (i, term) in terms.iter().enumerate() {
                let mut components = Vec::new();
                for (j, coeff) in term.coeff.iter().enumerate() {
                    let m = Matrix2::new(
                        complex_of(coeff.matrix[0][0]),
                        complex_of(coeff.matrix[0][1]),
                        complex_of(coeff.matrix[1][0]),
                        complex_of(coeff.matrix[1][1]),
                    );
                    components.push((m, coeff.omega));
                    if !coeff.omega.is_finite() {
                        return Err(cfg_err(
                            format!("{path}.terms[{i}].coeff[{j}].omega"),
                            "frequency must be finite",
                        ));
                    }
                }
                let coeff = TrigCoefficient::new(components).map_err(|e| {
                    cfg_err(format!("{path}.terms[{i}].coeff"), e.to_string())
                })?;
                out.push(MonomialTerm {
                    raising: term.raising,
                    lowering: term.lowering,
                    coeff,
                });
            }
            Ok(PolynomialOperatorSpec::new(out))
        }
    }
}

fn state_spec(
    section: &StateSection,
    path: &str,
    level: TruncationLevel,
) -> Result<StateSpec, CliError> {
    match section {
        StateSection::Fock { n, s } => Ok(StateSpec::Fock {
            n: *n,
            s: atomic_level(s, &format!("{path}.s"))?,
        }),
        StateSection::Coherent { alpha, s } => Ok(StateSpec::Coherent {
            alpha: complex_of(*alpha),
            s: atomic_level(s, &format!("{path}.s"))?,
        }),
        StateSection::Thermal { mean_n, s } => Ok(StateSpec::Thermal {
            mean_n: *mean_n,
            s: atomic_level(s, &format!("{path}.s"))?,
        }),
        StateSection::Explicit { entries } => {
            let d = entries.len();
            if d < 4 || d % 2 != 0 {
                return Err(cfg_err(
                    format!("{path}.entries"),
                    format!("matrix dimension must be even and at least 4, got {d}"),
                ));
            }
            if entries.iter().any(|row| row.len() != d) {
                return Err(cfg_err(
                    format!("{path}.entries"),
                    "matrix must be square",
                ));
            }
            let m = DMatrix::from_fn(d, d, |r, c| complex_of(entries[r][c]));
            let op = OperatorMatrix::from_matrix(m)
                .map_err(|e| cfg_err(format!("{path}.entries"), e.to_string()))?;
            let rho = DensityMatrix::new(op)
                .map_err(|e| cfg_err(format!("{path}.entries"), e.to_string()))?;
            // The matrix is truncated or zero-padded to the model level.
            let _ = level;
            Ok(StateSpec::Explicit(rho))
        }
    }
}

fn integrator_config(
    section: &IntegratorSection,
    omega_c: f64,
) -> Result<IntegratorConfig, CliError> {
    let method = match section.method {
        MethodConfig::Rk4 => Method::Rk4,
        MethodConfig::Rk45 => Method::Rk45,
        MethodConfig::UnitaryExact => Method::UnitaryExact,
        MethodConfig::PiecewiseConst => Method::PiecewiseConst,
    };
    let dt = match section.dt {
        Some(dt) => dt,
        None => {
            if !(omega_c > 0.0) {
                return Err(cfg_err(
                    "integrator.dt",
                    "cannot derive the default step from a non-positive omega_c",
                ));
            }
            IntegratorConfig::default_dt(omega_c)
        }
    };
    Ok(IntegratorConfig {
        method,
        dt,
        rel_tol: section.rel_tol,
        abs_tol: section.abs_tol,
        t_max: section.t_max,
        record_every: section.record_every,
        epsilon: section.epsilon,
        snapshot_times: section.snapshot_times.clone(),
    })
}

fn sweep_plan(section: &SweepSection, _level: TruncationLevel) -> Result<SweepPlanConfig, CliError> {
    let mut levels = Vec::new();
    for (i, nu) in section.levels.iter().enumerate() {
        levels.push(
            TruncationLevel::new(*nu)
                .map_err(|e| cfg_err(format!("sweep.levels[{i}]"), e.to_string()))?,
        );
    }
    let mut probe_entries = Vec::new();
    for (i, probe) in section.probe_entries.iter().enumerate() {
        probe_entries.push((
            BasisIndex::new(
                probe.n,
                atomic_level(&probe.s, &format!("sweep.probe_entries[{i}].s"))?,
            ),
            BasisIndex::new(
                probe.np,
                atomic_level(&probe.sp, &format!("sweep.probe_entries[{i}].sp"))?,
            ),
        ));
    }
    Ok(SweepPlanConfig {
        levels,
        probe_entries,
        probe_times: section.probe_times.clone(),
    })
}

fn check_plan(
    section: Option<&CheckSection>,
    initial_state: &StateSection,
    level: TruncationLevel,
    model: &ModelSpec,
) -> Result<CheckPlan, CliError> {
    use jcsim_core::claims::ClaimKind;
    let default_section;
    let section = match section {
        Some(s) => s,
        None => {
            default_section = CheckSection {
                claims: None,
                allow_violations: Vec::new(),
                trials: default_trials(),
                states: None,
            };
            &default_section
        }
    };
    let claims = match &section.claims {
        None => ClaimKind::all().to_vec(),
        Some(names) => {
            let mut out = Vec::new();
            for (i, name) in names.iter().enumerate() {
                out.push(
                    ClaimKind::by_name(name)
                        .map_err(|e| cfg_err(format!("check.claims[{i}]"), e.to_string()))?,
                );
            }
            out
        }
    };
    for (i, name) in section.allow_violations.iter().enumerate() {
        ClaimKind::by_name(name)
            .map_err(|e| cfg_err(format!("check.allow_violations[{i}]"), e.to_string()))?;
    }
    if claims.contains(&ClaimKind::DissipatorSign) && model.dissipators.is_empty() {
        return Err(cfg_err(
            "check.claims",
            "dissipator_sign requires at least one model dissipator",
        ));
    }
    let states = match &section.states {
        None => vec![state_spec(initial_state, "initial_state", level)?],
        Some(sections) => {
            let mut out = Vec::new();
            for (i, s) in sections.iter().enumerate() {
                out.push(state_spec(s, &format!("check.states[{i}]"), level)?);
            }
            out
        }
    };
    Ok(CheckPlan {
        claims,
        allow_violations: section.allow_violations.clone(),
        trials: section.trials,
        states,
    })
}

// ---------------------------------------------------------------------------
// canonical re-emission

/// Canonical JSON for a resolved configuration: defaults materialized,
/// presets expanded to their term form, keys sorted. Stable under reparse.
pub fn canonical_config(cfg: &RunConfig) -> Value {
    let model = &cfg.model;
    let mut root = BTreeMap::new();
    root.insert("mode".to_string(), Value::Str(cfg.mode.name().into()));
    root.insert("seed".to_string(), Value::UInt(cfg.seed));
    root.insert(
        "model".to_string(),
        Value::object([
            ("omega_c", Value::Float(model.omega_c)),
            ("omega_a", Value::Float(model.omega_a)),
            ("coupling", Value::Float(model.coupling)),
            ("damping", Value::Float(model.damping)),
            ("truncation", Value::UInt(model.level.get() as u64)),
            ("pump", operator_value(&model.pump)),
            (
                "dissipators",
                Value::Array(model.dissipators.iter().map(operator_value).collect()),
            ),
        ]),
    );
    root.insert("initial_state".to_string(), state_value(&cfg.initial_state));
    let integ = &cfg.integrator;
    root.insert(
        "integrator".to_string(),
        Value::object([
            ("method", Value::Str(integ.method.name().into())),
            ("dt", Value::Float(integ.dt)),
            ("rel_tol", Value::Float(integ.rel_tol)),
            ("abs_tol", Value::Float(integ.abs_tol)),
            ("t_max", Value::Float(integ.t_max)),
            ("record_every", Value::UInt(integ.record_every as u64)),
            ("epsilon", Value::Float(integ.epsilon)),
            (
                "snapshot_times",
                Value::Array(integ.snapshot_times.iter().map(|&t| Value::Float(t)).collect()),
            ),
        ]),
    );
    if let Some(sweep) = &cfg.sweep {
        root.insert(
            "sweep".to_string(),
            Value::object([
                (
                    "levels",
                    Value::Array(
                        sweep
                            .levels
                            .iter()
                            .map(|l| Value::UInt(l.get() as u64))
                            .collect(),
                    ),
                ),
                (
                    "probe_entries",
                    Value::Array(
                        sweep
                            .probe_entries
                            .iter()
                            .map(|(row, col)| {
                                Value::object([
                                    ("n", Value::UInt(row.n as u64)),
                                    ("s", Value::Str(row.s.symbol().into())),
                                    ("np", Value::UInt(col.n as u64)),
                                    ("sp", Value::Str(col.s.symbol().into())),
                                ])
                            })
                            .collect(),
                    ),
                ),
                (
                    "probe_times",
                    Value::Array(sweep.probe_times.iter().map(|&t| Value::Float(t)).collect()),
                ),
            ]),
        );
    }
    if let Some(check) = &cfg.check {
        root.insert(
            "check".to_string(),
            Value::object([
                (
                    "claims",
                    Value::Array(
                        check
                            .claims
                            .iter()
                            .map(|c| Value::Str(c.name().into()))
                            .collect(),
                    ),
                ),
                (
                    "allow_violations",
                    Value::Array(
                        check
                            .allow_violations
                            .iter()
                            .map(|s| Value::Str(s.clone()))
                            .collect(),
                    ),
                ),
                ("trials", Value::UInt(check.trials as u64)),
                (
                    "states",
                    Value::Array(check.states.iter().map(state_value).collect()),
                ),
            ]),
        );
    }
    root.insert(
        "outputs".to_string(),
        Value::object([
            ("observables", Value::Str(cfg.outputs.observables.clone())),
            ("snapshots", Value::Str(cfg.outputs.snapshots.clone())),
            ("convergence", Value::Str(cfg.outputs.convergence.clone())),
            ("claims", Value::Str(cfg.outputs.claims.clone())),
        ]),
    );
    Value::Object(root)
}

/// Term-form encoding of an operator polynomial.
pub fn operator_value(spec: &PolynomialOperatorSpec) -> Value {
    let terms: Vec<Value> = spec
        .terms()
        .iter()
        .map(|term| {
            let coeff: Vec<Value> = term
                .coeff
                .components()
                .iter()
                .map(|(m, omega)| {
                    Value::object([
                        ("matrix", matrix2_value(m)),
                        ("omega", Value::Float(*omega)),
                    ])
                })
                .collect();
            Value::object([
                ("raising", Value::UInt(term.raising as u64)),
                ("lowering", Value::UInt(term.lowering as u64)),
                ("coeff", Value::Array(coeff)),
            ])
        })
        .collect();
    Value::object([("terms", Value::Array(terms))])
}

fn matrix2_value(m: &Matrix2<Complex64>) -> Value {
    Value::Array(
        (0..2)
            .map(|r| {
                Value::Array((0..2).map(|c| Value::complex(m[(r, c)])).collect())
            })
            .collect(),
    )
}

fn state_value(state: &StateSpec) -> Value {
    match state {
        StateSpec::Fock { n, s } => Value::object([
            ("kind", Value::Str("fock".into())),
            ("n", Value::UInt(*n as u64)),
            ("s", Value::Str(s.symbol().into())),
        ]),
        StateSpec::Coherent { alpha, s } => Value::object([
            ("kind", Value::Str("coherent".into())),
            ("alpha", Value::complex(*alpha)),
            ("s", Value::Str(s.symbol().into())),
        ]),
        StateSpec::Thermal { mean_n, s } => Value::object([
            ("kind", Value::Str("thermal".into())),
            ("mean_n", Value::Float(*mean_n)),
            ("s", Value::Str(s.symbol().into())),
        ]),
        StateSpec::Explicit(rho) => Value::object([
            ("kind", Value::Str("explicit".into())),
            ("entries", Value::matrix(rho.operator().matrix())),
        ]),
    }
}

/// Two-level helper exposed for tests building configs programmatically.
pub fn sigma_plus_matrix_json() -> [[[f64; 2]; 2]; 2] {
    let m = two_level::sigma_plus();
    [
        [[m[(0, 0)].re, m[(0, 0)].im], [m[(0, 1)].re, m[(0, 1)].im]],
        [[m[(1, 0)].re, m[(1, 0)].im], [m[(1, 1)].re, m[(1, 1)].im]],
    ]
}

// Canonical text form of a full config.
pub fn canonical_config_json(cfg: &RunConfig) -> String {
    canon::to_json(&canonical_config(cfg))
}
