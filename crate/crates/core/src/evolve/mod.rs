//! Time integration of the truncated master equation.
//!
//! Four methods:
//! - `rk4`: classical fixed-step Runge-Kutta on the `d x d` matrix equation;
//! - `rk45`: embedded Dormand-Prince 5(4) with step-size control;
//! - `unitary_exact`: spectral propagator `e^{-iHt} rho e^{iHt}`, available
//!   when `gamma = 0` and the pump is time-constant — the exactness anchor
//!   for the Runge-Kutta paths;
//! - `piecewise_const`: coefficients frozen at the left edge of each window
//!   `[eps*n, eps*(n+1))`, each window integrated as an autonomous system
//!   with rk4 substeps. The discrepancy against the exact-coefficient run
//!   shrinks linearly in `eps`.
//!
//! After every accepted step the state is re-Hermitized as `(rho + rho')/2`
//! and the removed defect is recorded; positivity is never enforced, only
//! measured. Observables are recorded at `t = 0`, every `record_every`-th
//! accepted step, and `t_max`.

mod engine;

pub(crate) use engine::{from_flat, to_flat};

use num_complex::Complex64;

use crate::density::{DensityMatrix, ObservableSet};
use crate::error::{Error, Result};
use crate::lindblad::ModelSpec;
use engine::{GeneratorEngine, Workspace};

/// Integration method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rk4,
    Rk45,
    UnitaryExact,
    PiecewiseConst,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
            Method::Rk45 => "rk45",
            Method::UnitaryExact => "unitary_exact",
            Method::PiecewiseConst => "piecewise_const",
        }
    }
}

/// Integrator configuration.
///
/// `dt` is the rk4 step (and the rk45 initial step); `epsilon` is the
/// window length of the piecewise-constant mode. `snapshot_times` forces
/// the stepper to land exactly on the listed times and store the state
/// there.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub dt: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_max: f64,
    pub record_every: usize,
    pub epsilon: f64,
    pub snapshot_times: Vec<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::Rk4,
            dt: 1e-3,
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            t_max: 10.0,
            record_every: 10,
            epsilon: 0.1,
            snapshot_times: Vec::new(),
        }
    }
}

impl IntegratorConfig {
    /// Fixed-step rk4 configuration.
    pub fn rk4(dt: f64, t_max: f64) -> Self {
        IntegratorConfig {
            method: Method::Rk4,
            dt,
            t_max,
            ..Default::default()
        }
    }

    /// Default rk4 step for a cavity of frequency `omega_c`: `1e-3` of the
    /// cavity period.
    pub fn default_dt(omega_c: f64) -> f64 {
        1e-3 * std::f64::consts::TAU / omega_c
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidIntegrator(msg));
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return fail(format!("dt must be positive and finite, got {}", self.dt));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return fail(format!(
                "t_max must be positive and finite, got {}",
                self.t_max
            ));
        }
        if self.t_max < self.dt {
            return fail(format!(
                "t_max = {} must be at least dt = {}",
                self.t_max, self.dt
            ));
        }
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return fail("tolerances must be positive".into());
        }
        if self.record_every == 0 {
            return fail("record_every must be at least 1".into());
        }
        if self.method == Method::PiecewiseConst && !(self.epsilon > 0.0) {
            return fail(format!(
                "piecewise window epsilon must be positive, got {}",
                self.epsilon
            ));
        }
        for &t in &self.snapshot_times {
            if !(t >= 0.0) || t > self.t_max || !t.is_finite() {
                return fail(format!("snapshot time {t} outside [0, t_max]"));
            }
        }
        Ok(())
    }
}

/// Time series of observables plus trajectory-level diagnostics.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub observables: Vec<ObservableSet>,
    /// States captured at the requested snapshot times.
    pub snapshots: Option<Vec<(f64, DensityMatrix)>>,
    /// Largest Hermiticity defect removed by per-step symmetrization.
    pub max_hermiticity_defect: f64,
    /// Smallest eigenvalue over all recorded states.
    pub min_eigenvalue_seen: f64,
    /// Max over recorded times of `||rho(t)|| / ||rho(0)||`.
    pub hs_norm_max_ratio: f64,
    /// State at `t_max`.
    pub final_state: DensityMatrix,
    /// Number of accepted steps.
    pub steps: usize,
}

impl TrajectoryRecord {
    /// Observable row closest to time `t`.
    pub fn nearest(&self, t: f64) -> (f64, &ObservableSet) {
        let mut best = 0;
        let mut dist = f64::INFINITY;
        for (i, &ti) in self.times.iter().enumerate() {
            let d = (ti - t).abs();
            if d < dist {
                dist = d;
                best = i;
            }
        }
        (self.times[best], &self.observables[best])
    }
}

/// Reusable sparse realization of the generator for hot loops.
///
/// Functionally identical to [`crate::lindblad::generator_apply`] (tested
/// against it), but amortizes operator assembly: application costs
/// `O(d^2 * band)` instead of dense `O(d^3)`.
pub struct FastGenerator {
    engine: GeneratorEngine,
    ws: Workspace,
    out: Vec<Complex64>,
}

impl FastGenerator {
    pub fn new(model: &ModelSpec) -> Result<Self> {
        let engine = GeneratorEngine::new(model)?;
        let d = engine.dim();
        Ok(FastGenerator {
            engine,
            ws: Workspace::default(),
            out: vec![Complex64::ZERO; d * d],
        })
    }

    pub fn dim(&self) -> usize {
        self.engine.dim()
    }

    /// `A(t) rho`.
    pub fn apply(
        &mut self,
        t: f64,
        rho: &crate::fock::OperatorMatrix,
    ) -> Result<crate::fock::OperatorMatrix> {
        if rho.dim() != self.engine.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.engine.dim(),
                got: rho.dim(),
            });
        }
        let flat = to_flat(rho.matrix());
        self.engine.apply_into(t, &flat, &mut self.out, &mut self.ws);
        Ok(crate::fock::OperatorMatrix::from_matrix(from_flat(
            self.engine.dim(),
            &self.out,
        ))
        .expect("square"))
    }

    /// `tr(A(t) rho)` without materializing the output operator.
    pub fn apply_trace(&mut self, t: f64, rho: &crate::fock::OperatorMatrix) -> Result<Complex64> {
        if rho.dim() != self.engine.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.engine.dim(),
                got: rho.dim(),
            });
        }
        let d = self.engine.dim();
        let flat = to_flat(rho.matrix());
        self.engine.apply_into(t, &flat, &mut self.out, &mut self.ws);
        Ok((0..d).map(|i| self.out[i * d + i]).sum())
    }
}

/// Integrate the master equation with the configured method.
pub fn integrate(
    model: &ModelSpec,
    rho0: &DensityMatrix,
    cfg: &IntegratorConfig,
) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    if rho0.dim() != model.level.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.level.dim(),
            got: rho0.dim(),
        });
    }
    match cfg.method {
        Method::Rk4 => integrate_rk4(model, rho0, cfg),
        Method::Rk45 => integrate_rk45(model, rho0, cfg),
        Method::UnitaryExact => integrate_unitary(model, rho0, cfg),
        Method::PiecewiseConst => integrate_piecewise_const(model, rho0, cfg),
    }
}

/// Exact solution `e^{-iHt} rho0 e^{iHt}` for autonomous Hamiltonian flow.
///
/// Requires `gamma = 0` and a time-constant pump; errors otherwise.
pub fn unitary_oracle(model: &ModelSpec, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    check_unitary_applicable(model)?;
    if rho0.dim() != model.level.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.level.dim(),
            got: rho0.dim(),
        });
    }
    let propagator = spectral_propagator(model, t)?;
    let evolved = &propagator * rho0.operator().matrix() * propagator.adjoint();
    let (rho, _) = DensityMatrix::symmetrized(
        crate::fock::OperatorMatrix::from_matrix(evolved).expect("square"),
    );
    Ok(rho)
}

/// Integrate with pump/dissipator coefficients frozen on windows
/// `[eps*n, eps*(n+1))`.
pub fn integrate_piecewise_const(
    model: &ModelSpec,
    rho0: &DensityMatrix,
    cfg: &IntegratorConfig,
) -> Result<TrajectoryRecord> {
    if !(cfg.epsilon > 0.0) {
        return Err(Error::InvalidIntegrator(format!(
            "piecewise window epsilon must be positive, got {}",
            cfg.epsilon
        )));
    }
    let engine = GeneratorEngine::new(model)?;
    let mut recorder = Recorder::new(rho0, cfg)?;
    let mut buffers = RkBuffers::new(engine.dim());
    let mut state = to_flat(rho0.operator().matrix());

    // Window boundaries become mandatory breakpoints on top of snapshots.
    let mut boundaries: Vec<f64> = Vec::new();
    let mut k = 1usize;
    while (k as f64) * cfg.epsilon < cfg.t_max {
        boundaries.push(k as f64 * cfg.epsilon);
        k += 1;
    }
    let segments = build_segments(cfg, &boundaries)?;
    for segment in &segments {
        // Freeze at the window containing the segment start.
        let window_start = (segment.start / cfg.epsilon).floor() * cfg.epsilon;
        let frozen = engine.frozen_at(window_start);
        run_rk4_segment(&frozen, segment, &mut state, &mut buffers, &mut recorder)?;
    }
    recorder.finish(cfg.t_max, &state)
}

// ---------------------------------------------------------------------------
// shared stepping machinery

/// A stepping range `[start, end]` with target step `dt`.
#[derive(Debug, Clone, Copy)]
struct Segment {
    start: f64,
    end: f64,
    dt: f64,
}

/// Split `[0, t_max]` at the snapshot times (plus any extra breakpoints),
/// assigning each piece a uniform substep no larger than `cfg.dt`.
fn build_segments(cfg: &IntegratorConfig, extra: &[f64]) -> Result<Vec<Segment>> {
    let mut cuts: Vec<f64> = cfg
        .snapshot_times
        .iter()
        .chain(extra.iter())
        .copied()
        .filter(|&t| t > 0.0 && t < cfg.t_max)
        .collect();
    cuts.push(cfg.t_max);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut segments = Vec::with_capacity(cuts.len());
    let mut start = 0.0;
    for &end in &cuts {
        if end - start <= 0.0 {
            continue;
        }
        let n = ((end - start) / cfg.dt - 1e-9).ceil().max(1.0) as usize;
        segments.push(Segment {
            start,
            end,
            dt: (end - start) / n as f64,
        });
        start = end;
    }
    if segments.is_empty() {
        return Err(Error::InvalidIntegrator("empty integration range".into()));
    }
    Ok(segments)
}

struct RkBuffers {
    k: [Vec<Complex64>; 7],
    stage: Vec<Complex64>,
    ws: Workspace,
}

impl RkBuffers {
    fn new(dim: usize) -> Self {
        let zeros = vec![Complex64::ZERO; dim * dim];
        RkBuffers {
            k: [
                zeros.clone(),
                zeros.clone(),
                zeros.clone(),
                zeros.clone(),
                zeros.clone(),
                zeros.clone(),
                zeros.clone(),
            ],
            stage: zeros,
            ws: Workspace::default(),
        }
    }
}

/// Trajectory bookkeeping: records, snapshots, defects, extrema.
struct Recorder {
    record_every: usize,
    snapshot_queue: Vec<f64>,
    want_snapshots: bool,
    times: Vec<f64>,
    observables: Vec<ObservableSet>,
    snapshots: Vec<(f64, DensityMatrix)>,
    max_defect: f64,
    min_eig_seen: f64,
    max_ratio: f64,
    norm0: f64,
    dim: usize,
    steps: usize,
}

impl Recorder {
    fn new(rho0: &DensityMatrix, cfg: &IntegratorConfig) -> Result<Self> {
        let mut queue: Vec<f64> = cfg.snapshot_times.clone();
        queue.sort_by(f64::total_cmp);
        queue.dedup();
        queue.reverse(); // pop() yields the earliest pending time
        let mut recorder = Recorder {
            record_every: cfg.record_every,
            want_snapshots: !queue.is_empty(),
            snapshot_queue: queue,
            times: Vec::new(),
            observables: Vec::new(),
            snapshots: Vec::new(),
            max_defect: 0.0,
            min_eig_seen: f64::INFINITY,
            max_ratio: 0.0,
            norm0: rho0.hs_norm(),
            dim: rho0.dim(),
            steps: 0,
        };
        let flat0 = to_flat(rho0.operator().matrix());
        recorder.record(0.0, &flat0)?;
        recorder.take_snapshot_if_due(0.0, &flat0)?;
        Ok(recorder)
    }

    fn state_at(&self, flat: &[Complex64]) -> Result<DensityMatrix> {
        DensityMatrix::new(
            crate::fock::OperatorMatrix::from_matrix(from_flat(self.dim, flat)).expect("square"),
        )
    }

    fn record(&mut self, t: f64, flat: &[Complex64]) -> Result<()> {
        if self.times.last() == Some(&t) {
            return Ok(());
        }
        let rho = self.state_at(flat)?;
        let obs = rho.observables()?;
        self.min_eig_seen = self.min_eig_seen.min(obs.min_eigenvalue);
        if self.norm0 > 0.0 {
            self.max_ratio = self.max_ratio.max(obs.hs_norm / self.norm0);
        } else {
            self.max_ratio = self.max_ratio.max(1.0);
        }
        self.times.push(t);
        self.observables.push(obs);
        Ok(())
    }

    fn take_snapshot_if_due(&mut self, t: f64, flat: &[Complex64]) -> Result<()> {
        while let Some(&next) = self.snapshot_queue.last() {
            if (next - t).abs() <= 1e-9 * (1.0 + t.abs()) {
                self.snapshot_queue.pop();
                let rho = self.state_at(flat)?;
                self.snapshots.push((t, rho));
            } else {
                break;
            }
        }
        Ok(())
    }

    /// Per accepted step: fold in the symmetrization defect, scan for
    /// non-finite entries, and record when the step counter is due.
    fn on_accepted_step(
        &mut self,
        t: f64,
        flat: &[Complex64],
        defect: f64,
        context: &str,
    ) -> Result<()> {
        self.steps += 1;
        self.max_defect = self.max_defect.max(defect);
        if flat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                t,
                context: context.into(),
            });
        }
        if self.steps % self.record_every == 0 {
            self.record(t, flat)?;
        }
        self.take_snapshot_if_due(t, flat)?;
        Ok(())
    }

    fn finish(mut self, t_max: f64, flat: &[Complex64]) -> Result<TrajectoryRecord> {
        self.record(t_max, flat)?;
        self.take_snapshot_if_due(t_max, flat)?;
        let final_state = self.state_at(flat)?;
        Ok(TrajectoryRecord {
            times: self.times,
            observables: self.observables,
            snapshots: if self.want_snapshots {
                Some(self.snapshots)
            } else {
                None
            },
            max_hermiticity_defect: self.max_defect,
            min_eigenvalue_seen: self.min_eig_seen,
            hs_norm_max_ratio: self.max_ratio,
            final_state,
            steps: self.steps,
        })
    }
}

/// One classical rk4 step of size `h` at time `t`, in place.
fn rk4_step(
    engine: &GeneratorEngine,
    t: f64,
    h: f64,
    state: &mut [Complex64],
    buf: &mut RkBuffers,
) {
    let half = 0.5 * h;
    let [k1, k2, k3, k4, ..] = &mut buf.k;

    engine.apply_into(t, state, k1, &mut buf.ws);
    axpy_into(&mut buf.stage, state, k1, half);
    engine.apply_into(t + half, &buf.stage, k2, &mut buf.ws);
    axpy_into(&mut buf.stage, state, k2, half);
    engine.apply_into(t + half, &buf.stage, k3, &mut buf.ws);
    axpy_into(&mut buf.stage, state, k3, h);
    engine.apply_into(t + h, &buf.stage, k4, &mut buf.ws);

    let w = h / 6.0;
    for i in 0..state.len() {
        state[i] += w * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    }
}

/// `out = base + c * k`.
fn axpy_into(out: &mut Vec<Complex64>, base: &[Complex64], k: &[Complex64], c: f64) {
    out.clear();
    out.extend(base.iter().zip(k).map(|(b, kv)| b + c * kv));
}

fn run_rk4_segment(
    engine: &GeneratorEngine,
    segment: &Segment,
    state: &mut [Complex64],
    buffers: &mut RkBuffers,
    recorder: &mut Recorder,
) -> Result<()> {
    let n = ((segment.end - segment.start) / segment.dt).round() as usize;
    for i in 0..n {
        let t = segment.start + i as f64 * segment.dt;
        rk4_step(engine, t, segment.dt, state, buffers);
        let defect = engine::hermitize_flat(engine.dim(), state);
        let t_next = if i + 1 == n {
            segment.end
        } else {
            segment.start + (i + 1) as f64 * segment.dt
        };
        recorder.on_accepted_step(t_next, state, defect, "rk4 step")?;
    }
    Ok(())
}

fn integrate_rk4(
    model: &ModelSpec,
    rho0: &DensityMatrix,
    cfg: &IntegratorConfig,
) -> Result<TrajectoryRecord> {
    let engine = GeneratorEngine::new(model)?;
    let mut recorder = Recorder::new(rho0, cfg)?;
    let mut buffers = RkBuffers::new(engine.dim());
    let mut state = to_flat(rho0.operator().matrix());
    for segment in &build_segments(cfg, &[])? {
        run_rk4_segment(&engine, segment, &mut state, &mut buffers, &mut recorder)?;
    }
    recorder.finish(cfg.t_max, &state)
}

// Dormand-Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn integrate_rk45(
    model: &ModelSpec,
    rho0: &DensityMatrix,
    cfg: &IntegratorConfig,
) -> Result<TrajectoryRecord> {
    let engine = GeneratorEngine::new(model)?;
    let mut recorder = Recorder::new(rho0, cfg)?;
    let mut buf = RkBuffers::new(engine.dim());
    let mut state = to_flat(rho0.operator().matrix());
    let mut proposal = vec![Complex64::ZERO; state.len()];

    // Breakpoints the adaptive stepper must land on.
    let mut breaks: Vec<f64> = cfg
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t > 0.0 && t < cfg.t_max)
        .collect();
    breaks.push(cfg.t_max);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let mut t = 0.0;
    let mut h = cfg.dt.min(cfg.t_max);
    let mut break_idx = 0;
    while break_idx < breaks.len() {
        let target = breaks[break_idx];
        if t >= target {
            break_idx += 1;
            continue;
        }
        let h_min = 1e-14 * (1.0 + t.abs());
        if h < h_min {
            return Err(Error::StepUnderflow { t_reached: t, dt: h });
        }
        let h_try = h.min(target - t);

        // Stage evaluations k1..k6 and the 5th-order proposal.
        engine.apply_into(t, &state, &mut buf.k[0], &mut buf.ws);
        for stage in 1..6 {
            buf.stage.clear();
            buf.stage.extend_from_slice(&state);
            for (j, &a) in DP_A[stage - 1].iter().enumerate().take(stage) {
                if a == 0.0 {
                    continue;
                }
                let k = &buf.k[j];
                for (s, kv) in buf.stage.iter_mut().zip(k) {
                    *s += h_try * a * kv;
                }
            }
            let stage_buf = std::mem::take(&mut buf.stage);
            let (head, tail) = buf.k.split_at_mut(stage);
            let _ = head;
            engine.apply_into(t + DP_C[stage] * h_try, &stage_buf, &mut tail[0], &mut buf.ws);
            buf.stage = stage_buf;
        }
        proposal.clear();
        proposal.extend_from_slice(&state);
        for (j, &b) in DP_B5.iter().enumerate().take(6) {
            if b == 0.0 {
                continue;
            }
            let k = &buf.k[j];
            for (p, kv) in proposal.iter_mut().zip(k) {
                *p += h_try * b * kv;
            }
        }
        {
            let (head, tail) = buf.k.split_at_mut(6);
            let _ = head;
            engine.apply_into(t + h_try, &proposal, &mut tail[0], &mut buf.ws);
        }

        // Error estimate: || sum (b5 - b4) k ||_HS against abs+rel tolerance.
        let mut err_sqr = 0.0;
        for idx in 0..state.len() {
            let mut e = Complex64::ZERO;
            for j in 0..7 {
                let w = DP_B5[j] - DP_B4[j];
                if w != 0.0 {
                    e += w * buf.k[j][idx];
                }
            }
            err_sqr += (h_try * e).norm_sqr();
        }
        let err = err_sqr.sqrt();
        let state_norm = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tol = cfg.abs_tol + cfg.rel_tol * state_norm;
        if err <= tol {
            state.copy_from_slice(&proposal);
            let defect = engine::hermitize_flat(engine.dim(), &mut state);
            t += h_try;
            recorder.on_accepted_step(t, &state, defect, "rk45 step")?;
        }
        // Standard controller with safety factor and clamped growth.
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * (tol / err).powf(0.2)).clamp(0.2, 5.0)
        };
        h = (h_try * factor).min(cfg.t_max);
    }
    recorder.finish(cfg.t_max, &state)
}

fn check_unitary_applicable(model: &ModelSpec) -> Result<()> {
    if model.damping != 0.0 {
        return Err(Error::OracleUnavailable(format!(
            "gamma = {}",
            model.damping
        )));
    }
    if !model.pump.is_static() {
        return Err(Error::OracleUnavailable(
            "pump has nonzero coefficient frequencies".into(),
        ));
    }
    Ok(())
}

/// `e^{-iHt}` via the spectral decomposition of the (static) Hamiltonian.
fn spectral_propagator(model: &ModelSpec, t: f64) -> Result<nalgebra::DMatrix<Complex64>> {
    let h = model.hamiltonian(0.0);
    let (values, vectors) = crate::linalg::eigh(h.matrix())?;
    let dim = h.dim();
    let mut phases = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
    for (i, lambda) in values.iter().enumerate() {
        phases[(i, i)] = Complex64::new(0.0, -lambda * t).exp();
    }
    Ok(&vectors * phases * vectors.adjoint())
}

fn integrate_unitary(
    model: &ModelSpec,
    rho0: &DensityMatrix,
    cfg: &IntegratorConfig,
) -> Result<TrajectoryRecord> {
    check_unitary_applicable(model)?;
    let mut recorder = Recorder::new(rho0, cfg)?;
    let mut rho = rho0.operator().matrix().clone();
    for segment in &build_segments(cfg, &[])? {
        let step = spectral_propagator(model, segment.dt)?;
        let step_adj = step.adjoint();
        let n = ((segment.end - segment.start) / segment.dt).round() as usize;
        for i in 0..n {
            rho = &step * rho * &step_adj;
            let mut flat = to_flat(&rho);
            let defect = engine::hermitize_flat(rho.nrows(), &mut flat);
            rho = from_flat(rho.nrows(), &flat);
            let t_next = if i + 1 == n {
                segment.end
            } else {
                segment.start + (i + 1) as f64 * segment.dt
            };
            recorder.on_accepted_step(t_next, &flat, defect, "unitary step")?;
        }
    }
    let flat = to_flat(&rho);
    recorder.finish(cfg.t_max, &flat)
}
