//! Cross-method integration checks: Runge-Kutta order against the spectral
//! oracle, trajectory diagnostics, and a refinement sweep with damping.

use jcsim_core::converge::{ConvergenceVerdict, SweepPlan};
use jcsim_core::evolve::{integrate, unitary_oracle, IntegratorConfig, Method};
use jcsim_core::genspec::preset;
use jcsim_core::{
    AtomicLevel, BasisIndex, Complex64, DensityMatrix, ModelSpec, PolynomialOperatorSpec, Preset,
    StateSpec, TruncationLevel,
};

fn lvl(nu: usize) -> TruncationLevel {
    TruncationLevel::new(nu).unwrap()
}

fn driven_undamped(nu: usize) -> ModelSpec {
    ModelSpec {
        omega_c: 1.0,
        omega_a: 1.0,
        coupling: 0.1,
        damping: 0.0,
        pump: preset(Preset::PumpDisplacement),
        dissipators: vec![],
        level: lvl(nu),
    }
}

#[test]
fn rk4_is_fourth_order_against_oracle() {
    // Halving dt shrinks the error against the exact conjugation by ~16.
    let model = driven_undamped(8);
    let rho0 =
        DensityMatrix::coherent_state(Complex64::new(1.0, 0.0), AtomicLevel::Up, model.level)
            .unwrap();
    let t_end = 2.0;
    let exact = unitary_oracle(&model, &rho0, t_end).unwrap();
    let mut errs = Vec::new();
    for dt in [4e-3, 2e-3] {
        let mut cfg = IntegratorConfig::rk4(dt, t_end);
        cfg.record_every = usize::MAX - 1;
        let record = integrate(&model, &rho0, &cfg).unwrap();
        errs.push((record.final_state.operator() - exact.operator()).hs_norm());
    }
    let factor = errs[0] / errs[1];
    assert!(
        (10.0..=24.0).contains(&factor),
        "order factor {factor} (errors {errs:?})"
    );
}

#[test]
fn unitary_method_tracks_oracle() {
    let model = driven_undamped(6);
    let rho0 = DensityMatrix::fock_state(2, AtomicLevel::Down, model.level).unwrap();
    let mut cfg = IntegratorConfig::rk4(1e-2, 3.0);
    cfg.method = Method::UnitaryExact;
    cfg.record_every = 100;
    let record = integrate(&model, &rho0, &cfg).unwrap();
    let exact = unitary_oracle(&model, &rho0, 3.0).unwrap();
    let err = (record.final_state.operator() - exact.operator()).hs_norm();
    assert!(err < 1e-10, "unitary stepping vs one-shot oracle: {err}");
    // Unitary conjugation preserves the norm at every record.
    assert!((record.hs_norm_max_ratio - 1.0).abs() < 1e-10);
}

#[test]
fn damped_driven_trajectory_diagnostics() {
    // Damped collapse-revival scenario: trace pinned, positivity within the
    // trajectory floor, Hermiticity defect tiny.
    let model = ModelSpec {
        omega_c: 1.0,
        omega_a: 1.0,
        coupling: 0.1,
        damping: 0.1,
        pump: preset(Preset::PumpCollapseRevival { pump_freq: 1.0 }),
        dissipators: vec![preset(Preset::PhotonLossD1)],
        level: lvl(10),
    };
    let rho0 =
        DensityMatrix::coherent_state(Complex64::new(1.0, 0.0), AtomicLevel::Up, model.level)
            .unwrap();
    let mut cfg = IntegratorConfig::rk4(1e-3, 4.0);
    cfg.record_every = 40;
    let record = integrate(&model, &rho0, &cfg).unwrap();
    for obs in &record.observables {
        assert!((obs.trace - Complex64::ONE).norm() <= 1e-8);
    }
    assert!(record.min_eigenvalue_seen >= -1e-8);
    assert!(record.max_hermiticity_defect <= 1e-10 * model.level.dim() as f64);
    // Pure initial state: the norm ratio cannot exceed 1 meaningfully.
    assert!(record.hs_norm_max_ratio <= 1.0 + 1e-6);
}

#[test]
fn refinement_sweep_with_damping_converges() {
    let base = ModelSpec {
        omega_c: 1.0,
        omega_a: 1.0,
        coupling: 0.1,
        damping: 0.1,
        pump: preset(Preset::PumpCollapseRevival { pump_freq: 1.0 }),
        dissipators: vec![preset(Preset::PhotonLossD1)],
        level: lvl(4), // placeholder; the sweep replaces it
    };
    let plan = SweepPlan {
        base,
        levels: vec![lvl(4), lvl(8), lvl(12)],
        probe_entries: vec![(
            BasisIndex::new(0, AtomicLevel::Up),
            BasisIndex::new(0, AtomicLevel::Up),
        )],
        probe_times: vec![1.0],
        integrator: IntegratorConfig::rk4(1e-3, 1.0),
    };
    let initial = StateSpec::Coherent {
        alpha: Complex64::new(1.0, 0.0),
        s: AtomicLevel::Up,
    };
    let table = jcsim_core::converge::sweep(&plan, &initial).unwrap();
    assert_eq!(table.rows.len(), 1);
    let row = &table.rows[0];
    assert_eq!(row.values.len(), 3);
    assert_eq!(row.diffs.len(), 2);
    assert!(
        row.diffs[1] < row.diffs[0],
        "coarse-level differences should dominate: {:?}",
        row.diffs
    );
    assert_eq!(row.verdict, ConvergenceVerdict::Converging);
}

#[test]
fn hermitian_dissipator_contracts_the_norm() {
    // With a Hermitian dissipation operator the quadratic form is
    // nonpositive, so the Hilbert-Schmidt norm cannot grow along the flow
    // even from a mixed state.
    let model = ModelSpec {
        omega_c: 1.0,
        omega_a: 1.0,
        coupling: 0.1,
        damping: 0.5,
        pump: preset(Preset::PumpDisplacement),
        dissipators: vec![preset(Preset::PumpDisplacement)], // V = a + a'
        level: lvl(8),
    };
    let rho0 = DensityMatrix::thermal_state(1.0, AtomicLevel::Up, model.level).unwrap();
    let mut cfg = IntegratorConfig::rk4(1e-3, 3.0);
    cfg.record_every = 50;
    let record = integrate(&model, &rho0, &cfg).unwrap();
    assert!(
        record.hs_norm_max_ratio <= 1.0 + 1e-6,
        "ratio {}",
        record.hs_norm_max_ratio
    );
}

#[test]
fn nan_detection_aborts_with_diagnostic() {
    // An absurd coupling overflows within a step; the integrator must fail
    // with the non-finite diagnostic instead of emitting garbage.
    let mut model = driven_undamped(4);
    model.coupling = 1e200;
    let rho0 = DensityMatrix::fock_state(1, AtomicLevel::Up, model.level).unwrap();
    let cfg = IntegratorConfig::rk4(1.0, 5.0);
    match integrate(&model, &rho0, &cfg) {
        Err(jcsim_core::Error::NonFinite { t, .. }) => assert!(t <= 5.0),
        other => panic!("expected non-finite detection, got {other:?}"),
    }
}

#[test]
fn rk45_reports_underflow_instead_of_spinning() {
    // An absurd tolerance drives the controller toward zero step size; the
    // integrator must fail with the time it reached.
    let model = driven_undamped(4);
    let rho0 = DensityMatrix::fock_state(1, AtomicLevel::Up, model.level).unwrap();
    let mut cfg = IntegratorConfig::rk4(1e-3, 1.0);
    cfg.method = Method::Rk45;
    cfg.rel_tol = 1e-300;
    cfg.abs_tol = 1e-300;
    match integrate(&model, &rho0, &cfg) {
        Err(jcsim_core::Error::StepUnderflow { t_reached, .. }) => {
            assert!(t_reached < 1.0);
        }
        other => panic!("expected step underflow, got {other:?}"),
    }
}

#[test]
fn empty_pump_behaves_as_free_hamiltonian() {
    let mut model = driven_undamped(4);
    model.pump = PolynomialOperatorSpec::default();
    model.coupling = 0.0;
    let rho0 = DensityMatrix::thermal_state(0.5, AtomicLevel::Up, model.level).unwrap();
    let record = integrate(&model, &rho0, &IntegratorConfig::rk4(1e-2, 1.0)).unwrap();
    // Diagonal initial state commutes with the free Hamiltonian.
    let drift = (record.final_state.operator() - rho0.operator()).max_abs();
    assert!(drift < 1e-12);
}
