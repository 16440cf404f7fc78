//! Shared fixtures for the criterion benches.

use jcsim_core::genspec::preset;
use jcsim_core::{
    AtomicLevel, Complex64, DensityMatrix, ModelSpec, Preset, TruncationLevel,
};

/// Damped driven collapse-revival model at the given truncation level.
pub fn bench_model(nu: usize) -> ModelSpec {
    let level = TruncationLevel::new(nu).expect("nu >= 1");
    ModelSpec {
        omega_c: 1.0,
        omega_a: 1.0,
        coupling: 0.1,
        damping: 0.1,
        pump: preset(Preset::PumpCollapseRevival { pump_freq: 1.0 }),
        dissipators: vec![preset(Preset::PhotonLossD1)],
        level,
    }
}

/// Coherent probe state matching the model's level.
pub fn bench_state(model: &ModelSpec) -> DensityMatrix {
    DensityMatrix::coherent_state(Complex64::new(1.0, 0.0), AtomicLevel::Up, model.level)
        .expect("finite amplitude")
}
