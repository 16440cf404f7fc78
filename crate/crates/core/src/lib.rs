//! Simulator and verification harness for the damped driven Jaynes-Cummings
//! master equation on truncated Fock spaces.
//!
//! The crate builds finite-dimensional approximations of the model — the
//! truncated ladder operators, polynomial pumps and dissipators in
//! double-commutator (GKSL) form — integrates the density-matrix dynamics,
//! and checks the structural identities the construction relies on: trace
//! annihilation, Hilbert-Schmidt orthogonality of the commutator field,
//! dissipator sign, positivity and norm behavior along trajectories, and
//! entrywise convergence under truncation refinement.
//!
//! Modules:
//! - [`fock`]: truncated Fock-atom space and elementary operators;
//! - [`genspec`]: symbolic time-dependent operator polynomials;
//! - [`density`]: Hermitian states with Hilbert-Schmidt geometry;
//! - [`lindblad`]: Hamiltonian, generator, and its quadratic forms;
//! - [`evolve`]: time integration (fixed/adaptive Runge-Kutta, exact
//!   unitary oracle, piecewise-constant coefficients);
//! - [`converge`]: truncation-refinement diagnostics;
//! - [`claims`]: randomized and targeted verification with verdict reports.

// `!(x > 0.0)` deliberately rejects NaN alongside out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod claims;
pub mod converge;
pub mod density;
pub mod error;
pub mod evolve;
pub mod fock;
pub mod genspec;
pub mod lindblad;
mod linalg;

pub use density::{DensityMatrix, ObservableSet, StateSpec};
pub use error::{Error, Result};
pub use evolve::{FastGenerator, IntegratorConfig, Method, TrajectoryRecord};
pub use fock::{AtomicLevel, BasisIndex, OperatorMatrix, Pauli, TruncationLevel};
pub use genspec::{
    HermiticityReport, MonomialTerm, PolynomialOperatorSpec, Preset, TrigCoefficient,
};
pub use lindblad::{BandwidthReport, ModelSpec};

pub use num_complex::Complex64;
