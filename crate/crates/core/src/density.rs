//! Hermitian density matrices with Hilbert-Schmidt geometry, spectral
//! queries, truncation/embedding between levels, and standard state
//! constructors.
//!
//! The inner product is `<r1, r2> = tr(r1 r2)`; its entrywise form
//! `sum |r_{n,s;n',s'}|^2` for the squared norm is used as an independent
//! evaluation route in tests. A [`DensityMatrix`] is any Hermitian
//! Hilbert-Schmidt element; unit trace and positivity are properties of the
//! physical state constructors, not of the type.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{AtomicLevel, BasisIndex, OperatorMatrix, TruncationLevel};
use crate::linalg;

/// Hermiticity defect tolerance per unit dimension for construction.
pub const HERMITIAN_TOL_PER_DIM: f64 = 1e-12;

/// Positivity floor for freshly constructed states.
pub const CONSTRUCTOR_PSD_FLOOR: f64 = -1e-12;

/// Positivity floor applied along integrated trajectories, looser than the
/// constructor floor to sit above the integrator error.
pub const TRAJECTORY_PSD_FLOOR: f64 = -1e-8;

/// Hermitian operator on the truncated space with Hilbert-Schmidt geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: OperatorMatrix,
}

impl DensityMatrix {
    /// Wrap an operator, requiring Hermiticity within `1e-12 * dim`.
    pub fn new(op: OperatorMatrix) -> Result<Self> {
        let tol = HERMITIAN_TOL_PER_DIM * op.dim() as f64;
        let defect = op.hermitian_defect();
        if defect > tol {
            return Err(Error::NotHermitian { defect, tol });
        }
        if !op.is_finite() {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        Ok(DensityMatrix { op })
    }

    /// Replace an operator by its Hermitian part `(M + M')/2`, returning the
    /// symmetrized matrix together with the removed defect.
    pub fn symmetrized(op: OperatorMatrix) -> (Self, f64) {
        let defect = op.hermitian_defect();
        let herm = OperatorMatrix::from_matrix(
            (op.matrix() + op.matrix().adjoint()).map(|z| z * 0.5),
        )
        .expect("shape preserved");
        (DensityMatrix { op: herm }, defect)
    }

    pub fn operator(&self) -> &OperatorMatrix {
        &self.op
    }

    pub fn into_operator(self) -> OperatorMatrix {
        self.op
    }

    pub fn level(&self) -> TruncationLevel {
        self.op.level()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn entry(&self, row: BasisIndex, col: BasisIndex) -> Complex64 {
        self.op.get(row, col)
    }

    pub fn trace(&self) -> Complex64 {
        self.op.trace()
    }

    pub fn hs_norm(&self) -> f64 {
        self.op.hs_norm()
    }

    /// Squared Hilbert-Schmidt norm; the purity for unit-trace states.
    pub fn purity(&self) -> f64 {
        let n = self.hs_norm();
        n * n
    }

    /// Hilbert-Schmidt inner product `tr(r1 r2)`, real for Hermitian inputs.
    /// The imaginary residue is checked against `1e-12 * scale` and dropped.
    pub fn hs_inner(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        // tr(r1 r2) via entry sums; no full product needed.
        let a = self.op.matrix();
        let b = other.op.matrix();
        let mut acc = Complex64::ZERO;
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                acc += a[(r, c)] * b[(c, r)];
            }
        }
        let scale = 1.0 + self.hs_norm() * other.hs_norm();
        if acc.im.abs() > 1e-12 * scale {
            return Err(Error::NotHermitian {
                defect: acc.im.abs(),
                tol: 1e-12 * scale,
            });
        }
        Ok(acc.re)
    }

    /// Smallest eigenvalue, via a full Hermitian eigensolve.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        linalg::min_eigenvalue(self.op.matrix())
    }

    /// Eigendecomposition (ascending eigenvalues, unitary eigenvectors).
    pub fn eigen(&self) -> Result<(Vec<f64>, nalgebra::DMatrix<Complex64>)> {
        linalg::eigh(self.op.matrix())
    }

    /// Keep entries with both photon indices `<= level`; Hilbert-Schmidt
    /// non-expansive and positivity-preserving (principal submatrix).
    pub fn truncate(&self, level: TruncationLevel) -> Result<Self> {
        let own = self.level();
        if level > own {
            return Err(Error::InvalidState(format!(
                "cannot truncate from level {own} up to {level}"
            )));
        }
        let mut out = OperatorMatrix::zeros(level);
        let d = level.dim();
        for r in 0..d {
            for c in 0..d {
                out.matrix_mut()[(r, c)] = self.op.matrix()[(r, c)];
            }
        }
        Ok(DensityMatrix { op: out })
    }

    /// Zero-pad to a larger level; an isometry with
    /// `truncate(embed(rho)) = rho` exactly.
    pub fn embed(&self, level: TruncationLevel) -> Result<Self> {
        let own = self.level();
        if level < own {
            return Err(Error::InvalidState(format!(
                "cannot embed from level {own} down to {level}"
            )));
        }
        let mut out = OperatorMatrix::zeros(level);
        let d = self.dim();
        for r in 0..d {
            for c in 0..d {
                out.matrix_mut()[(r, c)] = self.op.matrix()[(r, c)];
            }
        }
        Ok(DensityMatrix { op: out })
    }

    /// Bring to `level` by truncating or embedding as needed.
    pub fn at_level(&self, level: TruncationLevel) -> Result<Self> {
        if level <= self.level() {
            self.truncate(level)
        } else {
            self.embed(level)
        }
    }

    /// Fock projector `|n, s><n, s|`.
    pub fn fock_state(n: usize, s: AtomicLevel, level: TruncationLevel) -> Result<Self> {
        if n > level.get() {
            return Err(Error::PhotonOutOfRange { n, level: level.get() });
        }
        let mut op = OperatorMatrix::zeros(level);
        let b = BasisIndex::new(n, s);
        op.set(b, b, Complex64::ONE);
        Ok(DensityMatrix { op })
    }

    /// Truncated coherent state `|psi><psi|` with `psi_n ~ alpha^n/sqrt(n!)`
    /// in the `s` atomic sector, renormalized to unit trace after truncation.
    pub fn coherent_state(
        alpha: Complex64,
        s: AtomicLevel,
        level: TruncationLevel,
    ) -> Result<Self> {
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::InvalidState("coherent amplitude must be finite".into()));
        }
        let photon = level.photon_dim();
        let mut psi = vec![Complex64::ZERO; photon];
        psi[0] = Complex64::ONE;
        for n in 1..photon {
            psi[n] = psi[n - 1] * alpha / Complex64::new((n as f64).sqrt(), 0.0);
        }
        let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let mut op = OperatorMatrix::zeros(level);
        for n in 0..photon {
            for m in 0..photon {
                op.set(
                    BasisIndex::new(n, s),
                    BasisIndex::new(m, s),
                    psi[n] * psi[m].conj() / norm_sqr,
                );
            }
        }
        Ok(DensityMatrix { op })
    }

    /// Thermal state with geometric photon distribution of mean `mean_n` in
    /// the `s` atomic sector, renormalized after truncation.
    pub fn thermal_state(mean_n: f64, s: AtomicLevel, level: TruncationLevel) -> Result<Self> {
        if !(mean_n >= 0.0) || !mean_n.is_finite() {
            return Err(Error::InvalidState(format!(
                "thermal mean photon number must be finite and >= 0, got {mean_n}"
            )));
        }
        let photon = level.photon_dim();
        let ratio = if mean_n == 0.0 { 0.0 } else { mean_n / (1.0 + mean_n) };
        let mut weights = vec![0.0_f64; photon];
        let mut w = 1.0;
        for slot in weights.iter_mut() {
            *slot = w;
            w *= ratio;
        }
        let total: f64 = weights.iter().sum();
        let mut op = OperatorMatrix::zeros(level);
        for (n, w) in weights.iter().enumerate() {
            let b = BasisIndex::new(n, s);
            op.set(b, b, Complex64::new(w / total, 0.0));
        }
        Ok(DensityMatrix { op })
    }

    /// Standard observables of the state.
    pub fn observables(&self) -> Result<ObservableSet> {
        let d = self.dim();
        let m = self.op.matrix();
        let mut inversion = 0.0;
        let mut photon_number = 0.0;
        for flat in 0..d {
            let b = BasisIndex::from_flat(flat);
            let p = m[(flat, flat)].re;
            inversion += b.s.sign() * p;
            photon_number += b.n as f64 * p;
        }
        let hs_norm = self.hs_norm();
        Ok(ObservableSet {
            trace: self.trace(),
            hs_norm,
            purity: hs_norm * hs_norm,
            min_eigenvalue: self.min_eigenvalue()?,
            inversion,
            photon_number,
        })
    }
}

/// Scalar observables extracted from a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableSet {
    pub trace: Complex64,
    pub hs_norm: f64,
    /// Squared Hilbert-Schmidt norm.
    pub purity: f64,
    pub min_eigenvalue: f64,
    /// Atomic inversion `tr(rho (I (x) sigma_3))`.
    pub inversion: f64,
    /// Mean photon number `tr(rho (a'a (x) I))`.
    pub photon_number: f64,
}

/// Declarative initial-state description, buildable at any truncation level.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Fock { n: usize, s: AtomicLevel },
    Coherent { alpha: Complex64, s: AtomicLevel },
    Thermal { mean_n: f64, s: AtomicLevel },
    /// Fixed matrix, truncated or zero-padded to the requested level.
    Explicit(DensityMatrix),
}

impl StateSpec {
    pub fn build(&self, level: TruncationLevel) -> Result<DensityMatrix> {
        match self {
            StateSpec::Fock { n, s } => DensityMatrix::fock_state(*n, *s, level),
            StateSpec::Coherent { alpha, s } => DensityMatrix::coherent_state(*alpha, *s, level),
            StateSpec::Thermal { mean_n, s } => DensityMatrix::thermal_state(*mean_n, *s, level),
            StateSpec::Explicit(rho) => rho.at_level(level),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn lvl(nu: usize) -> TruncationLevel {
        TruncationLevel::new(nu).unwrap()
    }

    #[test]
    fn hs_inner_on_projectors() {
        let level = lvl(3);
        let p0 = DensityMatrix::fock_state(0, AtomicLevel::Up, level).unwrap();
        let p1 = DensityMatrix::fock_state(1, AtomicLevel::Up, level).unwrap();
        assert_abs_diff_eq!(p0.hs_inner(&p0).unwrap(), 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(p0.hs_inner(&p1).unwrap(), 0.0, epsilon = 0.0);
    }

    #[test]
    fn hs_norm_entrywise_equals_trace_form() {
        // Entrywise sum of |entries|^2 against tr(rho^2) on a mixed state.
        let level = lvl(4);
        let rho = DensityMatrix::coherent_state(Complex64::new(0.8, 0.3), AtomicLevel::Down, level)
            .unwrap();
        let entrywise: f64 = rho
            .operator()
            .matrix()
            .iter()
            .map(|z| z.norm_sqr())
            .sum();
        let trace_form = rho.hs_inner(&rho).unwrap();
        assert_abs_diff_eq!(entrywise, trace_form, epsilon = 1e-12 * entrywise.max(1.0));
    }

    #[test]
    fn truncate_keeps_fock_state() {
        let level = lvl(8);
        let rho = DensityMatrix::fock_state(0, AtomicLevel::Up, level).unwrap();
        let cut = rho.truncate(lvl(2)).unwrap();
        assert_abs_diff_eq!(cut.hs_norm(), 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(cut.trace().re, 1.0, epsilon = 0.0);
    }

    #[test]
    fn truncate_is_nonexpansive_on_coherent() {
        let big = lvl(32);
        let rho = DensityMatrix::coherent_state(Complex64::new(2.0, 0.0), AtomicLevel::Up, big)
            .unwrap();
        let cut = rho.truncate(lvl(8)).unwrap();
        assert!(cut.hs_norm() < rho.hs_norm());
        // PSD preserved: principal submatrix of a PSD matrix.
        assert!(cut.min_eigenvalue().unwrap() >= CONSTRUCTOR_PSD_FLOOR);
    }

    #[test]
    fn embed_then_truncate_is_identity() {
        let small = lvl(3);
        let rho = DensityMatrix::thermal_state(0.7, AtomicLevel::Down, small).unwrap();
        let up = rho.embed(lvl(9)).unwrap();
        assert_abs_diff_eq!(up.hs_norm(), rho.hs_norm(), epsilon = 0.0);
        assert_abs_diff_eq!(up.trace().re, rho.trace().re, epsilon = 0.0);
        let back = up.truncate(small).unwrap();
        assert_eq!(back.operator().matrix(), rho.operator().matrix());
    }

    #[test]
    fn fock_state_observables() {
        let rho = DensityMatrix::fock_state(1, AtomicLevel::Up, lvl(4)).unwrap();
        let obs = rho.observables().unwrap();
        assert_abs_diff_eq!(obs.trace.re, 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(obs.purity, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(obs.inversion, 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(obs.photon_number, 1.0, epsilon = 0.0);
        assert!(obs.min_eigenvalue >= CONSTRUCTOR_PSD_FLOOR);
    }

    #[test]
    fn maximally_mixed_atom_has_zero_inversion() {
        let level = lvl(2);
        let up = DensityMatrix::fock_state(0, AtomicLevel::Up, level).unwrap();
        let down = DensityMatrix::fock_state(0, AtomicLevel::Down, level).unwrap();
        let mix = OperatorMatrix::from_matrix(
            (up.operator().matrix() + down.operator().matrix()).map(|z| z * 0.5),
        )
        .unwrap();
        let rho = DensityMatrix::new(mix).unwrap();
        let obs = rho.observables().unwrap();
        assert_abs_diff_eq!(obs.inversion, 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(obs.trace.re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn atomic_mixture_purity() {
        // diag(2/3, 1/3) on the atomic factor at n = 0: purity 5/9.
        let level = lvl(1);
        let mut op = OperatorMatrix::zeros(level);
        op.set(
            BasisIndex::new(0, AtomicLevel::Up),
            BasisIndex::new(0, AtomicLevel::Up),
            Complex64::new(2.0 / 3.0, 0.0),
        );
        op.set(
            BasisIndex::new(0, AtomicLevel::Down),
            BasisIndex::new(0, AtomicLevel::Down),
            Complex64::new(1.0 / 3.0, 0.0),
        );
        let rho = DensityMatrix::new(op).unwrap();
        assert_abs_diff_eq!(rho.purity(), 5.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn coherent_state_photon_number() {
        // Poisson mean |alpha|^2 with negligible tail at nu = 32; the tail
        // bound sum_{n>32} p_n for alpha = 2 is far below 1e-6.
        let rho =
            DensityMatrix::coherent_state(Complex64::new(2.0, 0.0), AtomicLevel::Up, lvl(32))
                .unwrap();
        let obs = rho.observables().unwrap();
        assert_abs_diff_eq!(obs.photon_number, 4.0, epsilon = 1e-6);
        assert_abs_diff_eq!(obs.trace.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(obs.purity, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn thermal_state_purity_oracle() {
        // Closed form for the untruncated geometric distribution:
        // purity = 1/(2 mean_n + 1); truncation tail at nu = 32 is < 1e-6.
        let mean_n = 1.0;
        let rho = DensityMatrix::thermal_state(mean_n, AtomicLevel::Up, lvl(32)).unwrap();
        assert_abs_diff_eq!(rho.purity(), 1.0 / (2.0 * mean_n + 1.0), epsilon = 1e-6);
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-13);
        let obs = rho.observables().unwrap();
        assert_abs_diff_eq!(obs.photon_number, mean_n, epsilon = 1e-6);
    }

    #[test]
    fn thermal_zero_mean_is_vacuum() {
        let rho = DensityMatrix::thermal_state(0.0, AtomicLevel::Down, lvl(4)).unwrap();
        let vac = DensityMatrix::fock_state(0, AtomicLevel::Down, lvl(4)).unwrap();
        assert_eq!(rho.operator().matrix(), vac.operator().matrix());
    }

    #[test]
    fn constructors_reject_out_of_range() {
        assert!(DensityMatrix::fock_state(5, AtomicLevel::Up, lvl(4)).is_err());
        assert!(DensityMatrix::thermal_state(-1.0, AtomicLevel::Up, lvl(4)).is_err());
    }

    #[test]
    fn non_hermitian_rejected() {
        let level = lvl(1);
        let mut op = OperatorMatrix::zeros(level);
        op.set(
            BasisIndex::new(0, AtomicLevel::Up),
            BasisIndex::new(0, AtomicLevel::Down),
            Complex64::ONE,
        );
        assert!(DensityMatrix::new(op.clone()).is_err());
        let (sym, defect) = DensityMatrix::symmetrized(op);
        assert!(defect > 0.0);
        assert!(sym.operator().hermitian_defect() == 0.0);
    }

    #[test]
    fn state_spec_builds_at_levels() {
        let spec = StateSpec::Coherent {
            alpha: Complex64::new(1.0, 0.0),
            s: AtomicLevel::Up,
        };
        let lo = spec.build(lvl(8)).unwrap();
        let hi = spec.build(lvl(16)).unwrap();
        assert_eq!(lo.dim(), 18);
        assert_eq!(hi.dim(), 34);
        let explicit = StateSpec::Explicit(hi.clone());
        let cut = explicit.build(lvl(8)).unwrap();
        assert!(cut.hs_norm() <= hi.hs_norm());
    }
}
