//! Hamiltonian assembly and the master-equation generator on the truncated
//! space, together with the quadratic forms it induces on Hermitian
//! operators.
//!
//! The generator is
//!
//! ```text
//! A(t) rho = -i [H(t), rho] + gamma * sum_j ([V_j rho, V_j'] + [V_j, rho V_j'])
//! ```
//!
//! with `H(t) = w_c a'a + (w_a/2) sigma_3 + p ((a + a') (x) sigma_1 + A^e(t))`.
//! The double-commutator dissipator expands to `2 V rho V' - V'V rho - rho V'V`,
//! i.e. twice the standard photon-loss form for the same `V`; all sign and
//! contraction statements in this module are relative to that normalization.
//!
//! The generator is applied matrix-free (a handful of matrix products per
//! dissipator); the d^2 x d^2 superoperator is never assembled.

use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::fock::{self, BasisIndex, OperatorMatrix, Pauli, TruncationLevel};
use crate::genspec::PolynomialOperatorSpec;

/// Physical model: frequencies, coupling, damping, pump and dissipation
/// polynomials, and the truncation level.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    /// Cavity resonance frequency `w_c > 0`.
    pub omega_c: f64,
    /// Atomic frequency `w_a > 0`.
    pub omega_a: f64,
    /// Dipole coupling `p` multiplying the whole interaction Hamiltonian.
    pub coupling: f64,
    /// Damping rate `gamma >= 0`.
    pub damping: f64,
    /// Pump polynomial `A^e(t)`; must be Hermitian at sampled times.
    pub pump: PolynomialOperatorSpec,
    /// Dissipation polynomials `V_j(t)`.
    pub dissipators: Vec<PolynomialOperatorSpec>,
    pub level: TruncationLevel,
}

impl ModelSpec {
    /// Validate parameter ranges and pump Hermiticity on a uniform sample
    /// grid over `[0, t_max]`.
    pub fn validate(&self, t_max: f64) -> Result<()> {
        if !(self.omega_c > 0.0) {
            return Err(Error::InvalidModel(format!(
                "cavity frequency must be positive, got {}",
                self.omega_c
            )));
        }
        if !(self.omega_a > 0.0) {
            return Err(Error::InvalidModel(format!(
                "atomic frequency must be positive, got {}",
                self.omega_a
            )));
        }
        if !(self.damping >= 0.0) {
            return Err(Error::InvalidModel(format!(
                "damping rate must be nonnegative, got {}",
                self.damping
            )));
        }
        if !self.coupling.is_finite() {
            return Err(Error::InvalidModel("coupling must be finite".into()));
        }
        let times = PolynomialOperatorSpec::default_sample_times(if t_max > 0.0 {
            t_max
        } else {
            1.0
        });
        self.pump
            .validate_hermitian(self.level, &times)
            .map_err(Error::PumpNotHermitian)
    }

    /// Same model at a different truncation level.
    pub fn with_level(&self, level: TruncationLevel) -> ModelSpec {
        ModelSpec {
            level,
            ..self.clone()
        }
    }

    /// `H(t) = w_c a'a + (w_a/2) sigma_3 + p ((a + a')(x)sigma_1 + A^e(t))`.
    pub fn hamiltonian(&self, t: f64) -> OperatorMatrix {
        let level = self.level;
        let mut h = fock::number(level).scale(Complex64::new(self.omega_c, 0.0));
        h = &h + &fock::pauli(Pauli::Three, level).scale(Complex64::new(0.5 * self.omega_a, 0.0));
        if self.coupling != 0.0 {
            let p = Complex64::new(self.coupling, 0.0);
            let x = &fock::annihilation(level) + &fock::creation(level);
            let interaction = &x * &fock::pauli(Pauli::One, level);
            h = &h + &interaction.scale(p);
            let pump = self.pump.eval(level, t);
            h = &h + &pump.scale(p);
        }
        h
    }

    /// Dissipator polynomials evaluated at time `t`.
    pub fn dissipator_operators(&self, t: f64) -> Vec<OperatorMatrix> {
        self.dissipators
            .iter()
            .map(|v| v.eval(self.level, t))
            .collect()
    }
}

/// Double-commutator dissipator `[V rho, V'] + [V, rho V'] =
/// 2 V rho V' - V'V rho - rho V'V`.
pub fn dissipator_apply(v: &OperatorMatrix, rho: &OperatorMatrix) -> Result<OperatorMatrix> {
    if v.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            got: rho.dim(),
        });
    }
    let vdag = v.adjoint();
    let gram = &vdag * v;
    let sandwich = &(v * rho) * &vdag;
    let mat = sandwich.matrix().map(|z| z * 2.0)
        - (&gram * rho).matrix()
        - (rho * &gram).matrix();
    Ok(OperatorMatrix::from_matrix(mat).expect("shape preserved"))
}

/// Full generator `A(t) rho = -i[H(t), rho] + gamma sum_j D_j(t) rho`.
///
/// Linear in `rho`; Hermiticity of the input is not required (the bandwidth
/// scan feeds elementary matrices), but for Hermitian input the output is
/// Hermitian and traceless up to roundoff.
pub fn generator_apply(model: &ModelSpec, t: f64, rho: &OperatorMatrix) -> Result<OperatorMatrix> {
    if rho.dim() != model.level.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.level.dim(),
            got: rho.dim(),
        });
    }
    let h = model.hamiltonian(t);
    let minus_i = Complex64::new(0.0, -1.0);
    let mut out = h.commutator(rho).scale(minus_i);
    if model.damping != 0.0 {
        let gamma = Complex64::new(model.damping, 0.0);
        for vspec in &model.dissipators {
            let v = vspec.eval(model.level, t);
            out = &out + &dissipator_apply(&v, rho)?.scale(gamma);
        }
    }
    Ok(out)
}

/// Quadratic form of the commutator part, `Re tr(rho . -i[H(t), rho])`.
///
/// Vanishes identically (the commutator field is a rotation in the
/// Hilbert-Schmidt space); the numerical value is pure roundoff of order
/// `1e-16 * ||rho||^2 ||H||`.
pub fn quadratic_form_k(model: &ModelSpec, t: f64, rho: &DensityMatrix) -> f64 {
    let h = model.hamiltonian(t);
    let comm = h.commutator(rho.operator()).scale(Complex64::new(0.0, -1.0));
    trace_product_re(rho.operator(), &comm)
}

/// Quadratic form of one dissipator, `Re tr(rho . D[V] rho)`, computed by
/// direct matrix products.
pub fn quadratic_form_d(v: &OperatorMatrix, rho: &DensityMatrix) -> Result<f64> {
    let applied = dissipator_apply(v, rho.operator())?;
    Ok(trace_product_re(rho.operator(), &applied))
}

/// The same quadratic form evaluated in the eigenbasis of `rho`:
/// `2 sum_{ik} |V_ik|^2 rho_k (rho_i - rho_k)` with `V_ik` the entries of
/// `V` in that basis. Exact for every `V`; the factor 2 carries the
/// double-commutator normalization.
pub fn eigenbasis_form(v: &OperatorMatrix, rho: &DensityMatrix) -> Result<f64> {
    if v.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            got: rho.dim(),
        });
    }
    let (values, vectors) = rho.eigen()?;
    let v_eigen = vectors.adjoint() * v.matrix() * &vectors;
    let d = rho.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for k in 0..d {
            let w = v_eigen[(i, k)].norm_sqr();
            acc += w * values[k] * (values[i] - values[k]);
        }
    }
    Ok(2.0 * acc)
}

/// Symmetrized eigenbasis expression `-sum_{ik} |V_ik|^2 (rho_i - rho_k)^2`
/// (double-commutator normalization).
///
/// Equals [`quadratic_form_d`] only when `|V_ik| = |V_ki]` in the eigenbasis
/// of `rho` — in particular for Hermitian `V` — and is nonpositive by
/// construction. For `V = a` the two differ; see the claims module.
pub fn symmetrized_eigenbasis_form(v: &OperatorMatrix, rho: &DensityMatrix) -> Result<f64> {
    if v.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            got: rho.dim(),
        });
    }
    let (values, vectors) = rho.eigen()?;
    let v_eigen = vectors.adjoint() * v.matrix() * &vectors;
    let d = rho.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for k in 0..d {
            let diff = values[i] - values[k];
            acc += v_eigen[(i, k)].norm_sqr() * diff * diff;
        }
    }
    Ok(-acc)
}

/// Empirical and nominal coupling width of the generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandwidthReport {
    /// Smallest `N` such that, over all sampled times and all elementary
    /// inputs `|k,r><k',r'|`, the generator output vanishes outside
    /// `|k - n| + |k' - n'| <= N`.
    pub empirical: usize,
    /// The nominal width `max(2, deg A^e, max_j deg V_j)`.
    pub formula: usize,
}

/// Entries below this magnitude count as structural zeros in the scan.
pub const BANDWIDTH_ENTRY_TOL: f64 = 1e-13;

/// Scan the generator's coupling width by driving every elementary basis
/// matrix through it, sampling the coefficient frequencies over one period.
///
/// Both the measured width and the nominal `max(2, deg A^e, deg V)` are
/// reported; the nominal value undercounts dissipators of degree >= 2, where
/// the sandwich term `V rho V'` couples twice the polynomial degree.
pub fn bandwidth(model: &ModelSpec) -> Result<BandwidthReport> {
    let level = model.level;
    let d = level.dim();
    let deg_pump = model.pump.degree();
    let deg_diss = model.dissipators.iter().map(|v| v.degree()).max().unwrap_or(0);
    let formula = 2.max(deg_pump).max(deg_diss);

    // One period of the slowest nonzero coefficient frequency, 16 samples;
    // a single t = 0 sample when everything is static.
    let mut freqs: Vec<f64> = model.pump.frequencies();
    for v in &model.dissipators {
        freqs.extend(v.frequencies());
    }
    let times: Vec<f64> = match freqs
        .iter()
        .map(|w| w.abs())
        .filter(|w| *w > 0.0)
        .min_by(f64::total_cmp)
    {
        Some(w_min) => {
            let period = std::f64::consts::TAU / w_min;
            (0..16).map(|k| period * k as f64 / 16.0).collect()
        }
        None => vec![0.0],
    };

    let mut empirical = 0usize;
    for t in &times {
        for kflat in 0..d {
            for kpflat in 0..d {
                let mut elem = OperatorMatrix::zeros(level);
                elem.matrix_mut()[(kflat, kpflat)] = Complex64::ONE;
                let out = generator_apply(model, *t, &elem)?;
                let k = BasisIndex::from_flat(kflat).n as isize;
                let kp = BasisIndex::from_flat(kpflat).n as isize;
                for nflat in 0..d {
                    for npflat in 0..d {
                        if out.matrix()[(nflat, npflat)].norm() <= BANDWIDTH_ENTRY_TOL {
                            continue;
                        }
                        let n = BasisIndex::from_flat(nflat).n as isize;
                        let np = BasisIndex::from_flat(npflat).n as isize;
                        let width = (k - n).unsigned_abs() + (kp - np).unsigned_abs();
                        empirical = empirical.max(width);
                    }
                }
            }
        }
    }
    Ok(BandwidthReport { empirical, formula })
}

/// `Re tr(a b)` without forming the product matrix.
fn trace_product_re(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
    let d = a.dim();
    let (ma, mb) = (a.matrix(), b.matrix());
    let mut acc = 0.0;
    for r in 0..d {
        for c in 0..d {
            let prod = ma[(r, c)] * mb[(c, r)];
            acc += prod.re;
        }
    }
    acc
}
