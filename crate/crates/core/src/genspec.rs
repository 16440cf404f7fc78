//! Symbolic time-dependent operator polynomials.
//!
//! A [`PolynomialOperatorSpec`] describes `sum_{l,l'} A_{l,l'}(t) a'^l a^l'`
//! where each coefficient `A_{l,l'}(t) = sum_k C_k exp(i w_k t)` is a finite
//! trigonometric polynomial with 2x2 complex matrix amplitudes acting on the
//! atomic factor. This subclass covers constant coefficients and the
//! rotating drive `sigma_+ e^{-i w_p t} + sigma_- e^{i w_p t}` while staying
//! exactly serializable.
//!
//! Specs are evaluated on a truncated space by substituting the truncated
//! ladder operators into the monomials.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{self, OperatorMatrix, TruncationLevel};

/// Finite trigonometric polynomial `t -> sum_k C_k exp(i w_k t)` with values
/// in the 2x2 complex matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigCoefficient {
    components: Vec<(Matrix2<Complex64>, f64)>,
}

impl TrigCoefficient {
    pub fn new(components: Vec<(Matrix2<Complex64>, f64)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidModel(
                "trigonometric coefficient needs at least one component".into(),
            ));
        }
        for (c, omega) in &components {
            if !omega.is_finite() || c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidModel(
                    "trigonometric coefficient has a non-finite entry".into(),
                ));
            }
        }
        Ok(TrigCoefficient { components })
    }

    /// Time-independent coefficient.
    pub fn constant(c: Matrix2<Complex64>) -> Self {
        TrigCoefficient {
            components: vec![(c, 0.0)],
        }
    }

    pub fn harmonic(c: Matrix2<Complex64>, omega: f64) -> Result<Self> {
        TrigCoefficient::new(vec![(c, omega)])
    }

    pub fn components(&self) -> &[(Matrix2<Complex64>, f64)] {
        &self.components
    }

    pub fn value(&self, t: f64) -> Matrix2<Complex64> {
        let mut out = Matrix2::zeros();
        for (c, omega) in &self.components {
            let phase = Complex64::new(0.0, omega * t).exp();
            out += c.map(|z| z * phase);
        }
        out
    }

    pub fn is_static(&self) -> bool {
        self.components.iter().all(|(_, w)| *w == 0.0)
    }
}

/// One normal-ordered monomial `coeff(t) . a'^raising a^lowering`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialTerm {
    pub raising: usize,
    pub lowering: usize,
    pub coeff: TrigCoefficient,
}

impl MonomialTerm {
    pub fn degree(&self) -> usize {
        self.raising + self.lowering
    }

    /// Photon-index shift produced by the monomial (`raising - lowering`).
    pub fn shift(&self) -> isize {
        self.raising as isize - self.lowering as isize
    }
}

/// Polynomial in the truncated ladder operators with trigonometric 2x2
/// matrix coefficients; houses both pumps `A^e(t)` and dissipation
/// polynomials `V(t)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolynomialOperatorSpec {
    terms: Vec<MonomialTerm>,
}

impl PolynomialOperatorSpec {
    pub fn new(terms: Vec<MonomialTerm>) -> Self {
        PolynomialOperatorSpec { terms }
    }

    pub fn terms(&self) -> &[MonomialTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Max over terms of `raising + lowering`; 0 for the empty spec.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(MonomialTerm::degree).max().unwrap_or(0)
    }

    pub fn is_static(&self) -> bool {
        self.terms.iter().all(|term| term.coeff.is_static())
    }

    /// Distinct nonzero coefficient frequencies, in first-seen order.
    pub fn frequencies(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for term in &self.terms {
            for (_, w) in term.coeff.components() {
                if *w != 0.0 && !out.contains(w) {
                    out.push(*w);
                }
            }
        }
        out
    }

    /// Concatenation of two specs; evaluation is linear in the terms.
    pub fn concat(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        PolynomialOperatorSpec { terms }
    }

    /// Evaluate on the truncated space at time `t`.
    pub fn eval(&self, level: TruncationLevel, t: f64) -> OperatorMatrix {
        let mut out = OperatorMatrix::zeros(level);
        for term in &self.terms {
            let c = term.coeff.value(t);
            let m = fock::monomial(level, term.raising, term.lowering, &c);
            out = &out + &m;
        }
        out
    }

    /// Check Hermiticity of the evaluated operator at each sample time.
    ///
    /// Sampling stands in for symbolic term-pairing analysis; the tolerance
    /// is `1e-10 * dim` on the Hilbert-Schmidt defect `||A - A'||`.
    pub fn validate_hermitian(
        &self,
        level: TruncationLevel,
        sample_times: &[f64],
    ) -> std::result::Result<(), HermiticityReport> {
        let tol = HERMITICITY_TOL_PER_DIM * level.dim() as f64;
        let mut violations = Vec::new();
        for &t in sample_times {
            let m = self.eval(level, t);
            let defect = m.hermitian_defect();
            if defect > tol {
                violations.push(HermiticityViolation { t, defect });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(HermiticityReport { tol, violations })
        }
    }

    /// Uniform sample grid used by the default Hermiticity validation.
    pub fn default_sample_times(t_max: f64) -> Vec<f64> {
        let n = HERMITICITY_SAMPLES;
        (0..n)
            .map(|k| t_max * k as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Hermiticity defect tolerance per unit of ambient dimension.
pub const HERMITICITY_TOL_PER_DIM: f64 = 1e-10;

/// Number of uniform sample times used by the default validation grid.
pub const HERMITICITY_SAMPLES: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct HermiticityViolation {
    pub t: f64,
    pub defect: f64,
}

/// Sampled-time Hermiticity violations of a pump spec.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiticityReport {
    pub tol: f64,
    pub violations: Vec<HermiticityViolation>,
}

impl std::fmt::Display for HermiticityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "defect exceeds {:.3e} at {} sampled time(s); worst {:.3e} at t = {:.6}",
            self.tol,
            self.violations.len(),
            self.violations
                .iter()
                .map(|v| v.defect)
                .fold(0.0, f64::max),
            self.violations
                .iter()
                .max_by(|a, b| a.defect.total_cmp(&b.defect))
                .map(|v| v.t)
                .unwrap_or(0.0),
        )
    }
}

/// Built-in operator specifications.
///
/// `PhotonLossD1` uses `V = a / sqrt(2)` so that the double-commutator
/// dissipator `[V rho, V'] + [V, rho V']` reproduces the standard photon-loss
/// form `a rho a' - (a'a rho + rho a'a)/2` exactly; `PhotonLossRaw` keeps
/// `V = a`, which yields twice that operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    PhotonLossD1,
    PhotonLossRaw,
    PumpCollapseRevival { pump_freq: f64 },
    PumpDisplacement,
    PumpNumber,
}

impl Preset {
    /// Resolve a preset from its configuration name.
    pub fn by_name(name: &str, pump_freq: Option<f64>) -> Result<Self> {
        match name {
            "photon_loss_D1" => Ok(Preset::PhotonLossD1),
            "photon_loss_raw" => Ok(Preset::PhotonLossRaw),
            "pump_collapse_revival" => {
                let pump_freq = pump_freq.ok_or_else(|| Error::MissingPresetParameter {
                    name: name.into(),
                    param: "omega_p".into(),
                })?;
                Ok(Preset::PumpCollapseRevival { pump_freq })
            }
            "pump_displacement" => Ok(Preset::PumpDisplacement),
            "pump_number" => Ok(Preset::PumpNumber),
            _ => Err(Error::UnknownPreset(name.into())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::PhotonLossD1 => "photon_loss_D1",
            Preset::PhotonLossRaw => "photon_loss_raw",
            Preset::PumpCollapseRevival { .. } => "pump_collapse_revival",
            Preset::PumpDisplacement => "pump_displacement",
            Preset::PumpNumber => "pump_number",
        }
    }
}

/// Build the spec for a built-in preset.
pub fn preset(p: Preset) -> PolynomialOperatorSpec {
    let id = fock::two_level::identity();
    match p {
        Preset::PhotonLossD1 => {
            let c = id.map(|z| z / Complex64::new(2.0_f64.sqrt(), 0.0));
            PolynomialOperatorSpec::new(vec![MonomialTerm {
                raising: 0,
                lowering: 1,
                coeff: TrigCoefficient::constant(c),
            }])
        }
        Preset::PhotonLossRaw => PolynomialOperatorSpec::new(vec![MonomialTerm {
            raising: 0,
            lowering: 1,
            coeff: TrigCoefficient::constant(id),
        }]),
        Preset::PumpCollapseRevival { pump_freq } => PolynomialOperatorSpec::new(vec![
            MonomialTerm {
                raising: 0,
                lowering: 0,
                coeff: TrigCoefficient::harmonic(fock::two_level::sigma_plus(), -pump_freq)
                    .expect("finite frequency"),
            },
            MonomialTerm {
                raising: 0,
                lowering: 0,
                coeff: TrigCoefficient::harmonic(fock::two_level::sigma_minus(), pump_freq)
                    .expect("finite frequency"),
            },
        ]),
        Preset::PumpDisplacement => PolynomialOperatorSpec::new(vec![
            MonomialTerm {
                raising: 1,
                lowering: 0,
                coeff: TrigCoefficient::constant(id),
            },
            MonomialTerm {
                raising: 0,
                lowering: 1,
                coeff: TrigCoefficient::constant(id),
            },
        ]),
        Preset::PumpNumber => PolynomialOperatorSpec::new(vec![MonomialTerm {
            raising: 1,
            lowering: 1,
            coeff: TrigCoefficient::constant(id),
        }]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{annihilation, pauli, two_level, Pauli};
    use approx::assert_abs_diff_eq;

    fn lvl(nu: usize) -> TruncationLevel {
        TruncationLevel::new(nu).unwrap()
    }

    #[test]
    fn collapse_revival_at_zero_is_sigma1() {
        let spec = preset(Preset::PumpCollapseRevival { pump_freq: 1.0 });
        let level = lvl(3);
        let m = spec.eval(level, 0.0);
        let s1 = pauli(Pauli::One, level);
        assert!((&m - &s1).max_abs() < 1e-15);
    }

    #[test]
    fn collapse_revival_phase_at_half_period() {
        // At t = pi / w_p the sigma_+ coefficient is e^{-i pi} = -1.
        let w = 0.7;
        let spec = preset(Preset::PumpCollapseRevival { pump_freq: w });
        let c = spec.terms()[0].coeff.value(std::f64::consts::PI / w);
        assert_abs_diff_eq!(c[(0, 1)].re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c[(0, 1)].im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn static_coefficients_are_time_independent() {
        let spec = preset(Preset::PumpDisplacement);
        assert!(spec.is_static());
        let level = lvl(4);
        let a = spec.eval(level, 0.0);
        let b = spec.eval(level, 17.3);
        assert!((&a - &b).max_abs() == 0.0);
    }

    #[test]
    fn scaled_lowering_term_matches_ladder_matrix() {
        // {l = 0, l' = 1, C = I/sqrt(2)} equals annihilation / sqrt(2).
        let spec = preset(Preset::PhotonLossD1);
        let level = lvl(2);
        let m = spec.eval(level, 0.0);
        let expected = annihilation(level).scale(Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0));
        assert!((&m - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn eval_is_linear_in_terms() {
        let s1 = preset(Preset::PumpDisplacement);
        let s2 = preset(Preset::PumpNumber);
        let joined = s1.concat(&s2);
        let level = lvl(5);
        for t in [0.0, 0.4, 2.0] {
            let lhs = joined.eval(level, t);
            let rhs = &s1.eval(level, t) + &s2.eval(level, t);
            assert!((&lhs - &rhs).max_abs() < 1e-13);
        }
    }

    #[test]
    fn degree_reporting() {
        assert_eq!(preset(Preset::PumpNumber).degree(), 2);
        assert_eq!(preset(Preset::PumpDisplacement).degree(), 1);
        assert_eq!(preset(Preset::PhotonLossD1).degree(), 1);
        assert_eq!(PolynomialOperatorSpec::default().degree(), 0);
    }

    #[test]
    fn hermiticity_validation_accepts_standard_pumps() {
        let level = lvl(4);
        let times = PolynomialOperatorSpec::default_sample_times(10.0);
        for spec in [
            preset(Preset::PumpCollapseRevival { pump_freq: 1.3 }),
            preset(Preset::PumpDisplacement),
            preset(Preset::PumpNumber),
        ] {
            assert!(spec.validate_hermitian(level, &times).is_ok());
        }
    }

    #[test]
    fn hermiticity_validation_rejects_sigma_plus_pump() {
        let spec = PolynomialOperatorSpec::new(vec![MonomialTerm {
            raising: 0,
            lowering: 0,
            coeff: TrigCoefficient::constant(two_level::sigma_plus()),
        }]);
        let level = lvl(4);
        let times = PolynomialOperatorSpec::default_sample_times(10.0);
        let report = spec.validate_hermitian(level, &times).unwrap_err();
        // sigma_+ alone is non-Hermitian at every sampled time.
        assert_eq!(report.violations.len(), times.len());
    }

    #[test]
    fn preset_lookup_by_name() {
        assert!(matches!(
            Preset::by_name("photon_loss_D1", None),
            Ok(Preset::PhotonLossD1)
        ));
        assert!(matches!(
            Preset::by_name("pump_collapse_revival", Some(2.0)),
            Ok(Preset::PumpCollapseRevival { .. })
        ));
        assert!(matches!(
            Preset::by_name("pump_collapse_revival", None),
            Err(Error::MissingPresetParameter { .. })
        ));
        assert!(matches!(
            Preset::by_name("no_such_preset", None),
            Err(Error::UnknownPreset(_))
        ));
    }
}
