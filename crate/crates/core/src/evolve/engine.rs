//! Structure-aware application of the generator for the integrator hot loop.
//!
//! Every operator entering the generator — the Hamiltonian, the dissipation
//! polynomials, their adjoints and Gram products — is a trigonometric
//! combination `B + sum_k e^{i w_k t} B_k` of sparse matrices sharing a fixed
//! band pattern (the monomial `a'^l a^l'` only couples photon indices shifted
//! by `l - l'`). The engine stores each of them once in compressed sparse row
//! form over the union pattern and re-evaluates only the numeric values per
//! stage time, so one generator application costs `O(d^2 * band)` instead of
//! the dense `O(d^3)`.
//!
//! The dense [`lindblad::generator_apply`] is the reference implementation;
//! the engine must agree with it to roundoff (tested below) and exists purely
//! for speed.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::fock::{self, OperatorMatrix, Pauli};
use crate::genspec::PolynomialOperatorSpec;
use crate::lindblad::ModelSpec;

/// Sparse pattern in row-compressed form.
#[derive(Debug, Clone)]
struct CsrPattern {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
}

impl CsrPattern {
    fn nnz(&self) -> usize {
        self.cols.len()
    }
}

/// `B + sum_k e^{i w_k t} B_k` with all components stored on one pattern.
#[derive(Debug, Clone)]
struct TrigMatrix {
    pattern: CsrPattern,
    base: Vec<Complex64>,
    harmonics: Vec<(f64, Vec<Complex64>)>,
}

impl TrigMatrix {
    /// Assemble from dense `(frequency, matrix)` components, merging equal
    /// frequencies and dropping structural zeros.
    fn from_components(dim: usize, components: &[(f64, DMatrix<Complex64>)]) -> Self {
        // Union support over all components.
        let mut support = vec![false; dim * dim];
        for (_, m) in components {
            for r in 0..dim {
                for c in 0..dim {
                    if m[(r, c)] != Complex64::ZERO {
                        support[r * dim + c] = true;
                    }
                }
            }
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        row_ptr.push(0);
        for r in 0..dim {
            for c in 0..dim {
                if support[r * dim + c] {
                    cols.push(c);
                }
            }
            row_ptr.push(cols.len());
        }
        let pattern = CsrPattern { dim, row_ptr, cols };

        let pack = |m: &DMatrix<Complex64>| -> Vec<Complex64> {
            let mut vals = Vec::with_capacity(pattern.nnz());
            for r in 0..dim {
                let cols = &pattern.cols[pattern.row_ptr[r]..pattern.row_ptr[r + 1]];
                vals.extend(cols.iter().map(|&c| m[(r, c)]));
            }
            vals
        };

        let mut base = vec![Complex64::ZERO; pattern.nnz()];
        let mut harmonics: Vec<(f64, Vec<Complex64>)> = Vec::new();
        for (freq, m) in components {
            let packed = pack(m);
            if *freq == 0.0 {
                for (b, v) in base.iter_mut().zip(&packed) {
                    *b += v;
                }
            } else if let Some((_, vals)) =
                harmonics.iter_mut().find(|(w, _)| *w == *freq)
            {
                for (b, v) in vals.iter_mut().zip(&packed) {
                    *b += v;
                }
            } else {
                harmonics.push((*freq, packed));
            }
        }
        TrigMatrix {
            pattern,
            base,
            harmonics,
        }
    }

    #[cfg_attr(not(test), allow(dead_code))]
    fn is_static(&self) -> bool {
        self.harmonics.is_empty()
    }

    /// Write the values at time `t` into `out` (length `nnz`).
    fn eval_into(&self, t: f64, out: &mut Vec<Complex64>) {
        out.clear();
        out.extend_from_slice(&self.base);
        for (freq, vals) in &self.harmonics {
            let phase = Complex64::new(0.0, freq * t).exp();
            for (o, v) in out.iter_mut().zip(vals) {
                *o += v * phase;
            }
        }
    }

    /// Freeze the coefficients at `t`, producing a static matrix.
    fn frozen_at(&self, t: f64) -> TrigMatrix {
        let mut base = Vec::new();
        self.eval_into(t, &mut base);
        TrigMatrix {
            pattern: self.pattern.clone(),
            base,
            harmonics: Vec::new(),
        }
    }
}

/// `out += coef * S * rho` for sparse `S` over row-major `rho`.
fn left_mul_acc(
    s: &CsrPattern,
    vals: &[Complex64],
    rho: &[Complex64],
    coef: Complex64,
    out: &mut [Complex64],
) {
    let d = s.dim;
    for r in 0..d {
        let out_row = &mut out[r * d..(r + 1) * d];
        let range = s.row_ptr[r]..s.row_ptr[r + 1];
        for (&k, &v) in s.cols[range.clone()].iter().zip(&vals[range]) {
            let weight = coef * v;
            let rho_row = &rho[k * d..(k + 1) * d];
            for (o, x) in out_row.iter_mut().zip(rho_row) {
                *o += weight * x;
            }
        }
    }
}

/// `out += coef * rho * S` for sparse `S` over row-major `rho`.
fn right_mul_acc(
    s: &CsrPattern,
    vals: &[Complex64],
    rho: &[Complex64],
    coef: Complex64,
    out: &mut [Complex64],
) {
    let d = s.dim;
    for r in 0..d {
        let rho_row = &rho[r * d..(r + 1) * d];
        let out_row = &mut out[r * d..(r + 1) * d];
        for (k, &x) in rho_row.iter().enumerate() {
            if x == Complex64::ZERO {
                continue;
            }
            let range = s.row_ptr[k]..s.row_ptr[k + 1];
            for (&col, &v) in s.cols[range.clone()].iter().zip(&vals[range]) {
                out_row[col] += coef * x * v;
            }
        }
    }
}

/// One dissipation channel: `V`, `V'`, and the Gram product `V'V` as
/// trigonometric sparse matrices.
#[derive(Debug, Clone)]
struct Channel {
    v: TrigMatrix,
    vdag: TrigMatrix,
    gram: TrigMatrix,
}

/// Scratch buffers reused across stages and steps.
#[derive(Debug, Default)]
pub(crate) struct Workspace {
    h_vals: Vec<Complex64>,
    v_vals: Vec<Complex64>,
    vdag_vals: Vec<Complex64>,
    gram_vals: Vec<Complex64>,
    sandwich: Vec<Complex64>,
}

/// Sparse, time-dependent realization of the generator
/// `rho -> -i[H(t), rho] + gamma sum_j (2 V rho V' - V'V rho - rho V'V)`.
#[derive(Debug, Clone)]
pub(crate) struct GeneratorEngine {
    dim: usize,
    gamma: f64,
    hamiltonian: TrigMatrix,
    channels: Vec<Channel>,
}

impl GeneratorEngine {
    pub fn new(model: &ModelSpec) -> Result<Self> {
        let level = model.level;
        let dim = level.dim();

        // Hamiltonian components: static H0 + interaction, plus one component
        // per pump harmonic (scaled by the coupling).
        let mut h_components: Vec<(f64, DMatrix<Complex64>)> = Vec::new();
        let mut h_static = fock::number(level).scale(Complex64::new(model.omega_c, 0.0));
        h_static = &h_static
            + &fock::pauli(Pauli::Three, level).scale(Complex64::new(0.5 * model.omega_a, 0.0));
        if model.coupling != 0.0 {
            let x = &fock::annihilation(level) + &fock::creation(level);
            let interaction = &x * &fock::pauli(Pauli::One, level);
            h_static = &h_static + &interaction.scale(Complex64::new(model.coupling, 0.0));
        }
        h_components.push((0.0, h_static.into_matrix()));
        if model.coupling != 0.0 {
            for (freq, m) in spec_harmonics(&model.pump, model) {
                h_components.push((freq, m.scale(Complex64::new(model.coupling, 0.0)).into_matrix()));
            }
        }
        let hamiltonian = TrigMatrix::from_components(dim, &h_components);

        // Dissipation channels. V(t) = sum_k e^{i w_k t} V_k gives
        // V'(t) = sum_k e^{-i w_k t} V_k' and
        // V'V(t) = sum_{k,l} e^{i (w_l - w_k) t} V_k' V_l.
        let mut channels = Vec::new();
        for spec in &model.dissipators {
            let parts = spec_harmonics(spec, model);
            let v_components: Vec<(f64, DMatrix<Complex64>)> = parts
                .iter()
                .map(|(w, m)| (*w, m.matrix().clone()))
                .collect();
            let vdag_components: Vec<(f64, DMatrix<Complex64>)> = parts
                .iter()
                .map(|(w, m)| (-*w, m.matrix().adjoint()))
                .collect();
            let mut gram_components: Vec<(f64, DMatrix<Complex64>)> = Vec::new();
            for (wk, mk) in &parts {
                for (wl, ml) in &parts {
                    gram_components.push((wl - wk, mk.matrix().adjoint() * ml.matrix()));
                }
            }
            channels.push(Channel {
                v: TrigMatrix::from_components(dim, &v_components),
                vdag: TrigMatrix::from_components(dim, &vdag_components),
                gram: TrigMatrix::from_components(dim, &gram_components),
            });
        }

        Ok(GeneratorEngine {
            dim,
            gamma: model.damping,
            hamiltonian,
            channels,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub fn is_static(&self) -> bool {
        self.hamiltonian.is_static() && self.channels.iter().all(|c| {
            c.v.is_static() && c.vdag.is_static() && c.gram.is_static()
        })
    }

    /// Engine with all coefficients frozen at time `t`.
    pub fn frozen_at(&self, t: f64) -> GeneratorEngine {
        GeneratorEngine {
            dim: self.dim,
            gamma: self.gamma,
            hamiltonian: self.hamiltonian.frozen_at(t),
            channels: self
                .channels
                .iter()
                .map(|c| Channel {
                    v: c.v.frozen_at(t),
                    vdag: c.vdag.frozen_at(t),
                    gram: c.gram.frozen_at(t),
                })
                .collect(),
        }
    }

    /// `out = A(t) rho`, with `rho` and `out` row-major `dim x dim` buffers.
    pub fn apply_into(
        &self,
        t: f64,
        rho: &[Complex64],
        out: &mut [Complex64],
        ws: &mut Workspace,
    ) {
        let d = self.dim;
        debug_assert_eq!(rho.len(), d * d);
        debug_assert_eq!(out.len(), d * d);
        out.fill(Complex64::ZERO);

        let minus_i = Complex64::new(0.0, -1.0);
        let plus_i = Complex64::new(0.0, 1.0);
        self.hamiltonian.eval_into(t, &mut ws.h_vals);
        left_mul_acc(&self.hamiltonian.pattern, &ws.h_vals, rho, minus_i, out);
        right_mul_acc(&self.hamiltonian.pattern, &ws.h_vals, rho, plus_i, out);

        if self.gamma == 0.0 || self.channels.is_empty() {
            return;
        }
        let gamma = Complex64::new(self.gamma, 0.0);
        for channel in &self.channels {
            channel.v.eval_into(t, &mut ws.v_vals);
            channel.vdag.eval_into(t, &mut ws.vdag_vals);
            channel.gram.eval_into(t, &mut ws.gram_vals);

            // 2 gamma * V rho V'
            ws.sandwich.clear();
            ws.sandwich.resize(d * d, Complex64::ZERO);
            left_mul_acc(
                &channel.v.pattern,
                &ws.v_vals,
                rho,
                Complex64::ONE,
                &mut ws.sandwich,
            );
            // Move the scratch buffer out to appease the borrow of `ws`.
            let sandwich = std::mem::take(&mut ws.sandwich);
            right_mul_acc(&channel.vdag.pattern, &ws.vdag_vals, &sandwich, 2.0 * gamma, out);
            ws.sandwich = sandwich;

            // -gamma * (V'V rho + rho V'V)
            left_mul_acc(&channel.gram.pattern, &ws.gram_vals, rho, -gamma, out);
            right_mul_acc(&channel.gram.pattern, &ws.gram_vals, rho, -gamma, out);
        }
    }
}

/// Expand a polynomial spec into `(frequency, monomial matrix)` pairs on the
/// model's truncation level.
fn spec_harmonics(spec: &PolynomialOperatorSpec, model: &ModelSpec) -> Vec<(f64, OperatorMatrix)> {
    let mut out = Vec::new();
    for term in spec.terms() {
        for (c, freq) in term.coeff.components() {
            out.push((
                *freq,
                fock::monomial(model.level, term.raising, term.lowering, c),
            ));
        }
    }
    out
}

/// Copy a density matrix into a row-major flat buffer.
pub(crate) fn to_flat(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let d = m.nrows();
    let mut out = Vec::with_capacity(d * d);
    for r in 0..d {
        for c in 0..d {
            out.push(m[(r, c)]);
        }
    }
    out
}

/// Rebuild a dense matrix from the row-major flat buffer.
pub(crate) fn from_flat(dim: usize, flat: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |r, c| flat[r * dim + c])
}

/// Replace `rho` by its Hermitian part in place, returning the removed
/// Hilbert-Schmidt defect `||rho - rho'||`.
pub(crate) fn hermitize_flat(dim: usize, rho: &mut [Complex64]) -> f64 {
    let mut acc = 0.0;
    for r in 0..dim {
        let diag = rho[r * dim + r];
        acc += 4.0 * diag.im * diag.im;
        rho[r * dim + r] = Complex64::new(diag.re, 0.0);
        for c in (r + 1)..dim {
            let upper = rho[r * dim + c];
            let lower = rho[c * dim + r];
            let diff = upper - lower.conj();
            acc += 2.0 * diff.norm_sqr();
            let avg = (upper + lower.conj()) * 0.5;
            rho[r * dim + c] = avg;
            rho[c * dim + r] = avg.conj();
        }
    }
    acc.sqrt()
}
