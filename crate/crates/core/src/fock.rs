//! Truncated single-mode Fock space tensored with a two-level atom, and the
//! elementary operators acting on it.
//!
//! The ambient space is `X_nu = span{|n> (x) s : n <= nu, s = s+, s-}` of
//! dimension `2(nu+1)`. Basis vectors are ordered atom-fastest,
//! `flat = 2n + (0 for s+, 1 for s-)`, which keeps every 2x2 atomic
//! coefficient block contiguous.
//!
//! Ladder operators follow the usual conventions
//! `a|n> = sqrt(n)|n-1>`, `a'|n> = sqrt(n+1)|n+1>`, restricted to the
//! truncated space: the annihilation operator leaves `X_nu` invariant and the
//! creation operator is taken as its adjoint, so `a'|nu> = 0` and
//! `[a, a'] = I - (nu+1) P_nu` with `P_nu` the projector onto the top photon
//! level.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Atomic level of the two-level system; the sign is the sigma_3 eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomicLevel {
    /// Excited level `s+` (sigma_3 eigenvalue +1).
    Up,
    /// Ground level `s-` (sigma_3 eigenvalue -1).
    Down,
}

impl AtomicLevel {
    /// Offset within a 2x2 atomic block: 0 for `s+`, 1 for `s-`.
    pub fn index(self) -> usize {
        match self {
            AtomicLevel::Up => 0,
            AtomicLevel::Down => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i % 2 == 0 {
            AtomicLevel::Up
        } else {
            AtomicLevel::Down
        }
    }

    /// The sigma_3 eigenvalue, +1 or -1.
    pub fn sign(self) -> f64 {
        match self {
            AtomicLevel::Up => 1.0,
            AtomicLevel::Down => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            AtomicLevel::Up => '+',
            AtomicLevel::Down => '-',
        }
    }
}

impl std::fmt::Display for AtomicLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Photon-number cutoff `nu >= 1` defining the truncated space of dimension
/// `2(nu+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruncationLevel(usize);

impl TruncationLevel {
    pub fn new(nu: usize) -> Result<Self> {
        if nu < 1 {
            return Err(Error::InvalidTruncation(nu));
        }
        Ok(TruncationLevel(nu))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Number of retained photon levels, `nu + 1`.
    pub fn photon_dim(self) -> usize {
        self.0 + 1
    }

    /// Ambient dimension `2(nu + 1)`.
    pub fn dim(self) -> usize {
        2 * (self.0 + 1)
    }

    /// Level whose ambient dimension is `dim`; inverse of [`Self::dim`].
    pub(crate) fn from_dim(dim: usize) -> Result<Self> {
        if dim < 4 || dim % 2 != 0 {
            return Err(Error::InvalidOperatorShape(dim));
        }
        Ok(TruncationLevel(dim / 2 - 1))
    }
}

impl std::fmt::Display for TruncationLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Basis vector `|n, s>` of the truncated space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub n: usize,
    pub s: AtomicLevel,
}

impl BasisIndex {
    pub fn new(n: usize, s: AtomicLevel) -> Self {
        BasisIndex { n, s }
    }

    /// Flat index `2n + (0 for s+, 1 for s-)`; a bijection onto
    /// `{0, ..., 2(nu+1)-1}` for `n <= nu`.
    pub fn flat(self) -> usize {
        2 * self.n + self.s.index()
    }

    pub fn from_flat(flat: usize) -> Self {
        BasisIndex {
            n: flat / 2,
            s: AtomicLevel::from_index(flat % 2),
        }
    }

    pub fn is_valid_at(self, level: TruncationLevel) -> bool {
        self.n <= level.get()
    }
}

impl std::fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|{},{}>", self.n, self.s)
    }
}

/// Dense complex matrix on the truncated space `X_nu (x) C^2`.
///
/// Row/column indices are flat [`BasisIndex`] values. Dense storage is
/// deliberate: desk-scale dimensions stay below ~520 and the banded
/// structure is exploited separately by the integrator engine.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    mat: DMatrix<Complex64>,
}

impl OperatorMatrix {
    /// Wrap a square matrix whose dimension is `2(nu+1)` for some `nu >= 1`.
    pub fn from_matrix(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                got: mat.ncols(),
            });
        }
        TruncationLevel::from_dim(mat.nrows())?;
        Ok(OperatorMatrix { mat })
    }

    pub fn zeros(level: TruncationLevel) -> Self {
        OperatorMatrix {
            mat: DMatrix::zeros(level.dim(), level.dim()),
        }
    }

    pub fn identity(level: TruncationLevel) -> Self {
        OperatorMatrix {
            mat: DMatrix::identity(level.dim(), level.dim()),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn level(&self) -> TruncationLevel {
        TruncationLevel::from_dim(self.dim()).expect("constructors enforce the shape")
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn matrix_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    pub fn get(&self, row: BasisIndex, col: BasisIndex) -> Complex64 {
        self.mat[(row.flat(), col.flat())]
    }

    pub fn set(&mut self, row: BasisIndex, col: BasisIndex, value: Complex64) {
        self.mat[(row.flat(), col.flat())] = value;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        OperatorMatrix {
            mat: self.mat.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.diagonal().iter().sum()
    }

    /// Hilbert-Schmidt (Frobenius) norm, `sqrt(sum |m_ij|^2)`.
    pub fn hs_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||M - M'||_HS`; zero exactly for Hermitian matrices.
    pub fn hermitian_defect(&self) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for c in 0..d {
            acc += 4.0 * self.mat[(c, c)].im * self.mat[(c, c)].im;
            for r in 0..c {
                let diff = self.mat[(r, c)] - self.mat[(c, r)].conj();
                acc += 2.0 * diff.norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.mat.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        OperatorMatrix {
            mat: self.mat.map(|z| z * factor),
        }
    }

    /// `[self, other] = self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        OperatorMatrix {
            mat: &self.mat * &other.mat - &other.mat * &self.mat,
        }
    }
}

impl std::ops::Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl std::ops::Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl std::ops::Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            mat: &self.mat * &rhs.mat,
        }
    }
}

impl std::ops::Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        OperatorMatrix { mat: -&self.mat }
    }
}

/// 2x2 matrices on the atomic factor.
pub mod two_level {
    use super::{Complex64, Matrix2};

    pub fn identity() -> Matrix2<Complex64> {
        Matrix2::identity()
    }

    /// sigma_1 = [[0, 1], [1, 0]] in the (s+, s-) basis.
    pub fn sigma1() -> Matrix2<Complex64> {
        Matrix2::new(
            Complex64::ZERO,
            Complex64::ONE,
            Complex64::ONE,
            Complex64::ZERO,
        )
    }

    /// sigma_3 = diag(+1, -1): `sigma_3 s_pm = +- s_pm`.
    pub fn sigma3() -> Matrix2<Complex64> {
        Matrix2::new(
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            -Complex64::ONE,
        )
    }

    /// sigma_+ = [[0, 1], [0, 0]]: maps `s-` to `s+`.
    pub fn sigma_plus() -> Matrix2<Complex64> {
        Matrix2::new(
            Complex64::ZERO,
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
        )
    }

    /// sigma_- = [[0, 0], [1, 0]]: maps `s+` to `s-`.
    pub fn sigma_minus() -> Matrix2<Complex64> {
        Matrix2::new(
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ONE,
            Complex64::ZERO,
        )
    }
}

/// Pauli operator selector for [`pauli`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    One,
    Three,
    Plus,
    Minus,
}

/// Truncated annihilation operator `a_nu (x) I`:
/// `<n-1, s| a_nu |n, s> = sqrt(n)` for `1 <= n <= nu`.
pub fn annihilation(level: TruncationLevel) -> OperatorMatrix {
    let mut m = OperatorMatrix::zeros(level);
    for n in 1..=level.get() {
        let amp = Complex64::new((n as f64).sqrt(), 0.0);
        for s in [AtomicLevel::Up, AtomicLevel::Down] {
            m.set(BasisIndex::new(n - 1, s), BasisIndex::new(n, s), amp);
        }
    }
    m
}

/// Truncated creation operator, the adjoint of [`annihilation`]; in
/// particular `a_nu'|nu, s> = 0`.
pub fn creation(level: TruncationLevel) -> OperatorMatrix {
    annihilation(level).adjoint()
}

/// Number operator `a_nu' a_nu (x) I = diag(n)`, exact on the whole truncated
/// range including the top level.
pub fn number(level: TruncationLevel) -> OperatorMatrix {
    let mut m = OperatorMatrix::zeros(level);
    for n in 0..=level.get() {
        let val = Complex64::new(n as f64, 0.0);
        for s in [AtomicLevel::Up, AtomicLevel::Down] {
            let b = BasisIndex::new(n, s);
            m.set(b, b, val);
        }
    }
    m
}

/// Atomic-factor operator `I_{nu+1} (x) C`.
pub fn atomic(coeff: &Matrix2<Complex64>, level: TruncationLevel) -> OperatorMatrix {
    let mut m = OperatorMatrix::zeros(level);
    for n in 0..=level.get() {
        for (i, row) in [AtomicLevel::Up, AtomicLevel::Down].into_iter().enumerate() {
            for (j, col) in [AtomicLevel::Up, AtomicLevel::Down].into_iter().enumerate() {
                m.set(
                    BasisIndex::new(n, row),
                    BasisIndex::new(n, col),
                    coeff[(i, j)],
                );
            }
        }
    }
    m
}

/// Pauli operator acting on the atomic factor only.
pub fn pauli(which: Pauli, level: TruncationLevel) -> OperatorMatrix {
    let c = match which {
        Pauli::One => two_level::sigma1(),
        Pauli::Three => two_level::sigma3(),
        Pauli::Plus => two_level::sigma_plus(),
        Pauli::Minus => two_level::sigma_minus(),
    };
    atomic(&c, level)
}

/// Normal-ordered monomial `(a_nu')^l (a_nu)^l' (x) C`, computed by repeated
/// multiplication of the truncated factors.
pub fn monomial(
    level: TruncationLevel,
    raising: usize,
    lowering: usize,
    coeff: &Matrix2<Complex64>,
) -> OperatorMatrix {
    let mut m = atomic(coeff, level);
    let low = annihilation(level);
    for _ in 0..lowering {
        m = &low * &m;
    }
    let raise = creation(level);
    for _ in 0..raising {
        m = &raise * &m;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn lvl(nu: usize) -> TruncationLevel {
        TruncationLevel::new(nu).unwrap()
    }

    #[test]
    fn flat_indexing_round_trips() {
        let level = lvl(5);
        for flat in 0..level.dim() {
            let b = BasisIndex::from_flat(flat);
            assert_eq!(b.flat(), flat);
            assert!(b.is_valid_at(level));
        }
        assert_eq!(BasisIndex::new(3, AtomicLevel::Down).flat(), 7);
        assert_eq!(BasisIndex::new(0, AtomicLevel::Up).flat(), 0);
    }

    #[test]
    fn truncation_level_validation() {
        assert!(TruncationLevel::new(0).is_err());
        assert_eq!(lvl(2).dim(), 6);
        assert_eq!(lvl(2).photon_dim(), 3);
    }

    #[test]
    fn annihilation_entries_nu2() {
        // <0|a|1> = 1, <1|a|2> = sqrt(2), per atomic sector; nothing else.
        let a = annihilation(lvl(2));
        for s in [AtomicLevel::Up, AtomicLevel::Down] {
            assert_abs_diff_eq!(
                a.get(BasisIndex::new(0, s), BasisIndex::new(1, s)).re,
                1.0,
                epsilon = 0.0
            );
            assert_abs_diff_eq!(
                a.get(BasisIndex::new(1, s), BasisIndex::new(2, s)).re,
                2.0_f64.sqrt(),
                epsilon = 0.0
            );
        }
        let nonzeros = a.matrix().iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzeros, 4);
    }

    #[test]
    fn annihilation_kills_vacuum() {
        let a = annihilation(lvl(1));
        let col = BasisIndex::new(0, AtomicLevel::Up).flat();
        for r in 0..a.dim() {
            assert_eq!(a.matrix()[(r, col)], Complex64::ZERO);
        }
    }

    #[test]
    fn annihilation_nonzero_count_nu3() {
        // Oracle: direct construction gives 3 entries per atomic sector.
        let a = annihilation(lvl(3));
        let nonzeros = a.matrix().iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzeros, 6);
    }

    #[test]
    fn creation_is_adjoint_and_kills_top_level() {
        let level = lvl(2);
        let adag = creation(level);
        assert_abs_diff_eq!(
            adag.get(
                BasisIndex::new(2, AtomicLevel::Up),
                BasisIndex::new(1, AtomicLevel::Up)
            )
            .re,
            2.0_f64.sqrt(),
            epsilon = 0.0
        );
        // a'|2, s> = 0 at nu = 2.
        for s in [AtomicLevel::Up, AtomicLevel::Down] {
            let col = BasisIndex::new(2, s).flat();
            for r in 0..level.dim() {
                assert_eq!(adag.matrix()[(r, col)], Complex64::ZERO);
            }
        }
    }

    #[test]
    fn adjoint_pairing_is_exact() {
        // <a' x, y> = <x, a y> holds entrywise with zero defect: matrix
        // entries are square roots of integers shared between both sides.
        for nu in [1, 4, 16, 64] {
            let level = lvl(nu);
            let a = annihilation(level);
            let adag = creation(level);
            let defect = (&adag - &a.adjoint()).max_abs();
            assert_eq!(defect, 0.0, "nu = {nu}");
        }
    }

    #[test]
    fn commutator_defect_at_top_level() {
        // [a, a'] = I - (nu+1) P_nu; at nu = 4 the top block carries -4 on
        // the diagonal, i.e. I - 5 P_4.
        let level = lvl(4);
        let a = annihilation(level);
        let adag = creation(level);
        let comm = a.commutator(&adag);
        let mut expected = OperatorMatrix::identity(level);
        for s in [AtomicLevel::Up, AtomicLevel::Down] {
            let b = BasisIndex::new(4, s);
            expected.set(b, b, Complex64::new(1.0 - 5.0, 0.0));
        }
        assert!((&comm - &expected).max_abs() < 1e-13);
    }

    #[test]
    fn number_matches_creation_times_annihilation() {
        let level = lvl(8);
        let n = number(level);
        let product = &creation(level) * &annihilation(level);
        assert!((&n - &product).max_abs() < 1e-13);
        // trace = 2 * sum_{n=0}^{8} n = 72
        assert_abs_diff_eq!(n.trace().re, 72.0, epsilon = 1e-12);
    }

    #[test]
    fn pauli_actions() {
        let level = lvl(2);
        let s3 = pauli(Pauli::Three, level);
        for n in 0..=2 {
            assert_eq!(
                s3.get(
                    BasisIndex::new(n, AtomicLevel::Up),
                    BasisIndex::new(n, AtomicLevel::Up)
                ),
                Complex64::ONE
            );
            assert_eq!(
                s3.get(
                    BasisIndex::new(n, AtomicLevel::Down),
                    BasisIndex::new(n, AtomicLevel::Down)
                ),
                -Complex64::ONE
            );
        }
        let sp = pauli(Pauli::Plus, level);
        let sm = pauli(Pauli::Minus, level);
        let s1 = pauli(Pauli::One, level);
        assert!((&(&sp + &sm) - &s1).max_abs() == 0.0);
        assert!((&sp * &sp).max_abs() == 0.0, "sigma_+^2 = 0");
    }

    #[test]
    fn monomial_degenerate_cases() {
        let level = lvl(2);
        let id = monomial(level, 0, 0, &two_level::identity());
        assert!((&id - &OperatorMatrix::identity(level)).max_abs() == 0.0);
        let a = monomial(level, 0, 1, &two_level::identity());
        assert!((&a - &annihilation(level)).max_abs() == 0.0);
    }

    #[test]
    fn monomial_creation_with_sigma1_block() {
        // Oracle: direct product of creation(1) with the sigma_1 block.
        let level = lvl(1);
        let m = monomial(level, 1, 0, &two_level::sigma1());
        let expected = &creation(level) * &pauli(Pauli::One, level);
        assert!((&m - &expected).max_abs() == 0.0);
        // <1, s'| m |0, s> = (sigma_1)_{s's}
        let s1 = two_level::sigma1();
        for (i, sp) in [AtomicLevel::Up, AtomicLevel::Down].into_iter().enumerate() {
            for (j, s) in [AtomicLevel::Up, AtomicLevel::Down].into_iter().enumerate() {
                assert_eq!(
                    m.get(BasisIndex::new(1, sp), BasisIndex::new(0, s)),
                    s1[(i, j)]
                );
            }
        }
    }

    #[test]
    fn monomial_band_support() {
        // Entries vanish unless row photon - column photon = l - l'.
        let level = lvl(6);
        for (l, lp) in [(0usize, 2usize), (2, 0), (1, 1), (3, 1)] {
            let m = monomial(level, l, lp, &two_level::sigma1());
            let shift = l as isize - lp as isize;
            for r in 0..level.dim() {
                for c in 0..level.dim() {
                    let (rn, cn) = (r as isize / 2, c as isize / 2);
                    if rn - cn != shift {
                        assert_eq!(m.matrix()[(r, c)], Complex64::ZERO);
                    }
                }
            }
        }
    }

    #[test]
    fn operator_shape_is_enforced() {
        assert!(OperatorMatrix::from_matrix(DMatrix::zeros(3, 3)).is_err());
        assert!(OperatorMatrix::from_matrix(DMatrix::zeros(4, 6)).is_err());
        assert!(OperatorMatrix::from_matrix(DMatrix::zeros(6, 6)).is_ok());
    }
}
