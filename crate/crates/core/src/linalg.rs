//! Thin wrapper around the Hermitian eigensolver.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigendecomposition of a Hermitian matrix: real eigenvalues (ascending)
/// and the unitary matrix whose columns are the matching eigenvectors.
pub(crate) fn eigh(mat: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let dim = mat.nrows();
    let eig = SymmetricEigen::try_new(mat.clone(), f64::EPSILON, 4096)
        .ok_or(Error::Eigensolve { dim })?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(dim, dim);
    for (col, &src) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub(crate) fn min_eigenvalue(mat: &DMatrix<Complex64>) -> Result<f64> {
    let dim = mat.nrows();
    let eig = SymmetricEigen::try_new(mat.clone(), f64::EPSILON, 4096)
        .ok_or(Error::Eigensolve { dim })?;
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}
