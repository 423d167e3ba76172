//! Dense eigenvalue computation and spectrum bookkeeping.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::Matrix;

/// Largest dimension accepted by the dense eigensolver.
pub const MAX_DENSE_DIM: usize = 4096;
pub const DEFAULT_TOL_UNIT: f64 = 1e-6;
pub const DEFAULT_TOL_ZERO: f64 = 1e-6;

/// Eigenvalues sorted by descending modulus, with counts of eigenvalues near
/// one and near zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex64>,
    pub count_near_unit: usize,
    pub count_near_zero: usize,
    pub dominant_modulus: f64,
}

impl SpectrumReport {
    pub fn from_eigenvalues(mut eigenvalues: Vec<Complex64>, tol_unit: f64, tol_zero: f64) -> Self {
        eigenvalues.sort_by(|a, b| {
            b.norm()
                .total_cmp(&a.norm())
                .then(b.re.total_cmp(&a.re))
                .then(b.im.total_cmp(&a.im))
        });
        let count_near_unit = eigenvalues.iter().filter(|z| (*z - 1.0).norm() <= tol_unit).count();
        let count_near_zero = eigenvalues.iter().filter(|z| z.norm() <= tol_zero).count();
        let dominant_modulus = eigenvalues.first().map_or(0.0, |z| z.norm());
        Self { eigenvalues, count_near_unit, count_near_zero, dominant_modulus }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Real parts sorted ascending; convenient for real spectra.
    pub fn real_parts_ascending(&self) -> Vec<f64> {
        let mut re: Vec<f64> = self.eigenvalues.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        re
    }

    pub fn max_imag(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// All eigenvalues of a real square matrix.
///
/// Exactly symmetric input takes the symmetric tridiagonal path; everything
/// else goes through a real Schur decomposition.
pub fn dense_eigenvalues(a: &Matrix) -> Result<SpectrumReport> {
    dense_eigenvalues_with(a, DEFAULT_TOL_UNIT, DEFAULT_TOL_ZERO)
}

pub fn dense_eigenvalues_with(a: &Matrix, tol_unit: f64, tol_zero: f64) -> Result<SpectrumReport> {
    if !a.is_square() {
        return Err(Error::InvalidArgument(format!(
            "eigenvalues need a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    if n > MAX_DENSE_DIM {
        return Err(Error::ResourceLimit(format!(
            "dense eigensolve of dimension {n} exceeds the limit {MAX_DENSE_DIM}"
        )));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let eigenvalues: Vec<Complex64> = if n == 0 {
        Vec::new()
    } else if *a == a.transpose() {
        a.symmetric_eigenvalues().iter().map(|&re| Complex64::new(re, 0.0)).collect()
    } else {
        a.complex_eigenvalues().iter().copied().collect()
    };
    Ok(SpectrumReport::from_eigenvalues(eigenvalues, tol_unit, tol_zero))
}
