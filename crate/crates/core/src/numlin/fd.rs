//! Central-difference Jacobians.

use crate::error::{invalid, Result};
use crate::{Matrix, Vector};

/// Default step `1e-6 · max(1, ‖x‖∞)`.
pub fn default_step(x: &Vector) -> f64 {
    1e-6 * x.amax().max(1.0)
}

/// Jacobian of `f` at `x` by central differences with step `h`.
///
/// Column `j` is `(f(x + h e_j) - f(x - h e_j)) / (2h)`.
pub fn fd_jacobian<F>(f: F, x: &Vector, h: f64) -> Result<Matrix>
where
    F: Fn(&Vector) -> Result<Vector>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid(format!("finite-difference step must be positive, got {h}")));
    }
    let n = x.len();
    let mut cols = Vec::with_capacity(n);
    let mut xp = x.clone();
    for j in 0..n {
        xp[j] = x[j] + h;
        let fp = f(&xp)?;
        xp[j] = x[j] - h;
        let fm = f(&xp)?;
        xp[j] = x[j];
        cols.push((fp - fm) / (2.0 * h));
    }
    let m = cols.first().map_or(0, |c| c.len());
    Ok(Matrix::from_fn(m, n, |i, j| cols[j][i]))
}
