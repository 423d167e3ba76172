//! Iteration-matrix spectra and convergence-rate diagnostics.

use crate::error::{invalid, Result};
use crate::numlin::{dense_eigenvalues, fd_jacobian, SpectrumReport};
use crate::solvers::problem::ProblemSpec;
use crate::solvers::trace::IterationTrace;
use crate::Vector;

/// Spectrum of the finite-difference Jacobian of `map` at `xstar`.
pub fn iteration_matrix_spectrum<F>(map: F, xstar: &Vector, h: f64) -> Result<SpectrumReport>
where
    F: Fn(&Vector) -> Result<Vector>,
{
    dense_eigenvalues(&fd_jacobian(map, xstar, h)?)
}

/// Spectrum of the problem's fixed-point iteration matrix at `xstar`, using
/// the analytic Jacobian when the problem supplies one.
pub fn fixed_point_spectrum(problem: &ProblemSpec, xstar: &Vector) -> Result<SpectrumReport> {
    dense_eigenvalues(&problem.fixed_point_jacobian(xstar)?)
}

/// Ratios `E_{n+1} / E_n` of consecutive reference errors.
///
/// The list stops at the first zero error.
pub fn convergence_ratios(trace: &IterationTrace) -> Result<Vec<f64>> {
    let errors: Vec<f64> = trace
        .rows
        .iter()
        .map(|r| r.ref_error.ok_or_else(|| invalid(format!("row {} has no reference error", r.n))))
        .collect::<Result<_>>()?;
    if errors.len() < 2 {
        return Err(invalid("need at least two reference errors"));
    }
    let mut ratios = Vec::with_capacity(errors.len() - 1);
    for w in errors.windows(2) {
        if w[0] == 0.0 {
            break;
        }
        ratios.push(w[1] / w[0]);
    }
    Ok(ratios)
}
