//! Solver configuration.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InnerSolver {
    Minres,
    Pcg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub tol_residual: f64,
    pub max_outer: usize,
    /// Petviashvili exponent applied to the stabilizing factor.
    pub gamma: f64,
    pub inner_solver: InnerSolver,
    pub inner_tol: f64,
    pub inner_maxit: usize,
    /// Shift `s` of the preconditioner `(sI − ∂²)⁻¹`.
    pub precond_s: f64,
    /// Whether MINRES steps (including PCG fallbacks) use the problem's
    /// preconditioner.
    pub minres_preconditioned: bool,
    pub divergence_cap: f64,
    /// Stop with `MaxIterations` once the residual has not improved on its
    /// best value for this many outer iterations.
    pub stall_window: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol_residual: 1e-7,
            max_outer: 1000,
            gamma: 2.0 / 3.0,
            inner_solver: InnerSolver::Minres,
            inner_tol: 1e-10,
            inner_maxit: 500,
            precond_s: 1.0,
            minres_preconditioned: false,
            divergence_cap: 1e8,
            stall_window: None,
        }
    }
}

impl SolverConfig {
    /// Settings for the N-body fixed-point experiments.
    pub fn nbody() -> Self {
        Self::default()
    }

    /// Settings for the Bona-Smith Newton experiments.
    ///
    /// Inner solves are inexact: resolving the near-kernel direction of the
    /// Jacobian exactly makes every Newton step halve the offset along the
    /// translation orbit, while a loose relative tolerance leaves that
    /// component alone and gives linear outer convergence.
    pub fn bona_smith() -> Self {
        Self {
            tol_residual: 1e-12,
            max_outer: 100,
            inner_solver: InnerSolver::Pcg,
            inner_tol: 1e-2,
            inner_maxit: 20_000,
            stall_window: Some(8),
            ..Self::default()
        }
    }

    /// Optimal exponent `p/(p − 1)` for homogeneity degree `p`.
    pub fn optimal_gamma(degree: f64) -> f64 {
        degree / (degree - 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("tol_residual", self.tol_residual)?;
        positive("inner_tol", self.inner_tol)?;
        positive("precond_s", self.precond_s)?;
        positive("divergence_cap", self.divergence_cap)?;
        if !self.gamma.is_finite() {
            return Err(invalid("gamma must be finite"));
        }
        if self.inner_maxit == 0 {
            return Err(invalid("inner_maxit must be at least 1"));
        }
        if self.stall_window == Some(0) {
            return Err(invalid("stall_window must be at least 1"));
        }
        Ok(())
    }

    /// Whether `|p + γ(1 − p)| < 1`, the local convergence condition of the
    /// Petviashvili iteration for homogeneity degree `p`.
    pub fn gamma_filters_degree(&self, degree: f64) -> bool {
        (degree + self.gamma * (1.0 - degree)).abs() < 1.0
    }
}
