//! Symmetric Krylov solvers: MINRES and preconditioned conjugate gradients.

use crate::error::{invalid, Result};
use crate::numlin::operator::{symmetry_defect, LinearOperator};
use crate::Vector;

/// Iterations without residual decrease after which MINRES stops.
pub const MINRES_STAGNATION_WINDOW: usize = 50;
/// Iterations between true-residual evaluations in MINRES.
const MINRES_CHECK_INTERVAL: usize = 10;
const SYMMETRY_PROBE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KrylovStats {
    pub iterations: usize,
    /// True relative residual `‖b − Ax‖ / ‖b‖` of the returned iterate.
    pub final_relative_residual: f64,
    /// PCG met non-positive curvature and stopped early.
    pub breakdown: bool,
    /// MINRES stopped because its residual stopped decreasing.
    pub stagnated: bool,
}

impl KrylovStats {
    pub fn converged(&self, tol: f64) -> bool {
        self.final_relative_residual <= tol
    }
}

fn check_dims(a: &dyn LinearOperator, b: &Vector, pre: Option<&dyn LinearOperator>) -> Result<()> {
    if a.dim() != b.len() {
        return Err(invalid(format!("operator dimension {} does not match rhs length {}", a.dim(), b.len())));
    }
    if let Some(m) = pre {
        if m.dim() != b.len() {
            return Err(invalid("preconditioner dimension does not match rhs"));
        }
    }
    Ok(())
}

fn true_relres(a: &dyn LinearOperator, x: &Vector, b: &Vector, bnorm: f64) -> f64 {
    (b - a.apply(x)).norm() / bnorm
}

/// MINRES for symmetric, possibly indefinite or singular, systems.
///
/// Uses the Lanczos process with Givens rotations. The optional
/// preconditioner must be symmetric positive definite and is applied as an
/// approximate inverse. Stops when the true relative residual reaches `tol`,
/// after `maxit` iterations, or when the true residual has not decreased over
/// [`MINRES_STAGNATION_WINDOW`] iterations; the best iterate seen is returned.
pub fn minres(
    a: &dyn LinearOperator,
    b: &Vector,
    tol: f64,
    maxit: usize,
    pre: Option<&dyn LinearOperator>,
) -> Result<(Vector, KrylovStats)> {
    check_dims(a, b, pre)?;
    let n = b.len();
    let bnorm = b.norm();
    if bnorm == 0.0 {
        return Ok((Vector::zeros(n), KrylovStats::default()));
    }
    let defect = symmetry_defect(a, 1, 0x5eed);
    if defect > SYMMETRY_PROBE_TOL {
        return Err(invalid(format!("operator failed the symmetry probe (defect {defect:.3e})")));
    }
    let precondition = |v: &Vector| pre.map_or_else(|| v.clone(), |m| m.apply(v));

    let mut x = Vector::zeros(n);
    let mut r1 = b.clone();
    let mut y = precondition(&r1);
    let beta1_sq = r1.dot(&y);
    if beta1_sq <= 0.0 {
        return Err(invalid("preconditioner is not positive definite"));
    }
    let beta1 = beta1_sq.sqrt();
    let mut r2 = r1.clone();
    let mut w = Vector::zeros(n);
    let mut w2 = Vector::zeros(n);

    let (mut oldb, mut beta) = (0.0, beta1);
    let (mut dbar, mut epsln, mut phibar) = (0.0, 0.0, beta1);
    let (mut cs, mut sn) = (-1.0_f64, 0.0_f64);

    let mut best = (Vector::zeros(n), 1.0, 0);
    let mut stats = KrylovStats::default();
    let mut tnorm2 = 0.0;
    // the recurrence estimate can drift from the true residual; the target
    // tightens whenever a check fails
    let mut target = tol;

    for itn in 1..=maxit {
        stats.iterations = itn;
        let v = &y / beta;
        y = a.apply(&v);
        if itn >= 2 {
            y.axpy(-beta / oldb, &r1, 1.0);
        }
        let alfa = v.dot(&y);
        y.axpy(-alfa / beta, &r2, 1.0);
        r1 = std::mem::replace(&mut r2, y.clone());
        y = precondition(&r2);
        oldb = beta;
        let beta_sq = r2.dot(&y);
        if beta_sq < 0.0 {
            return Err(invalid("preconditioner is not positive definite"));
        }
        beta = beta_sq.sqrt();
        tnorm2 += alfa * alfa + oldb * oldb + beta * beta;
        let exhausted = beta <= 10.0 * f64::EPSILON * tnorm2.sqrt();

        let oldeps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;

        let gamma = gbar.hypot(beta).max(f64::EPSILON);
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;

        let w1 = std::mem::replace(&mut w2, w.clone());
        w = (&v - &w1 * oldeps - &w2 * delta) / gamma;
        x.axpy(phi, &w, 1.0);

        let estimate = phibar / beta1;
        if exhausted || estimate <= target || itn % MINRES_CHECK_INTERVAL == 0 {
            let relres = true_relres(a, &x, b, bnorm);
            if relres <= tol || exhausted {
                if relres < best.1 || relres <= tol {
                    best = (x.clone(), relres, itn);
                }
                break;
            }
            if estimate <= target {
                target = estimate * tol / relres;
            }
            if relres < best.1 {
                best = (x.clone(), relres, itn);
            } else if itn - best.2 >= MINRES_STAGNATION_WINDOW {
                stats.stagnated = true;
                break;
            }
        }
    }
    if !stats.stagnated && stats.iterations == maxit {
        let relres = true_relres(a, &x, b, bnorm);
        if relres < best.1 {
            best = (x, relres, maxit);
        }
    }
    stats.final_relative_residual = best.1;
    Ok((best.0, stats))
}

/// Preconditioned conjugate gradients.
///
/// Reports `breakdown` when a search direction has non-positive curvature
/// `⟨Ap, p⟩ ≤ 0`, returning the iterate reached so far.
pub fn pcg(
    a: &dyn LinearOperator,
    b: &Vector,
    pre: &dyn LinearOperator,
    tol: f64,
    maxit: usize,
) -> Result<(Vector, KrylovStats)> {
    check_dims(a, b, Some(pre))?;
    let n = b.len();
    let bnorm = b.norm();
    if bnorm == 0.0 {
        return Ok((Vector::zeros(n), KrylovStats::default()));
    }
    let mut x = Vector::zeros(n);
    let mut r = b.clone();
    let mut z = pre.apply(&r);
    let mut rz = r.dot(&z);
    if rz <= 0.0 {
        return Err(invalid("preconditioner is not positive definite"));
    }
    let mut p = z.clone();
    let mut stats = KrylovStats::default();
    for itn in 1..=maxit {
        let q = a.apply(&p);
        let curvature = p.dot(&q);
        if curvature <= 0.0 || !curvature.is_finite() {
            stats.breakdown = true;
            break;
        }
        stats.iterations = itn;
        let alpha = rz / curvature;
        x.axpy(alpha, &p, 1.0);
        r.axpy(-alpha, &q, 1.0);
        if r.norm() / bnorm <= tol {
            break;
        }
        z = pre.apply(&r);
        let rz_new = r.dot(&z);
        if rz_new <= 0.0 {
            return Err(invalid("preconditioner is not positive definite"));
        }
        p = &z + &p * (rz_new / rz);
        rz = rz_new;
    }
    stats.final_relative_residual = true_relres(a, &x, b, bnorm);
    Ok((x, stats))
}
