//! Outer iteration drivers.

use crate::error::{invalid, Result};
use crate::numlin::{minres, pcg, IdentityOperator, KrylovStats, LinearOperator};
use crate::solvers::config::{InnerSolver, SolverConfig};
use crate::solvers::problem::{stabilizing_power, stabilizing_quotient, ProblemSpec};
use crate::solvers::trace::{InnerSolve, IterationTrace, SolveOutcome, Status, TraceRow};
use crate::Vector;

/// Consecutive failed inner solves after which Newton gives up.
pub const INNER_FAILURE_LIMIT: usize = 3;

struct Monitor<'a> {
    cfg: &'a SolverConfig,
    reference: Option<(&'a Vector, f64)>,
    trace: IterationTrace,
    diagnostics: Vec<String>,
    inner: Vec<InnerSolve>,
    best: f64,
    best_at: usize,
    step_norm: Option<f64>,
}

impl<'a> Monitor<'a> {
    fn new(cfg: &'a SolverConfig, reference: Option<&'a Vector>) -> Self {
        Self {
            cfg,
            reference: reference.map(|r| (r, r.norm())),
            trace: IterationTrace::default(),
            diagnostics: Vec::new(),
            inner: Vec::new(),
            best: f64::INFINITY,
            best_at: 0,
            step_norm: None,
        }
    }

    /// Records the row for iterate `n` and decides whether to stop.
    fn observe(&mut self, n: usize, x: &Vector, residual: f64, stab_factor: Option<f64>) -> Option<Status> {
        let ref_error = self.reference.map(|(r, rn)| (x - r).norm() / rn);
        self.trace.rows.push(TraceRow { n, residual, ref_error, stab_factor, step_norm: self.step_norm.take() });
        if !residual.is_finite() || x.iter().any(|v| !v.is_finite()) {
            self.diagnostics.push(format!("non-finite values at iteration {n}"));
            return Some(Status::Diverged);
        }
        if residual > self.cfg.divergence_cap {
            self.diagnostics.push(format!("residual {residual:e} exceeded the divergence cap at iteration {n}"));
            return Some(Status::Diverged);
        }
        if residual <= self.cfg.tol_residual {
            return Some(Status::ConvergedResidual);
        }
        if ref_error.is_some_and(|e| e <= self.cfg.tol_residual) {
            return Some(Status::ConvergedReference);
        }
        if n >= self.cfg.max_outer {
            return Some(Status::MaxIterations);
        }
        if residual < self.best {
            self.best = residual;
            self.best_at = n;
        } else if let Some(window) = self.cfg.stall_window {
            if n - self.best_at >= window {
                self.diagnostics.push(format!(
                    "residual has not improved on {:e} for {window} iterations",
                    self.best
                ));
                return Some(Status::MaxIterations);
            }
        }
        None
    }

    fn fail(&mut self, msg: String) -> Status {
        self.diagnostics.push(msg);
        Status::Diverged
    }

    fn finish(self, status: Status, x_final: Vector) -> SolveOutcome {
        SolveOutcome { status, x_final, trace: self.trace, diagnostics: self.diagnostics, inner: self.inner }
    }
}

fn check_start(problem: &ProblemSpec, x0: &Vector, cfg: &SolverConfig, reference: Option<&Vector>) -> Result<()> {
    cfg.validate()?;
    if x0.len() != problem.dim() {
        return Err(invalid(format!("initial iterate has length {}, expected {}", x0.len(), problem.dim())));
    }
    if let Some(r) = reference {
        if r.len() != problem.dim() || r.norm() == 0.0 {
            return Err(invalid("reference must be a nonzero vector of the problem dimension"));
        }
    }
    Ok(())
}

/// Plain fixed-point iteration `x_{n+1} = G(x_n)`.
///
/// The residual column is `‖x_n − G(x_n)‖`.
pub fn fixed_point_solve(
    problem: &ProblemSpec,
    x0: &Vector,
    cfg: &SolverConfig,
    reference: Option<&Vector>,
) -> Result<SolveOutcome> {
    check_start(problem, x0, cfg, reference)?;
    if !problem.has_fixed_point() {
        return Err(invalid("fixed-point iteration needs a fixed-point map"));
    }
    let mut mon = Monitor::new(cfg, reference);
    let mut x = x0.clone();
    for n in 0.. {
        let gx = match problem.fixed_point(&x) {
            Ok(v) => v,
            Err(e) => {
                mon.observe(n, &x, f64::NAN, None);
                let status = mon.fail(format!("fixed-point map failed at iteration {n}: {e}"));
                return Ok(mon.finish(status, x));
            }
        };
        let re = (&x - &gx).norm();
        if let Some(status) = mon.observe(n, &x, re, None) {
            return Ok(mon.finish(status, x));
        }
        mon.step_norm = Some(re);
        x = gx;
    }
    unreachable!("loop exits through a stopping rule")
}

fn residual_measure(problem: &ProblemSpec, x: &Vector) -> Result<f64> {
    if problem.has_fixed_point() {
        Ok((x - problem.fixed_point(x)?).norm())
    } else {
        Ok(problem.residual(x)?.norm())
    }
}

/// Petviashvili iteration `x_{n+1} = s_n^γ A⁻¹ Nh(x_n)` with stabilizing
/// factor `s_n = ⟨A x_n, x_n⟩ / ⟨Nh(x_n), x_n⟩`.
///
/// The residual column is `‖x_n − G(x_n)‖` when the problem has a plain
/// fixed-point map and `‖F(x_n)‖` otherwise.
pub fn petviashvili_solve(
    problem: &ProblemSpec,
    x0: &Vector,
    cfg: &SolverConfig,
    reference: Option<&Vector>,
) -> Result<SolveOutcome> {
    check_start(problem, x0, cfg, reference)?;
    let split = problem.split().ok_or_else(|| invalid("Petviashvili iteration needs a homogeneous split"))?;
    if x0.norm() == 0.0 {
        return Err(invalid("Petviashvili iteration needs a nonzero initial iterate"));
    }
    let mut mon = Monitor::new(cfg, reference);
    let mut x = x0.clone();
    for n in 0.. {
        let evaluated = residual_measure(problem, &x).and_then(|re| {
            let nh = split.nonlinear(&x)?;
            Ok((re, nh))
        });
        let (re, nh) = match evaluated {
            Ok(v) => v,
            Err(e) => {
                mon.observe(n, &x, f64::NAN, None);
                let status = mon.fail(format!("map evaluation failed at iteration {n}: {e}"));
                return Ok(mon.finish(status, x));
            }
        };
        let s = stabilizing_quotient(split.apply_linear(&x).dot(&x), nh.dot(&x));
        if let Some(status) = mon.observe(n, &x, re, s.as_ref().ok().copied()) {
            return Ok(mon.finish(status, x));
        }
        let next = s
            .and_then(|s| stabilizing_power(s, cfg.gamma))
            .and_then(|factor| Ok(split.solve_linear(&nh)? * factor));
        match next {
            Ok(next) => {
                mon.step_norm = Some((&next - &x).norm());
                x = next;
            }
            Err(e) => {
                let status = mon.fail(format!("iteration {n}: {e}"));
                return Ok(mon.finish(status, x));
            }
        }
    }
    unreachable!("loop exits through a stopping rule")
}

fn inner_solve(
    problem: &ProblemSpec,
    jac: &dyn LinearOperator,
    rhs: &Vector,
    cfg: &SolverConfig,
) -> Result<(Vector, KrylovStats, bool)> {
    let precond = match problem.preconditioner(cfg.precond_s) {
        Some(m) => Some(m?),
        None => None,
    };
    let minres_pre = if cfg.minres_preconditioned { precond.as_deref() } else { None };
    match cfg.inner_solver {
        InnerSolver::Minres => {
            let (dx, st) = minres(jac, rhs, cfg.inner_tol, cfg.inner_maxit, minres_pre)?;
            Ok((dx, st, false))
        }
        InnerSolver::Pcg => {
            let identity = IdentityOperator(rhs.len());
            let m: &dyn LinearOperator = precond.as_deref().unwrap_or(&identity);
            let (dx, st) = pcg(jac, rhs, m, cfg.inner_tol, cfg.inner_maxit)?;
            if st.breakdown {
                let (dx, st) = minres(jac, rhs, cfg.inner_tol, cfg.inner_maxit, minres_pre)?;
                Ok((dx, st, true))
            } else {
                Ok((dx, st, false))
            }
        }
    }
}

/// Newton iteration `F'(x_n) Δx_n = −F(x_n)`, `x_{n+1} = x_n + Δx_n`, with a
/// symmetric Krylov inner solver.
///
/// With PCG selected the problem's preconditioner is used, and a step whose
/// PCG run meets non-positive curvature is recomputed with MINRES.
pub fn newton_solve(
    problem: &ProblemSpec,
    x0: &Vector,
    cfg: &SolverConfig,
    reference: Option<&Vector>,
) -> Result<SolveOutcome> {
    check_start(problem, x0, cfg, reference)?;
    let mut mon = Monitor::new(cfg, reference);
    let mut x = x0.clone();
    let mut failures = 0;
    for n in 0.. {
        let f = match problem.residual(&x) {
            Ok(f) => f,
            Err(e) => {
                mon.observe(n, &x, f64::NAN, None);
                let status = mon.fail(format!("residual evaluation failed at iteration {n}: {e}"));
                return Ok(mon.finish(status, x));
            }
        };
        if let Some(status) = mon.observe(n, &x, f.norm(), None) {
            return Ok(mon.finish(status, x));
        }
        let step = problem.jacobian_at(&x).and_then(|jac| inner_solve(problem, jac.as_ref(), &-f, cfg));
        let (dx, stats, fell_back) = match step {
            Ok(v) => v,
            Err(e) => {
                let status = mon.fail(format!("linear solve failed at iteration {n}: {e}"));
                return Ok(mon.finish(status, x));
            }
        };
        mon.inner.push(InnerSolve { outer: n, stats, fell_back });
        if stats.converged(cfg.inner_tol) {
            failures = 0;
        } else {
            failures += 1;
            if failures >= INNER_FAILURE_LIMIT {
                mon.diagnostics.push(format!(
                    "inner solver missed tolerance {:e} on {INNER_FAILURE_LIMIT} consecutive steps (last relative residual {:e})",
                    cfg.inner_tol, stats.final_relative_residual
                ));
                return Ok(mon.finish(Status::MaxIterations, x));
            }
        }
        mon.step_norm = Some(dx.norm());
        x += dx;
    }
    unreachable!("loop exits through a stopping rule")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::{DenseOperator, IdentityOperator};
    use crate::solvers::problem::HomogeneousSplit;
    use crate::Matrix;

    fn halving() -> ProblemSpec {
        ProblemSpec::new(2, |x| Ok(x * 0.5)).with_fixed_point(|x| Ok(x * 0.5))
    }

    #[test]
    fn halving_map_converges_to_origin() {
        let cfg = SolverConfig { tol_residual: 1e-10, ..Default::default() };
        let out = fixed_point_solve(&halving(), &Vector::from_element(2, 1.0), &cfg, None).unwrap();
        assert_eq!(out.status, Status::ConvergedResidual);
        assert!(out.x_final.norm() < 1e-9);
        let re = out.trace.residuals();
        for w in re.windows(2) {
            assert!((w[1] / w[0] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn cosine_fixed_point_matches_bisection() {
        // bisection on x − cos x over [0, 1]
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid - mid.cos() > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert!((root - 0.7390851332).abs() < 1e-10);
        let p = ProblemSpec::new(1, |x| Ok(x - x.map(f64::cos))).with_fixed_point(|x| Ok(x.map(f64::cos)));
        let cfg = SolverConfig { tol_residual: 1e-12, ..Default::default() };
        let out = fixed_point_solve(&p, &Vector::from_element(1, 1.0), &cfg, None).unwrap();
        assert_eq!(out.status, Status::ConvergedResidual);
        assert!((out.x_final[0] - root).abs() < 1e-9);
    }

    #[test]
    fn divergence_is_classified() {
        let p = ProblemSpec::new(1, |x| Ok(x * -2.0)).with_fixed_point(|x| Ok(x * 3.0));
        let out = fixed_point_solve(&p, &Vector::from_element(1, 1.0), &SolverConfig::default(), None).unwrap();
        assert_eq!(out.status, Status::Diverged);
        assert!(out.final_residual() > 1e8);
    }

    #[test]
    fn non_finite_values_are_diverged() {
        let p = ProblemSpec::new(1, |x| Ok(x.clone())).with_fixed_point(|x| Ok(x.map(|v| 1.0 / (v - 1.0))));
        let out = fixed_point_solve(&p, &Vector::from_element(1, 1.0), &SolverConfig::default(), None).unwrap();
        assert_eq!(out.status, Status::Diverged);
        assert!(!out.diagnostics.is_empty());
    }

    #[test]
    fn max_iterations_on_neutral_map() {
        let p = ProblemSpec::new(1, |x| Ok(x.clone())).with_fixed_point(|x| Ok(-x));
        let cfg = SolverConfig { max_outer: 25, ..Default::default() };
        let out = fixed_point_solve(&p, &Vector::from_element(1, 1.0), &cfg, None).unwrap();
        assert_eq!(out.status, Status::MaxIterations);
        assert_eq!(out.trace.len(), 26);
        for (i, row) in out.trace.rows.iter().enumerate() {
            assert_eq!(row.n, i);
        }
    }

    #[test]
    fn reference_stopping() {
        let cfg = SolverConfig { tol_residual: 1e-30, ..Default::default() };
        let p = ProblemSpec::new(1, |x| Ok(x - x.map(|v| 0.5 * v + 1.0)))
            .with_fixed_point(|x| Ok(x.map(|v| 0.5 * v + 1.0)));
        let reference = Vector::from_element(1, 2.0);
        let out = fixed_point_solve(&p, &Vector::from_element(1, 0.0), &cfg, Some(&reference)).unwrap();
        assert!(out.status.is_converged());
        let last = out.trace.last().unwrap();
        assert!(last.ref_error.unwrap() <= 1e-30 || last.residual <= 1e-30);
    }

    #[test]
    fn newton_scalar_quadratic() {
        let p = ProblemSpec::new(1, |x| Ok(x.map(|v| v * v - 4.0))).with_jacobian(|x| {
            Ok(Box::new(DenseOperator::new(Matrix::from_element(1, 1, 2.0 * x[0]))) as Box<dyn LinearOperator>)
        });
        let cfg = SolverConfig { tol_residual: 1e-14, ..Default::default() };
        let out = newton_solve(&p, &Vector::from_element(1, 3.0), &cfg, None).unwrap();
        assert_eq!(out.status, Status::ConvergedResidual);
        assert!((out.x_final[0] - 2.0).abs() < 1e-12);
        let re = out.trace.residuals();
        // residual r = x² − 4 obeys r_{n+1} ≈ r_n² / (4 x_n²)
        for w in re.windows(2).filter(|w| w[0] < 0.5 && w[1] > 1e-15) {
            assert!(w[1] <= w[0] * w[0], "{re:?}");
        }
    }

    #[test]
    fn newton_pcg_fallback_on_indefinite_jacobian() {
        // F(x) = (x1² − 1, −x2 − x2³); Jacobian diag(2x1, −1 − 3x2²) is indefinite
        let p = ProblemSpec::new(2, |x| Ok(Vector::from_vec(vec![x[0] * x[0] - 1.0, -x[1] - x[1].powi(3)])))
            .with_jacobian(|x| {
                let d = Vector::from_vec(vec![2.0 * x[0], -1.0 - 3.0 * x[1] * x[1]]);
                Ok(Box::new(DenseOperator::new(Matrix::from_diagonal(&d))) as Box<dyn LinearOperator>)
            })
            .with_preconditioner(|_| Ok(Box::new(IdentityOperator(2)) as Box<dyn LinearOperator>));
        let cfg = SolverConfig { tol_residual: 1e-13, inner_solver: InnerSolver::Pcg, ..Default::default() };
        let out = newton_solve(&p, &Vector::from_vec(vec![2.0, 0.5]), &cfg, None).unwrap();
        assert_eq!(out.status, Status::ConvergedResidual);
        assert!(out.fallback_count() > 0);
        assert!((out.x_final[0] - 1.0).abs() < 1e-12 && out.x_final[1].abs() < 1e-12);
    }

    #[test]
    fn petviashvili_fixes_exact_solution() {
        let split = HomogeneousSplit::new(
            -2.0,
            Box::new(IdentityOperator(2)),
            Box::new(|y| Ok(y.clone())),
            Box::new(|x| Ok(x.map(|v| v.powi(-2)))),
        );
        let p = ProblemSpec::new(2, |x| Ok(x - x.map(|v| v.powi(-2)))).with_split(split);
        let one = Vector::from_element(2, 1.0);
        let out = petviashvili_solve(&p, &one, &SolverConfig::default(), None).unwrap();
        assert_eq!(out.status, Status::ConvergedResidual);
        assert_eq!(out.trace.rows[0].stab_factor, Some(1.0));
        assert_eq!(out.x_final, one);
    }

    #[test]
    fn petviashvili_refuses_negative_factor() {
        let split = HomogeneousSplit::new(
            -2.0,
            Box::new(IdentityOperator(1)),
            Box::new(|y| Ok(y.clone())),
            Box::new(|x| Ok(x.map(|v| -v.powi(-2)))),
        );
        let p = ProblemSpec::new(1, |x| Ok(x + x.map(|v| v.powi(-2)))).with_split(split);
        let out = petviashvili_solve(&p, &Vector::from_element(1, 1.0), &SolverConfig::default(), None).unwrap();
        assert_eq!(out.status, Status::Diverged);
        assert!(out.diagnostics[0].contains("negative"));
    }

    #[test]
    fn preconditions_are_checked() {
        let p = ProblemSpec::new(2, |x| Ok(x.clone()));
        let cfg = SolverConfig::default();
        assert!(fixed_point_solve(&p, &Vector::zeros(2), &cfg, None).is_err());
        assert!(petviashvili_solve(&p, &Vector::zeros(2), &cfg, None).is_err());
        assert!(newton_solve(&p, &Vector::zeros(3), &cfg, None).is_err());
    }
}
