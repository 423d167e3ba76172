//! Lie group actions, infinitesimal generators and orbital-convergence
//! diagnostics: alignment of an iterate with a reference orbit, orbital
//! distance, and first-order prediction of the limit orbit element.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::solvers::ProblemSpec;
use crate::{Matrix, Vector};

/// Residual norm above which a point is not treated as a solution.
pub const SOLUTION_TOL: f64 = 1e-8;
const SEARCH_SAMPLES: usize = 720;

/// An abelian `l`-parameter group acting on `R^m`.
pub trait GroupAction {
    /// Number of group parameters `l`.
    fn dim(&self) -> usize;
    fn act(&self, alpha: &[f64], x: &Vector) -> Vector;
    /// Infinitesimal generators `g_j(x) = ∂/∂α_j act(α, x)` at `α = 0`.
    fn generators(&self, x: &Vector) -> Vec<Vector>;
    /// Closed-form minimizer of `α ↦ ‖x − act(α, xref)‖`, when one exists.
    fn align(&self, _x: &Vector, _xref: &Vector) -> Option<Vec<f64>> {
        None
    }
    /// Period of a one-parameter group, used to bound alignment searches.
    fn period(&self) -> Option<f64> {
        None
    }
}

/// The group with no parameters.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrivialGroup;

impl GroupAction for TrivialGroup {
    fn dim(&self) -> usize {
        0
    }
    fn act(&self, _alpha: &[f64], x: &Vector) -> Vector {
        x.clone()
    }
    fn generators(&self, _x: &Vector) -> Vec<Vector> {
        Vec::new()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub alpha_star: Vec<f64>,
    pub orbital_distance: f64,
    pub raw_distance: f64,
}

/// Largest relative image `‖J(x*) g_j(x*)‖ / ‖g_j(x*)‖` of the generators
/// under the Jacobian at a solution `x*`.
pub fn kernel_check(problem: &ProblemSpec, xstar: &Vector, group: &dyn GroupAction) -> Result<f64> {
    let res = problem.residual(xstar)?.norm();
    if !(res <= SOLUTION_TOL) {
        return Err(Error::Precondition(format!(
            "point is not a solution (residual {res:e} > {SOLUTION_TOL:e})"
        )));
    }
    let gens = group.generators(xstar);
    if gens.is_empty() {
        return Ok(0.0);
    }
    let jac = problem.jacobian_at(xstar)?;
    let mut worst: f64 = 0.0;
    for g in gens {
        let gn = g.norm();
        if gn == 0.0 {
            return Err(Error::Precondition("generator vanishes at the solution".into()));
        }
        worst = worst.max(jac.apply(&g).norm() / gn);
    }
    Ok(worst)
}

fn orbit_distance(group: &dyn GroupAction, x: &Vector, xref: &Vector, alpha: f64) -> f64 {
    (x - group.act(&[alpha], xref)).norm()
}

/// Aligns `x` with the orbit of `xref` under a one-parameter group.
pub fn align_to_orbit(x: &Vector, xref: &Vector, group: &dyn GroupAction) -> Result<OrbitReport> {
    if group.dim() != 1 {
        return Err(invalid(format!("alignment needs a one-parameter group, got l = {}", group.dim())));
    }
    if x.len() != xref.len() {
        return Err(invalid("point and reference have different lengths"));
    }
    let alpha = match group.align(x, xref) {
        Some(a) => a[0],
        None => golden_search(group, x, xref)?,
    };
    Ok(OrbitReport {
        alpha_star: vec![alpha],
        orbital_distance: orbit_distance(group, x, xref, alpha),
        raw_distance: (x - xref).norm(),
    })
}

fn golden_search(group: &dyn GroupAction, x: &Vector, xref: &Vector) -> Result<f64> {
    let period = group
        .period()
        .filter(|p| p.is_finite() && *p > 0.0)
        .ok_or_else(|| Error::Search("group has neither a closed-form alignment nor a period to bracket".into()))?;
    let step = period / SEARCH_SAMPLES as f64;
    let f = |a: f64| orbit_distance(group, x, xref, a);
    let (best_k, _) = (0..SEARCH_SAMPLES)
        .map(|k| (k, f(k as f64 * step)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("sample set is nonempty");
    let (mut lo, mut hi) = ((best_k as f64 - 1.0) * step, (best_k as f64 + 1.0) * step);
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > 1e-14 * period.max(1.0) {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let mut alpha = 0.5 * (lo + hi);
    if alpha > period / 2.0 {
        alpha -= period;
    }
    Ok(alpha)
}

/// First-order prediction of the limit orbit parameter: least-squares
/// coefficients of `x0 − x*` in the generator basis at `x*`.
pub fn predict_limit(x0: &Vector, xstar: &Vector, group: &dyn GroupAction) -> Result<Vec<f64>> {
    if x0.len() != xstar.len() {
        return Err(invalid("initial point and solution have different lengths"));
    }
    let gens = group.generators(xstar);
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    let basis = Matrix::from_columns(&gens);
    let svd = basis.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smax > 0.0) || smin <= 1e-12 * smax {
        return Err(Error::Precondition(format!(
            "generator matrix is rank deficient (singular values {smin:e} .. {smax:e})"
        )));
    }
    let e0 = x0 - xstar;
    let coeffs = svd.solve(&e0, 0.0).map_err(|e| Error::Evaluation(e.to_string()))?;
    Ok(coeffs.iter().copied().collect())
}

/// Largest deviation `‖(act(α, act(β, x)) − act(α+β, x))‖ / ‖x‖` over the given
/// parameter pairs.
pub fn composition_defect(group: &dyn GroupAction, x: &Vector, pairs: &[(f64, f64)]) -> f64 {
    pairs
        .iter()
        .map(|&(a, b)| (group.act(&[a], &group.act(&[b], x)) - group.act(&[a + b], x)).norm() / x.norm())
        .fold(0.0, f64::max)
}

/// Largest relative deviation between the generators and a central difference
/// of the action at `α = 0`.
pub fn generator_defect(group: &dyn GroupAction, x: &Vector, h: f64) -> f64 {
    let gens = group.generators(x);
    let l = group.dim();
    (0..l)
        .map(|j| {
            let mut ap = vec![0.0; l];
            let mut am = vec![0.0; l];
            ap[j] = h;
            am[j] = -h;
            let fd = (group.act(&ap, x) - group.act(&am, x)) / (2.0 * h);
            (fd - &gens[j]).norm() / gens[j].norm().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Planar rotation of a single point, without a closed-form alignment.
    struct PlaneRotation;

    impl GroupAction for PlaneRotation {
        fn dim(&self) -> usize {
            1
        }
        fn act(&self, alpha: &[f64], x: &Vector) -> Vector {
            let (s, c) = alpha[0].sin_cos();
            Vector::from_vec(vec![c * x[0] - s * x[1], s * x[0] + c * x[1]])
        }
        fn generators(&self, x: &Vector) -> Vec<Vector> {
            vec![Vector::from_vec(vec![-x[1], x[0]])]
        }
        fn period(&self) -> Option<f64> {
            Some(std::f64::consts::TAU)
        }
    }

    struct Unbounded;

    impl GroupAction for Unbounded {
        fn dim(&self) -> usize {
            1
        }
        fn act(&self, alpha: &[f64], x: &Vector) -> Vector {
            x.add_scalar(alpha[0])
        }
        fn generators(&self, x: &Vector) -> Vec<Vector> {
            vec![Vector::from_element(x.len(), 1.0)]
        }
    }

    #[test]
    fn golden_search_finds_rotation_angle() {
        let xref = Vector::from_vec(vec![1.0, 0.5]);
        for alpha in [0.3, -2.0, 3.0] {
            let x = PlaneRotation.act(&[alpha], &xref);
            let rep = align_to_orbit(&x, &xref, &PlaneRotation).unwrap();
            assert!((rep.alpha_star[0] - alpha).abs() < 1e-7, "{rep:?}");
            assert!(rep.orbital_distance <= 1e-7);
            assert!(rep.orbital_distance <= rep.raw_distance + 1e-12);
        }
    }

    #[test]
    fn search_without_period_fails() {
        let x = Vector::from_element(2, 1.0);
        assert!(matches!(align_to_orbit(&x, &x, &Unbounded), Err(Error::Search(_))));
    }

    #[test]
    fn alignment_needs_one_parameter() {
        let x = Vector::from_element(2, 1.0);
        assert!(align_to_orbit(&x, &x, &TrivialGroup).is_err());
    }

    #[test]
    fn prediction_of_generator_offset() {
        let xs = Vector::from_vec(vec![1.0, 2.0]);
        let g = PlaneRotation.generators(&xs).remove(0);
        let p = predict_limit(&(&xs + &g * 0.01), &xs, &PlaneRotation).unwrap();
        assert!((p[0] - 0.01).abs() < 1e-12);
        let orth = Vector::from_vec(vec![1.0, 2.0]) * 0.3;
        let p = predict_limit(&(&xs + orth), &xs, &PlaneRotation).unwrap();
        assert!(p[0].abs() < 1e-12);
    }

    #[test]
    fn orbit_report_json_shape() {
        let r = OrbitReport { alpha_star: vec![0.5], orbital_distance: 0.0, raw_distance: 1.25 };
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(text, r#"{"alpha_star":[0.5],"orbital_distance":0.0,"raw_distance":1.25}"#);
        let back: OrbitReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn rank_deficiency_detected() {
        let zero = Vector::zeros(2);
        assert!(predict_limit(&zero, &zero, &PlaneRotation).is_err());
    }

    #[test]
    fn trivial_group_kernel_check_is_zero() {
        let p = ProblemSpec::new(3, |x| Ok(x.clone()));
        assert_eq!(kernel_check(&p, &Vector::zeros(3), &TrivialGroup).unwrap(), 0.0);
        assert!(kernel_check(&p, &Vector::from_element(3, 1.0), &TrivialGroup).is_err());
    }

    #[test]
    fn group_laws_for_plane_rotation() {
        let x = Vector::from_vec(vec![0.4, -1.2]);
        assert!(composition_defect(&PlaneRotation, &x, &[(0.3, 1.1), (-2.0, 0.7)]) < 1e-14);
        assert!(generator_defect(&PlaneRotation, &x, 1e-5) < 1e-8);
    }
}
