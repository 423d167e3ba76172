//! Property tests for structural invariants of the operators, solvers and
//! both benchmark problems.

use std::f64::consts::PI;

use orbitfix_core::boussinesq::{exact_profile, translation_action, BsParams, BsProblem, WavePair};
use orbitfix_core::nbody::{
    build_nbody, fixed_point_jacobian, fixed_point_map, polygon_solution, rotation_action, NBodyConfig,
};
use orbitfix_core::numlin::{dense_eigenvalues, minres, pcg, DenseOperator, IdentityOperator, LinearOperator};
use orbitfix_core::symmetry::{align_to_orbit, GroupAction};
use orbitfix_core::{Matrix, Vector};
use proptest::prelude::*;

fn vec_strategy(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vector> {
    prop::collection::vec(lo..hi, n).prop_map(Vector::from_vec)
}

fn spd_strategy(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-1.0..1.0f64, n * n).prop_map(move |v| {
        let b = Matrix::from_vec(n, n, v);
        &b * b.transpose() + Matrix::identity(n, n) * (n as f64)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn krylov_solvers_match_dense_solve(a in spd_strategy(12), b in vec_strategy(12, -1.0, 1.0)) {
        prop_assume!(b.norm() > 1e-3);
        let exact = a.clone().lu().solve(&b).unwrap();
        let op = DenseOperator::new(a);
        let (xc, sc) = pcg(&op, &b, &IdentityOperator(12), 1e-12, 200).unwrap();
        let (xm, sm) = minres(&op, &b, 1e-12, 200, None).unwrap();
        prop_assert!(sc.converged(1e-10) && sm.converged(1e-10));
        prop_assert!((xc - &exact).norm() <= 1e-8 * exact.norm());
        prop_assert!((xm - &exact).norm() <= 1e-8 * exact.norm());
    }

    #[test]
    fn nbody_nonlinearity_is_homogeneous(x in vec_strategy(6, -2.0, 2.0), t in 0.2..5.0f64, m0 in 0.0..10.0f64) {
        let problem = build_nbody(&NBodyConfig::benchmark(3, m0).unwrap()).unwrap();
        let split = problem.split().unwrap();
        let (Ok(base), Ok(scaled)) = (split.nonlinear(&x), split.nonlinear(&(&x * t))) else {
            return Ok(());
        };
        prop_assert!((scaled - base.clone() * t.powf(split.degree)).norm() <= 1e-10 * base.norm().max(1e-300));
    }

    #[test]
    fn nbody_map_is_rotation_equivariant(x in vec_strategy(6, -2.0, 2.0), alpha in -PI..PI, m0 in 0.0..10.0f64) {
        let cfg = NBodyConfig::benchmark(3, m0).unwrap();
        let rot = rotation_action();
        let Ok(g) = fixed_point_map(&cfg, &x) else { return Ok(()) };
        let lhs = fixed_point_map(&cfg, &rot.act(&[alpha], &x)).unwrap();
        prop_assert!((lhs - rot.act(&[alpha], &g)).norm() <= 1e-10 * g.norm());
    }

    #[test]
    fn stabilizing_factor_is_one_on_the_orbit(alpha in -PI..PI, n in 2usize..6, m0 in 0.0..10.0f64) {
        let problem = build_nbody(&NBodyConfig::benchmark(n, m0).unwrap()).unwrap();
        let q = rotation_action().act(&[alpha], &polygon_solution(n).unwrap());
        prop_assert!(problem.residual(&q).unwrap().norm() <= 1e-10);
        let s = problem.split().unwrap().stabilizing_factor(&q).unwrap();
        prop_assert!((s - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn iteration_spectrum_is_constant_along_the_orbit(alpha in -PI..PI, m0 in 0.0..10.0f64) {
        let cfg = NBodyConfig::benchmark(3, m0).unwrap();
        let q = polygon_solution(3).unwrap();
        let spectrum = |x: &Vector| dense_eigenvalues(&fixed_point_jacobian(&cfg, x).unwrap()).unwrap();
        let a = spectrum(&q);
        let b = spectrum(&rotation_action().act(&[alpha], &q));
        for (za, zb) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!((za - zb).norm() <= 1e-8, "{za} vs {zb}");
        }
    }

    #[test]
    fn alignment_recovers_the_rotation(alpha in -3.0..3.0f64) {
        let q = polygon_solution(3).unwrap();
        let rep = align_to_orbit(&rotation_action().act(&[alpha], &q), &q, &rotation_action()).unwrap();
        let d = (rep.alpha_star[0] - alpha).rem_euclid(2.0 * PI);
        prop_assert!(d.min(2.0 * PI - d) <= 1e-7);
        prop_assert!(rep.orbital_distance <= 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn collocated_residual_commutes_with_grid_shifts(seed in vec_strategy(128, -0.5, 0.5), j in 0usize..64) {
        let p = BsParams::new(0.9, 1.3, 64, 12.0).unwrap();
        let bs = BsProblem::new(p).unwrap();
        let grp = translation_action(&p).unwrap();
        let alpha = j as f64 * p.spacing();
        let lhs = bs.residual(&grp.act(&[alpha], &seed)).unwrap();
        let rhs = grp.act(&[alpha], &bs.residual(&seed).unwrap());
        prop_assert!((lhs - rhs).amax() <= 1e-10);
    }

    #[test]
    fn jacobian_is_symmetric_and_linear(
        x in vec_strategy(128, -0.5, 0.5),
        v in vec_strategy(128, -1.0, 1.0),
        w in vec_strategy(128, -1.0, 1.0),
        t in -3.0..3.0f64,
    ) {
        let bs = BsProblem::new(BsParams::new(0.9, 1.3, 64, 12.0).unwrap()).unwrap();
        let op = bs.jacobian_operator(&x).unwrap();
        let scale = op.apply(&v).norm() * w.norm() + op.apply(&w).norm() * v.norm();
        prop_assert!((op.apply(&v).dot(&w) - v.dot(&op.apply(&w))).abs() <= 1e-11 * scale);
        let combo = op.apply(&(&v + &w * t)) - (op.apply(&v) + op.apply(&w) * t);
        prop_assert!(combo.norm() <= 1e-11 * scale.max(1.0));
    }

    #[test]
    fn exact_wave_translates_are_solutions(x0 in -5.0..5.0f64) {
        let prof = exact_profile(0.9, 512, 30.0, x0).unwrap();
        let bs = BsProblem::new(BsParams::exact(0.9, 512, 30.0).unwrap()).unwrap();
        let res = bs.residual(&prof.wave.stack()).unwrap();
        prop_assert!(res.amax() <= 1e-9);
        prop_assert!(WavePair::unstack(&prof.wave.stack()).unwrap() == prof.wave);
    }
}
