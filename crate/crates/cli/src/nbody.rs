//! N-body subcommands.

use std::time::Instant;

use orbitfix_core::format::{csv_text, g17};
use orbitfix_core::nbody::{
    build_nbody, fixed_point_jacobian, perturbed_start, petviashvili_jacobian, polygon_solution, rotation_action,
    NBodyConfig, Perturbation,
};
use orbitfix_core::numlin::dense_eigenvalues;
use orbitfix_core::solvers::{fixed_point_solve, petviashvili_solve, ProblemSpec, SolveOutcome, SolverConfig};
use orbitfix_core::symmetry::{align_to_orbit, predict_limit};
use orbitfix_core::Vector;
use serde_json::json;

use crate::args::{single_eps, Action, Method, Model, NbodyArgs, NbodyPerturb};
use crate::output::{spectrum_csv, OutDir, Summary};
use crate::{status_code, worst, CliError, CliResult};

fn bodies_csv(q: &Vector) -> String {
    csv_text(
        &["body", "x", "y"],
        (0..q.len() / 2).map(|j| vec![(j + 1).to_string(), g17(q[2 * j]), g17(q[2 * j + 1])]),
    )
}

fn perturbation(kind: NbodyPerturb) -> Perturbation {
    match kind {
        NbodyPerturb::Ones => Perturbation::Ones,
        NbodyPerturb::Generator => Perturbation::Generator,
    }
}

fn solve(
    method: Method,
    problem: &ProblemSpec,
    x0: &Vector,
    cfg: &SolverConfig,
    reference: &Vector,
) -> CliResult<SolveOutcome> {
    Ok(match method {
        Method::FixedPoint => fixed_point_solve(problem, x0, cfg, Some(reference))?,
        Method::Petviashvili => petviashvili_solve(problem, x0, cfg, Some(reference))?,
    })
}

pub fn run(action: Action<NbodyArgs>, start: Instant) -> CliResult<u8> {
    let name = action.name();
    let args = action.args().clone();
    let model = match args.model {
        Model::Benchmark => NBodyConfig::benchmark(args.bodies, args.m0)?,
        Model::Stated => NBodyConfig::new(args.bodies, args.m0)?,
    };
    let solver = args.solver.config(SolverConfig::nbody())?;
    let qstar = polygon_solution(args.bodies)?;
    let config = json!({ "args": &args, "solver": &solver });
    let mut summary = Summary::new("nbody", name, config);
    let problem = build_nbody(&model)?;
    let group = rotation_action();

    let out = match action {
        Action::Propagate(_) => {
            return Err(CliError::Usage("propagate is only defined for the bs problem".into()));
        }
        Action::Spectrum(_) => {
            let method = args.method.unwrap_or(Method::FixedPoint);
            let matrix = match method {
                Method::FixedPoint => fixed_point_jacobian(&model, &qstar)?,
                Method::Petviashvili => petviashvili_jacobian(&model, &qstar, solver.gamma)?,
            };
            let report = dense_eigenvalues(&matrix)?;
            let out = OutDir::create(&args.solver.out)?;
            out.write("spectrum.csv", &spectrum_csv(&report))?;
            out.write("bodies.csv", &bodies_csv(&qstar))?;
            summary.final_residual = Some(problem.residual(&qstar)?.norm());
            summary.spectrum = Some((&report).into());
            out
        }
        Action::Solve(_) | Action::Orbit(_) => {
            let orbit = matches!(action, Action::Orbit(_));
            let method = args.method.unwrap_or(Method::Petviashvili);
            let kind = args.perturb.unwrap_or(if orbit { NbodyPerturb::Generator } else { NbodyPerturb::Ones });
            let eps = single_eps(&args.eps, if orbit { 1.0 } else { 0.1 })?;
            let x0 = perturbed_start(&qstar, perturbation(kind), eps);
            let result = solve(method, &problem, &x0, &solver, &qstar)?;
            let matrix = match method {
                Method::FixedPoint => fixed_point_jacobian(&model, &qstar)?,
                Method::Petviashvili => petviashvili_jacobian(&model, &qstar, solver.gamma)?,
            };
            let report = dense_eigenvalues(&matrix)?;
            let out = OutDir::create(&args.solver.out)?;
            out.write("trace.csv", &result.trace.to_csv())?;
            out.write("bodies.csv", &bodies_csv(&result.x_final))?;
            out.write("spectrum.csv", &spectrum_csv(&report))?;
            summary.record(&result);
            summary.spectrum = Some((&report).into());
            if result.x_final.iter().all(|v| v.is_finite()) {
                summary.orbit = Some(align_to_orbit(&result.x_final, &qstar, &group)?);
            }
            out
        }
        Action::ShiftTable(_) => {
            let method = args.method.unwrap_or(Method::Petviashvili);
            let kind = perturbation(args.perturb.unwrap_or(NbodyPerturb::Generator));
            let eps_list = if args.eps.is_empty() { vec![1e-1, 1e-2, 1e-3] } else { args.eps.clone() };
            let mut csv_rows = Vec::new();
            for eps in eps_list {
                let x0 = perturbed_start(&qstar, kind, eps);
                let result = solve(method, &problem, &x0, &solver, &qstar)?;
                summary.status = worst(summary.status, result.status);
                let predicted = predict_limit(&x0, &qstar, &group)?[0];
                let alpha = if result.x_final.iter().all(|v| v.is_finite()) {
                    Some(align_to_orbit(&result.x_final, &qstar, &group)?.alpha_star[0])
                } else {
                    None
                };
                csv_rows.push(vec![
                    g17(eps),
                    result.status.to_string(),
                    g17(result.final_residual()),
                    result.iterations().to_string(),
                    alpha.map(g17).unwrap_or_default(),
                    g17(predicted),
                ]);
                summary.rows.push(json!({
                    "eps": eps,
                    "status": result.status,
                    "final_residual": result.final_residual(),
                    "iterations": result.iterations(),
                    "alpha_star": alpha,
                    "predicted_alpha": predicted,
                }));
            }
            let out = OutDir::create(&args.solver.out)?;
            let header = ["eps", "status", "final_residual", "iterations", "alpha_star", "predicted_alpha"];
            out.write("shift_table.csv", &csv_text(&header, csv_rows))?;
            out
        }
    };
    let code = status_code(summary.status);
    out.summary(summary, start)?;
    Ok(code)
}
