//! Bona-Smith subcommands.

use std::time::Instant;

use orbitfix_core::boussinesq::{
    build_bs_problem, exact_profile, propagate_at, seeded_wave, translation_action, wave_centers, wrap_periodic,
    BsParams, BsProblem, ExactParameters, Seed, Snapshot, WavePair,
};
use orbitfix_core::format::{csv_text, g17};
use orbitfix_core::numlin::{dense_eigenvalues, FourierGrid};
use orbitfix_core::solvers::{newton_solve, SolveOutcome, SolverConfig, Status};
use orbitfix_core::symmetry::align_to_orbit;
use serde_json::json;

use crate::args::{single_eps, Action, BsArgs, BsPerturb};
use crate::output::{spectrum_csv, OutDir, Summary};
use crate::{status_code, worst, CliError, CliResult};

fn profile_csv(grid: &FourierGrid, w: &WavePair) -> String {
    let x = grid.points();
    csv_text(&["x", "eta", "u"], (0..w.len()).map(|j| vec![g17(x[j]), g17(w.eta[j]), g17(w.u[j])]))
}

fn snapshots_csv(grid: &FourierGrid, snaps: &[Snapshot]) -> String {
    let x = grid.points();
    let rows = snaps.iter().flat_map(|s| {
        let x = &x;
        (0..s.wave.len()).map(move |j| vec![g17(s.t), g17(x[j]), g17(s.wave.eta[j]), g17(s.wave.u[j])])
    });
    csv_text(&["t", "x", "eta", "u"], rows)
}

fn seed(kind: BsPerturb, eps: f64, x0: f64) -> Seed {
    match kind {
        BsPerturb::None => Seed::Unperturbed,
        BsPerturb::Gauss => Seed::Gauss { eps },
        BsPerturb::GaussDerivative => Seed::GaussDerivative { eps, x0 },
        BsPerturb::GeneratorDiscrete => Seed::GeneratorDiscrete { eps },
    }
}

fn finite(out: &SolveOutcome) -> bool {
    out.x_final.iter().all(|v| v.is_finite())
}

pub fn run(action: Action<BsArgs>, start: Instant) -> CliResult<u8> {
    let name = action.name();
    let args = action.args().clone();
    let exact = ExactParameters::new(args.theta2)
        .map_err(|e| CliError::Usage(format!("the seed wave needs a closed-form profile: {e}")))?;
    let cs = args.cs.unwrap_or(exact.cs);
    let params = BsParams::new(args.theta2, cs, args.grid_n, args.half_length)?;
    let solver = args.solver.config(SolverConfig::bona_smith())?;
    let base = exact_profile(args.theta2, args.grid_n, args.half_length, 0.0)?.wave;
    let reference = (cs == exact.cs).then(|| base.stack());
    let grid = params.grid()?;
    let problem = build_bs_problem(params)?;
    let group = translation_action(&params)?;
    let config = json!({ "args": &args, "solver": &solver, "params": &params });
    let mut summary = Summary::new("bs", name, config);

    let run_newton = |s: Seed| -> CliResult<SolveOutcome> {
        let x0 = seeded_wave(&base, &grid, s)?;
        Ok(newton_solve(&problem, &x0.stack(), &solver, reference.as_ref())?)
    };

    let mut code_override = None;
    let out = match action {
        Action::Spectrum(_) => {
            let bs = BsProblem::new(params)?;
            let x = base.stack();
            let report = dense_eigenvalues(&bs.jacobian_matrix(&x)?)?;
            let out = OutDir::create(&args.solver.out)?;
            out.write("spectrum.csv", &spectrum_csv(&report))?;
            out.write("profile.csv", &profile_csv(&grid, &base))?;
            summary.final_residual = Some(bs.residual(&x)?.norm());
            summary.spectrum = Some((&report).into());
            out
        }
        Action::Solve(_) | Action::Orbit(_) => {
            let orbit = matches!(action, Action::Orbit(_));
            let kind = args.perturb.unwrap_or(if orbit { BsPerturb::GeneratorDiscrete } else { BsPerturb::Gauss });
            let eps = single_eps(&args.eps, if orbit { 0.1 } else { 0.05 })?;
            let result = run_newton(seed(kind, eps, args.x0))?;
            let out = OutDir::create(&args.solver.out)?;
            out.write("trace.csv", &result.trace.to_csv())?;
            summary.record(&result);
            if finite(&result) {
                let w = WavePair::unstack(&result.x_final)?;
                out.write("profile.csv", &profile_csv(&grid, &w))?;
                summary.orbit = Some(align_to_orbit(&result.x_final, &base.stack(), &group)?);
                let centers = wave_centers(&w, args.half_length).ok();
                summary.extra = json!({
                    "centers": centers,
                    "pcg_fallbacks": result.fallback_count(),
                    "inner_iterations": result.inner.iter().map(|s| s.stats.iterations).sum::<usize>(),
                });
            }
            out
        }
        Action::ShiftTable(_) => {
            let kind = args.perturb.unwrap_or(BsPerturb::GeneratorDiscrete);
            let eps_list = if args.eps.is_empty() { vec![0.1, 0.05, 0.01, 0.005] } else { args.eps.clone() };
            let mut csv_rows = Vec::new();
            for eps in eps_list {
                let result = run_newton(seed(kind, eps, args.x0))?;
                summary.status = worst(summary.status, result.status);
                let centers = if finite(&result) {
                    wave_centers(&WavePair::unstack(&result.x_final)?, args.half_length).ok()
                } else {
                    None
                };
                csv_rows.push(vec![
                    g17(eps),
                    result.status.to_string(),
                    g17(result.final_residual()),
                    result.iterations().to_string(),
                    centers.map(|c| g17(c.eta)).unwrap_or_default(),
                    centers.map(|c| g17(c.u)).unwrap_or_default(),
                ]);
                summary.rows.push(json!({
                    "eps": eps,
                    "status": result.status,
                    "final_residual": result.final_residual(),
                    "iterations": result.iterations(),
                    "shift_eta": centers.map(|c| c.eta),
                    "shift_u": centers.map(|c| c.u),
                }));
            }
            let out = OutDir::create(&args.solver.out)?;
            let header = ["eps", "status", "final_residual", "iterations", "shift_eta", "shift_u"];
            out.write("shift_table.csv", &csv_text(&header, csv_rows))?;
            out
        }
        Action::Propagate(_) => {
            let w0 = if reference.is_some() && args.perturb.is_none() {
                base.clone()
            } else {
                let kind = args.perturb.unwrap_or(BsPerturb::None);
                let result = run_newton(seed(kind, single_eps(&args.eps, 0.0)?, args.x0))?;
                summary.record(&result);
                if !result.status.is_converged() {
                    let out = OutDir::create(&args.solver.out)?;
                    out.write("trace.csv", &result.trace.to_csv())?;
                    let code = status_code(summary.status);
                    out.summary(summary, start)?;
                    return Ok(code);
                }
                WavePair::unstack(&result.x_final)?
            };
            let times = if args.times.is_empty() { vec![0.0, args.t_end] } else { args.times.clone() };
            let run = propagate_at(&w0, &params, args.dt, &times)?;
            let out = OutDir::create(&args.solver.out)?;
            out.write("profile.csv", &snapshots_csv(&grid, &run.snapshots))?;
            let start_center = wave_centers(&w0, args.half_length).ok().map(|c| c.eta);
            let end = run.snapshots.last().filter(|_| run.aborted.is_none());
            let end_center = end.and_then(|s| wave_centers(&s.wave, args.half_length).ok()).map(|c| c.eta);
            let expected = start_center.zip(end).map(|(c0, s)| wrap_periodic(c0 + cs * s.t, args.half_length));
            summary.extra = json!({
                "steps": run.steps,
                "dt": run.dt,
                "aborted": run.aborted,
                "start_center": start_center,
                "end_center": end_center,
                "expected_end_center": expected,
            });
            if let Some(reason) = &run.aborted {
                summary.diagnostics.push(reason.clone());
                code_override = Some(status_code(Some(Status::Diverged)));
            }
            out
        }
    };
    let code = code_override.unwrap_or(status_code(summary.status));
    out.summary(summary, start)?;
    Ok(code)
}
