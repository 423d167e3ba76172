//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbitfix_core::solvers::{InnerSolver, SolverConfig};
use serde::Serialize;

use crate::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "orbitfix", version, about = "Solvers for algebraic systems with continuous symmetries")]
pub struct Cli {
    #[command(subcommand)]
    pub problem: Problem,
}

#[derive(Debug, Subcommand)]
pub enum Problem {
    /// Planar N-body polygon configurations with rotational symmetry.
    Nbody {
        #[command(subcommand)]
        action: Action<NbodyArgs>,
    },
    /// Bona-Smith solitary waves with translational symmetry.
    Bs {
        #[command(subcommand)]
        action: Action<BsArgs>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Action<A: Args> {
    /// Run one solve from a perturbed start.
    Solve(A),
    /// Dense spectrum of the iteration matrix or Jacobian at the known solution.
    Spectrum(A),
    /// Solve and report the distance to the solution orbit.
    Orbit(A),
    /// Converged group parameter against the perturbation size.
    ShiftTable(A),
    /// Time evolution of a computed wave.
    Propagate(A),
}

impl<A: Args> Action<A> {
    pub fn name(&self) -> &'static str {
        match self {
            Action::Solve(_) => "solve",
            Action::Spectrum(_) => "spectrum",
            Action::Orbit(_) => "orbit",
            Action::ShiftTable(_) => "shift-table",
            Action::Propagate(_) => "propagate",
        }
    }

    pub fn args(&self) -> &A {
        match self {
            Action::Solve(a) | Action::Spectrum(a) | Action::Orbit(a) | Action::ShiftTable(a) | Action::Propagate(a) => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InnerChoice {
    Pcg,
    Minres,
}

/// Overrides applied on top of the problem's default solver settings.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SolverArgs {
    /// Residual tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Maximum number of outer iterations.
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Exponent of the stabilizing factor.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Shift of the preconditioner.
    #[arg(long)]
    pub precond_s: Option<f64>,
    #[arg(long, value_enum)]
    pub inner_solver: Option<InnerChoice>,
    #[arg(long)]
    pub inner_tol: Option<f64>,
    #[arg(long)]
    pub inner_max_iter: Option<usize>,
    /// Precondition MINRES steps as well as PCG steps.
    #[arg(long)]
    pub precond_minres: bool,
    /// Stop once the residual has not improved for this many iterations.
    #[arg(long)]
    pub stall_window: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Seed recorded with the run for randomized probes.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SolverArgs {
    pub fn config(&self, base: SolverConfig) -> CliResult<SolverConfig> {
        let mut cfg = base;
        if let Some(v) = self.tol {
            cfg.tol_residual = v;
        }
        if let Some(v) = self.max_iter {
            cfg.max_outer = v;
        }
        if let Some(v) = self.gamma {
            cfg.gamma = v;
        }
        if let Some(v) = self.precond_s {
            cfg.precond_s = v;
        }
        if let Some(v) = self.inner_solver {
            cfg.inner_solver = match v {
                InnerChoice::Pcg => InnerSolver::Pcg,
                InnerChoice::Minres => InnerSolver::Minres,
            };
        }
        if let Some(v) = self.inner_tol {
            cfg.inner_tol = v;
        }
        if let Some(v) = self.inner_max_iter {
            cfg.inner_maxit = v;
        }
        if self.precond_minres {
            cfg.minres_preconditioned = true;
        }
        if self.stall_window.is_some() {
            cfg.stall_window = self.stall_window;
        }
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Central coefficient 1 and interaction coefficient m0.
    Benchmark,
    /// Central coefficient m0 and interaction coefficient 1.
    Stated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FixedPoint,
    Petviashvili,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NbodyPerturb {
    Ones,
    Generator,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NbodyArgs {
    /// Number of orbiting bodies.
    #[arg(long, default_value_t = 2)]
    pub bodies: usize,
    /// Central mass.
    #[arg(long, default_value_t = 10.0)]
    pub m0: f64,
    #[arg(long, value_enum, default_value = "benchmark")]
    pub model: Model,
    /// Iteration; defaults to petviashvili, except that `spectrum` shows the
    /// plain fixed-point matrix unless asked otherwise.
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long, value_enum)]
    pub perturb: Option<NbodyPerturb>,
    /// Perturbation size; a comma-separated list for `shift-table`.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BsPerturb {
    None,
    Gauss,
    GaussDerivative,
    GeneratorDiscrete,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BsArgs {
    /// Model parameter θ².
    #[arg(long, default_value_t = 0.9)]
    pub theta2: f64,
    /// Wave speed; defaults to the speed of the closed-form wave.
    #[arg(long)]
    pub cs: Option<f64>,
    /// Number of collocation points.
    #[arg(long, default_value_t = 1024)]
    pub grid_n: usize,
    /// Half-length L of the periodic domain [-L, L).
    #[arg(long, default_value_t = 50.0)]
    pub half_length: f64,
    #[arg(long, value_enum)]
    pub perturb: Option<BsPerturb>,
    /// Perturbation size; a comma-separated list for `shift-table`.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    /// Center of the gauss-derivative perturbation.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x0: f64,
    /// Time step for `propagate`.
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Final time for `propagate`.
    #[arg(long, default_value_t = 100.0)]
    pub t_end: f64,
    /// Snapshot times for `propagate`; defaults to the start and end.
    #[arg(long, value_delimiter = ',')]
    pub times: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

/// The single perturbation size of a one-solve command.
pub fn single_eps(eps: &[f64], default: f64) -> CliResult<f64> {
    match eps {
        [] => Ok(default),
        [e] => Ok(*e),
        _ => Err(CliError::Usage("--eps takes one value for this subcommand".into())),
    }
}
