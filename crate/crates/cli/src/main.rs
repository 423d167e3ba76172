//! `orbitfix`: runs the fixed-point, Petviashvili and Newton experiments on
//! the N-body and Bona-Smith problems and writes CSV/JSON artifacts.
//!
//! Exit codes: 0 success, 1 usage or runtime error, 2 not converged
//! (`MaxIterations`), 3 diverged.

mod args;
mod bs;
mod nbody;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use orbitfix_core::solvers::Status;

use args::{Cli, Problem};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] orbitfix_core::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = Result<T, CliError>;

/// Exit code for a run whose worst outcome is `status`.
pub fn status_code(status: Option<Status>) -> u8 {
    match status {
        None | Some(Status::ConvergedResidual | Status::ConvergedReference) => 0,
        Some(Status::MaxIterations) => 2,
        Some(Status::Diverged) => 3,
    }
}

/// The outcome ranking used when several solves share one summary.
pub fn worst(a: Option<Status>, b: Status) -> Option<Status> {
    let rank = |s: Status| status_code(Some(s));
    match a {
        Some(prev) if rank(prev) >= rank(b) => Some(prev),
        _ => Some(b),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let result = match cli.problem {
        Problem::Nbody { action } => nbody::run(action, start),
        Problem::Bs { action } => bs::run(action, start),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("orbitfix: {e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_status_wins() {
        let s = worst(None, Status::ConvergedResidual);
        let s = worst(s, Status::Diverged);
        let s = worst(s, Status::MaxIterations);
        assert_eq!(s, Some(Status::Diverged));
        assert_eq!(status_code(s), 3);
        assert_eq!(status_code(None), 0);
        assert_eq!(status_code(Some(Status::ConvergedReference)), 0);
    }
}
