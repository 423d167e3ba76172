//! Outer iteration drivers (fixed point, Petviashvili, Newton–Krylov), the
//! problem description they consume, iteration traces and spectrum reports.

pub mod config;
pub mod drivers;
pub mod problem;
pub mod spectrum;
pub mod trace;

pub use config::{InnerSolver, SolverConfig};
pub use drivers::{fixed_point_solve, newton_solve, petviashvili_solve};
pub use problem::{HomogeneousSplit, ProblemSpec};
pub use spectrum::{convergence_ratios, fixed_point_spectrum, iteration_matrix_spectrum};
pub use trace::{InnerSolve, IterationTrace, SolveOutcome, Status, TraceRow};
