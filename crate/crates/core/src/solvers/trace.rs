//! Iteration traces and solve outcomes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::format::{csv_text, g17, g17_opt};
use crate::numlin::KrylovStats;
use crate::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    ConvergedResidual,
    ConvergedReference,
    MaxIterations,
    Diverged,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::ConvergedResidual => "ConvergedResidual",
            Status::ConvergedReference => "ConvergedReference",
            Status::MaxIterations => "MaxIterations",
            Status::Diverged => "Diverged",
        }
    }

    pub fn is_converged(self) -> bool {
        matches!(self, Status::ConvergedResidual | Status::ConvergedReference)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub residual: f64,
    pub ref_error: Option<f64>,
    pub stab_factor: Option<f64>,
    /// Norm of the step that produced this iterate.
    pub step_norm: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    pub rows: Vec<TraceRow>,
}

impl IterationTrace {
    /// `stab_gap` is `|1 − s_n|`, empty when no stabilizing factor exists.
    pub const CSV_HEADER: [&'static str; 6] = ["n", "residual", "ref_error", "stab_factor", "stab_gap", "step_norm"];

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.residual).collect()
    }

    pub fn ref_errors(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.ref_error).collect()
    }

    pub fn to_csv(&self) -> String {
        csv_text(
            &Self::CSV_HEADER,
            self.rows.iter().map(|r| {
                vec![
                    r.n.to_string(),
                    g17(r.residual),
                    g17_opt(r.ref_error),
                    g17_opt(r.stab_factor),
                    g17_opt(r.stab_factor.map(|s| (1.0 - s).abs())),
                    g17_opt(r.step_norm),
                ]
            }),
        )
    }
}

/// Inner linear solve performed during one Newton step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSolve {
    pub outer: usize,
    pub stats: KrylovStats,
    /// PCG broke down and the step was redone with MINRES.
    pub fell_back: bool,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: Status,
    pub x_final: Vector,
    pub trace: IterationTrace,
    /// Human-readable notes on abnormal events.
    pub diagnostics: Vec<String>,
    pub inner: Vec<InnerSolve>,
}

impl SolveOutcome {
    pub fn final_residual(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |r| r.residual)
    }

    pub fn iterations(&self) -> usize {
        self.trace.last().map_or(0, |r| r.n)
    }

    pub fn fallback_count(&self) -> usize {
        self.inner.iter().filter(|s| s.fell_back).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_leaves_absent_columns_empty() {
        let t = IterationTrace {
            rows: vec![
                TraceRow { n: 0, residual: 0.5, ref_error: None, stab_factor: Some(1.0), step_norm: None },
                TraceRow { n: 1, residual: 0.25, ref_error: Some(0.1), stab_factor: None, step_norm: Some(2.0) },
            ],
        };
        assert_eq!(
            t.to_csv(),
            "n,residual,ref_error,stab_factor,stab_gap,step_norm\n0,0.5,,1,0,\n1,0.25,0.10000000000000001,,,2\n"
        );
    }

    #[test]
    fn status_strings_are_verbatim() {
        let names: Vec<String> = [
            Status::ConvergedResidual,
            Status::ConvergedReference,
            Status::MaxIterations,
            Status::Diverged,
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(names, ["ConvergedResidual", "ConvergedReference", "MaxIterations", "Diverged"]);
    }
}
