//! Plain n-dimensional branch-and-bound on the truncated loss.

use std::time::Instant;

use super::frontier::{best_first, Bounder};
use super::{check_inputs, EngineConfig, EngineError, SolveReport, Solver};
use crate::interval::IntervalBox;
use crate::objective::{box_lower_bound, tl_objective, SeparableProblem};

/// Upper bound: objective at the box center. Lower bound: truncated sum of
/// per-datum residual lower bounds from the `h` and `g` ranges.
#[derive(Debug, Clone, Copy, Default)]
pub struct VanillaBnb;

struct TlBounder<'a> {
    problem: &'a dyn SeparableProblem,
    xi: f64,
}

impl Bounder for TlBounder<'_> {
    fn lower(&self, b: &IntervalBox) -> Result<(f64, usize), EngineError> {
        Ok((box_lower_bound(self.problem, b, self.xi), 1))
    }

    fn upper(&self, b: &IntervalBox) -> Result<(f64, Vec<f64>, usize), EngineError> {
        let c = b.center();
        Ok((tl_objective(self.problem, &c, self.xi), c, 1))
    }
}

impl Solver for VanillaBnb {
    fn id(&self) -> &'static str {
        "bnb-tl"
    }

    fn solve(&self, problem: &dyn SeparableProblem, xi: f64, config: &EngineConfig) -> Result<SolveReport, EngineError> {
        check_inputs(problem, xi, config, 1)?;
        let start = Instant::now();
        let out = best_first(problem.domain().clone(), &TlBounder { problem, xi }, config.epsilon, config, None)?;
        Ok(SolveReport {
            solution: out.solution,
            objective: out.value,
            certified_gap: out.gap,
            outer_iterations: out.iterations,
            inner_evals: out.evals,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
            converged: out.converged,
            solver_id: self.id().to_string(),
            reason: out.reason,
        })
    }
}

pub fn bnb_minimize_tl(problem: &dyn SeparableProblem, xi: f64, config: &EngineConfig) -> Result<SolveReport, EngineError> {
    VanillaBnb.solve(problem, xi, config)
}
