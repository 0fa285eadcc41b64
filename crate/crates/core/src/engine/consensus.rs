//! Plain n-dimensional branch-and-bound maximizing the inlier count.

use std::time::Instant;

use super::frontier::{best_first, Bounder};
use super::{check_inputs, EngineConfig, EngineError, SolveReport, Solver};
use crate::interval::IntervalBox;
use crate::objective::{box_residual_lower_bounds, cm_objective, SeparableProblem};

/// Runs on the negated count. Per box the count is at most the number of
/// residual ranges reaching below `xi` and at least the count at the center;
/// counts are integers, so the search stops once the two agree.
#[derive(Debug, Clone, Copy, Default)]
pub struct BnbConsensus;

struct CmBounder<'a> {
    problem: &'a dyn SeparableProblem,
    xi: f64,
}

impl Bounder for CmBounder<'_> {
    fn lower(&self, b: &IntervalBox) -> Result<(f64, usize), EngineError> {
        let possible = box_residual_lower_bounds(self.problem, b).into_iter().filter(|&r| r <= self.xi).count();
        Ok((-(possible as f64), 1))
    }

    fn upper(&self, b: &IntervalBox) -> Result<(f64, Vec<f64>, usize), EngineError> {
        let c = b.center();
        Ok((-(cm_objective(self.problem, &c, self.xi) as f64), c, 1))
    }
}

impl Solver for BnbConsensus {
    fn id(&self) -> &'static str {
        "bnb-cm"
    }

    fn solve(&self, problem: &dyn SeparableProblem, xi: f64, config: &EngineConfig) -> Result<SolveReport, EngineError> {
        check_inputs(problem, xi, config, 1)?;
        let start = Instant::now();
        let out = best_first(problem.domain().clone(), &CmBounder { problem, xi }, 1.0, config, None)?;
        Ok(SolveReport {
            solution: out.solution,
            objective: -out.value,
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

pub fn bnb_maximize_cm(problem: &dyn SeparableProblem, xi: f64, config: &EngineConfig) -> Result<SolveReport, EngineError> {
    BnbConsensus.solve(problem, xi, config)
}
