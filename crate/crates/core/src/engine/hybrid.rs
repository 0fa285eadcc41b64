//! Branch-and-bound over `v2..n` with one-dimensional bounding problems in
//! `v1`. With DIRECT as the inner solver this is GTM; with a 1-D interval
//! branch-and-bound it is the nested baseline.

use std::time::Instant;

use super::frontier::{best_first, Bounder, SearchEvent};
use super::inner::{BnbInner, DirectInner, InnerSolver};
use super::{check_inputs, tail_box, EngineConfig, EngineError, SolveReport, Solver};
use crate::direct::DirectConfig;
use crate::interval::{Interval, IntervalBox};
use crate::objective::{SeparableProblem, SliceObjective, Underestimator};

pub struct HybridBnb {
    id: &'static str,
    inner: Box<dyn InnerSolver>,
}

impl HybridBnb {
    pub fn gtm() -> Self {
        Self { id: "gtm", inner: Box::new(DirectInner) }
    }

    pub fn nested() -> Self {
        Self { id: "nested-bnb-tl", inner: Box::new(BnbInner) }
    }

    pub fn with_inner(id: &'static str, inner: Box<dyn InnerSolver>) -> Self {
        Self { id, inner }
    }

    pub fn solve_observed(
        &self,
        problem: &dyn SeparableProblem,
        xi: f64,
        config: &EngineConfig,
        observer: Option<&mut dyn FnMut(&SearchEvent)>,
    ) -> Result<SolveReport, EngineError> {
        check_inputs(problem, xi, config, 2)?;
        let start = Instant::now();
        let bounder = HybridBounder { problem, xi, config, inner: self.inner.as_ref(), v1: problem.domain().head() };
        let out = best_first(tail_box(problem), &bounder, config.epsilon, config, observer)?;
        Ok(SolveReport {
            solution: out.solution,
            objective: out.value,
            certified_gap: out.gap,
            outer_iterations: out.iterations,
            inner_evals: out.evals,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
            converged: out.converged,
            solver_id: self.id.to_string(),
            reason: out.reason,
        })
    }
}

impl Solver for HybridBnb {
    fn id(&self) -> &'static str {
        self.id
    }

    fn solve(&self, problem: &dyn SeparableProblem, xi: f64, config: &EngineConfig) -> Result<SolveReport, EngineError> {
        self.solve_observed(problem, xi, config, None)
    }
}

struct HybridBounder<'a> {
    problem: &'a dyn SeparableProblem,
    xi: f64,
    config: &'a EngineConfig,
    inner: &'a dyn InnerSolver,
    v1: Interval,
}

impl Bounder for HybridBounder<'_> {
    fn lower(&self, b: &IntervalBox) -> Result<(f64, usize), EngineError> {
        let mut f = Underestimator::new(self.problem, b.dims(), self.xi);
        let r = self.inner.minimize(&mut f, self.v1, self.config)?;
        Ok((r.value, r.evals))
    }

    fn upper(&self, b: &IntervalBox) -> Result<(f64, Vec<f64>, usize), EngineError> {
        let center = b.center();
        let mut f = SliceObjective::new(self.problem, &center, self.xi);
        let r = self.inner.minimize(&mut f, self.v1, self.config)?;
        let mut point = Vec::with_capacity(center.len() + 1);
        point.push(r.minimizer);
        point.extend_from_slice(&center);
        Ok((r.value, point, r.evals))
    }
}

pub fn gtm_minimize(problem: &dyn SeparableProblem, xi: f64, config: &EngineConfig) -> Result<SolveReport, EngineError> {
    HybridBnb::gtm().solve(problem, xi, config)
}

/// GTM with a callback for every queue event.
pub fn gtm_minimize_observed(
    problem: &dyn SeparableProblem,
    xi: f64,
    config: &EngineConfig,
    observer: &mut dyn FnMut(&SearchEvent),
) -> Result<SolveReport, EngineError> {
    HybridBnb::gtm().solve_observed(problem, xi, config, Some(observer))
}

pub fn nested_bnb_minimize(problem: &dyn SeparableProblem, xi: f64, config: &EngineConfig) -> Result<SolveReport, EngineError> {
    HybridBnb::nested().solve(problem, xi, config)
}

/// Minimum over `v1` of the objective with `v2..n` fixed at the center of
/// `sub_box`; returns `(value, v1)`.
pub fn gtm_upper_bound(
    problem: &dyn SeparableProblem,
    sub_box: &IntervalBox,
    xi: f64,
    direct: &DirectConfig,
) -> Result<(f64, f64), EngineError> {
    let config = EngineConfig { direct: *direct, ..EngineConfig::default() };
    let mut f = SliceObjective::new(problem, &sub_box.center(), xi);
    let r = DirectInner.minimize(&mut f, problem.domain().head(), &config)?;
    Ok((r.value, r.minimizer))
}

/// Minimum over `v1` of the underestimator for `sub_box`.
pub fn gtm_lower_bound(problem: &dyn SeparableProblem, sub_box: &IntervalBox, xi: f64, direct: &DirectConfig) -> Result<f64, EngineError> {
    let config = EngineConfig { direct: *direct, ..EngineConfig::default() };
    let mut f = Underestimator::new(problem, sub_box.dims(), xi);
    Ok(DirectInner.minimize(&mut f, problem.domain().head(), &config)?.value)
}
