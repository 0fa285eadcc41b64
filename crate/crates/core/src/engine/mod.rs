//! Global solvers behind one `Solver` trait, selected by name through a
//! registry.

mod consensus;
mod frontier;
mod hybrid;
mod inner;
mod standalone;
mod vanilla;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::direct::{DirectConfig, DirectError};
use crate::interval::IntervalBox;
use crate::objective::SeparableProblem;

pub use consensus::{bnb_maximize_cm, BnbConsensus};
pub use frontier::SearchEvent;
pub use hybrid::{gtm_lower_bound, gtm_minimize, gtm_minimize_observed, gtm_upper_bound, nested_bnb_minimize, HybridBnb};
pub use inner::{bnb_minimize_1d, BnbInner, DirectInner, InnerResult, InnerSolver};
pub use standalone::{direct_nd_minimize, StandaloneDirect};
pub use vanilla::{bnb_minimize_tl, VanillaBnb};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineConfig {
    pub epsilon: f64,
    pub max_nodes: usize,
    pub direct: DirectConfig,
    pub parallel_children: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-4,
            max_nodes: 1_000_000,
            direct: DirectConfig::default(),
            parallel_children: false,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if !(self.epsilon > 0.0) || self.max_nodes == 0 {
            return Err(EngineError::InvalidConfig(format!(
                "epsilon must be positive and max_nodes nonzero (got {}, {})",
                self.epsilon, self.max_nodes
            )));
        }
        self.direct.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    /// Truncated loss at `solution`, or the inlier count for consensus.
    pub objective: f64,
    pub certified_gap: f64,
    pub outer_iterations: usize,
    pub inner_evals: usize,
    pub wall_ms: f64,
    pub converged: bool,
    pub solver_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Direct(#[from] DirectError),
    #[error("invalid engine configuration: {0}")]
    InvalidConfig(String),
    #[error("threshold xi must be positive and finite, got {0}")]
    InvalidThreshold(f64),
    #[error("solver needs at least {needed} unknowns, problem has {got}")]
    DimensionTooSmall { needed: usize, got: usize },
    #[error("unknown solver '{0}'")]
    UnknownSolver(String),
}

/// A global solver for a separable truncated-loss (or consensus) problem.
pub trait Solver: Send + Sync {
    fn id(&self) -> &'static str;
    fn solve(&self, problem: &dyn SeparableProblem, xi: f64, config: &EngineConfig) -> Result<SolveReport, EngineError>;
}

/// Name-keyed collection of solvers.
#[derive(Clone, Default)]
pub struct SolverRegistry {
    solvers: BTreeMap<&'static str, Arc<dyn Solver>>,
}

impl SolverRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// `gtm`, `bnb-tl`, `nested-bnb-tl`, `direct-nd`, `bnb-cm`.
    pub fn standard() -> Self {
        let mut r = Self::new();
        r.register(Arc::new(HybridBnb::gtm()));
        r.register(Arc::new(VanillaBnb));
        r.register(Arc::new(HybridBnb::nested()));
        r.register(Arc::new(StandaloneDirect));
        r.register(Arc::new(BnbConsensus));
        r
    }

    pub fn register(&mut self, solver: Arc<dyn Solver>) {
        self.solvers.insert(solver.id(), solver);
    }

    pub fn get(&self, id: &str) -> Result<Arc<dyn Solver>, EngineError> {
        self.solvers
            .get(id)
            .cloned()
            .ok_or_else(|| EngineError::UnknownSolver(id.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.solvers.keys().copied()
    }
}

pub(crate) fn check_inputs(problem: &dyn SeparableProblem, xi: f64, config: &EngineConfig, needed: usize) -> Result<(), EngineError> {
    config.validate()?;
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(EngineError::InvalidThreshold(xi));
    }
    if problem.dimension() < needed {
        return Err(EngineError::DimensionTooSmall { needed, got: problem.dimension() });
    }
    Ok(())
}

/// The search box over `v2..n`.
pub(crate) fn tail_box(problem: &dyn SeparableProblem) -> IntervalBox {
    problem.domain().tail()
}
