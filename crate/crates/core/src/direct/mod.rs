//! DIRECT (DIviding RECTangles) global optimization without a Lipschitz
//! constant: the 1-D inner solver used by the hybrid search and an n-D
//! version used as a standalone baseline.

mod n_d;
mod one_d;
mod select;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use n_d::minimize_nd;
pub use one_d::minimize_1d;
pub use select::potentially_optimal;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DirectConfig {
    pub tolerance_phi: f64,
    pub min_resolution: f64,
    pub max_evals: usize,
    pub stop: StopRule,
}

/// What happens when a division produces a sub-interval shorter than
/// `min_resolution`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopRule {
    /// The whole solve ends.
    #[default]
    WholeSolve,
    /// Only the new sub-intervals are retired from further division; the
    /// solve ends when nothing divisible is left or the budget runs out.
    RetireInterval,
}

impl Default for DirectConfig {
    fn default() -> Self {
        Self {
            tolerance_phi: 1e-4,
            min_resolution: 1e-4,
            max_evals: 100_000,
            stop: StopRule::WholeSolve,
        }
    }
}

impl DirectConfig {
    pub fn validate(&self) -> Result<(), DirectError> {
        if !(self.tolerance_phi >= 0.0) || !(self.min_resolution > 0.0) || self.max_evals < 3 {
            return Err(DirectError::InvalidConfig(*self));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectResult {
    pub minimizer: Vec<f64>,
    pub min_value: f64,
    pub evals: usize,
    /// False when the evaluation budget ran out before the resolution stop.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DirectError {
    #[error("objective returned a non-finite value at {at:?}")]
    NonFiniteObjective { at: Vec<f64> },
    #[error("search domain must have positive finite width")]
    EmptyDomain,
    #[error("invalid DIRECT configuration {0:?}")]
    InvalidConfig(DirectConfig),
}

/// Total order on finite objective values for the sorted group sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct OrdF64(pub f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}
