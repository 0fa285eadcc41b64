//! One-dimensional solvers for the bounding functions of the hybrid search.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{EngineConfig, EngineError};
use crate::direct::minimize_1d;
use crate::interval::Interval;
use crate::objective::BoundFunction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerResult {
    pub minimizer: f64,
    /// Smallest value found (attained at `minimizer`).
    pub value: f64,
    /// Certified lower bound of the minimum when the solver provides one,
    /// otherwise equal to `value`.
    pub lower: f64,
    pub evals: usize,
}

pub trait InnerSolver: Send + Sync {
    fn id(&self) -> &'static str;
    fn minimize(&self, f: &mut dyn BoundFunction, domain: Interval, config: &EngineConfig) -> Result<InnerResult, EngineError>;
}

/// DIRECT on the bounding function.
#[derive(Debug, Clone, Copy, Default)]
pub struct DirectInner;

impl InnerSolver for DirectInner {
    fn id(&self) -> &'static str {
        "direct"
    }

    fn minimize(&self, f: &mut dyn BoundFunction, domain: Interval, config: &EngineConfig) -> Result<InnerResult, EngineError> {
        if domain.width() == 0.0 {
            let v = f.eval(domain.lo());
            return Ok(InnerResult { minimizer: domain.lo(), value: v, lower: v, evals: 1 });
        }
        let r = minimize_1d(|x| f.eval(x), domain, &config.direct)?;
        Ok(InnerResult { minimizer: r.minimizer[0], value: r.min_value, lower: r.min_value, evals: r.evals })
    }
}

/// Interval branch-and-bound on the bounding function: midpoint values as
/// upper bounds, interval ranges as lower bounds, stopping at gap `epsilon`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BnbInner;

impl InnerSolver for BnbInner {
    fn id(&self) -> &'static str {
        "bnb"
    }

    fn minimize(&self, f: &mut dyn BoundFunction, domain: Interval, config: &EngineConfig) -> Result<InnerResult, EngineError> {
        Ok(bnb_minimize_1d(f, domain, config.epsilon, config.direct.max_evals))
    }
}

struct Piece {
    range: Interval,
    lower: f64,
    seq: usize,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        other.lower.total_cmp(&self.lower).then(other.seq.cmp(&self.seq))
    }
}

/// Best-first bisection search; evaluations count both point values and
/// interval bounds.
pub fn bnb_minimize_1d(f: &mut dyn BoundFunction, domain: Interval, epsilon: f64, max_evals: usize) -> InnerResult {
    let mut best_x = domain.mid();
    let mut best = f.eval(best_x);
    let root_lb = f.lower_bound_on(domain);
    let mut evals = 2;
    let mut heap = BinaryHeap::new();
    let mut seq = 0;
    heap.push(Piece { range: domain, lower: root_lb, seq });
    while let Some(p) = heap.pop() {
        if best - p.lower < epsilon || evals + 4 > max_evals || p.range.width() == 0.0 {
            return InnerResult { minimizer: best_x, value: best, lower: p.lower.min(best), evals };
        }
        let (a, b) = p.range.bisect();
        for half in [a, b] {
            let lb = f.lower_bound_on(half).max(p.lower);
            evals += 1;
            if lb >= best {
                continue;
            }
            let x = half.mid();
            let v = f.eval(x);
            evals += 1;
            if v < best {
                best = v;
                best_x = x;
            }
            seq += 1;
            heap.push(Piece { range: half, lower: lb, seq });
        }
    }
    InnerResult { minimizer: best_x, value: best, lower: best, evals }
}
