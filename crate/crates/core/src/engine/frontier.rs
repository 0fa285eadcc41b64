//! Best-first branch-and-bound loop shared by every tree-search solver.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::{EngineConfig, EngineError};
use crate::interval::IntervalBox;

/// Bounds over the region a search box stands for.
pub(crate) trait Bounder: Sync {
    /// Lower bound and the number of inner evaluations spent.
    fn lower(&self, b: &IntervalBox) -> Result<(f64, usize), EngineError>;
    /// A feasible value, the full point attaining it, and evaluations spent.
    fn upper(&self, b: &IntervalBox) -> Result<(f64, Vec<f64>, usize), EngineError>;
}

/// Notifications emitted while a search runs.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchEvent {
    /// A node left the queue and was split.
    Branched { region: IntervalBox, lower_bound: f64 },
    Queued { region: IntervalBox, lower_bound: f64 },
    Pruned { region: IntervalBox, lower_bound: f64 },
    Incumbent { value: f64 },
}

struct Node {
    region: IntervalBox,
    lower_bound: f64,
    max_width: f64,
    seq: usize,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    /// Max-heap order: lowest bound first, then widest, then oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .lower_bound
            .total_cmp(&self.lower_bound)
            .then(self.max_width.total_cmp(&other.max_width))
            .then(other.seq.cmp(&self.seq))
    }
}

pub(crate) struct Outcome {
    pub solution: Vec<f64>,
    pub value: f64,
    pub gap: f64,
    pub iterations: usize,
    pub evals: usize,
    pub converged: bool,
    pub reason: Option<String>,
}

pub(crate) fn best_first(
    root: IntervalBox,
    bounder: &dyn Bounder,
    epsilon: f64,
    config: &EngineConfig,
    mut observer: Option<&mut dyn FnMut(&SearchEvent)>,
) -> Result<Outcome, EngineError> {
    let mut emit = |e: SearchEvent| {
        if let Some(obs) = observer.as_mut() {
            obs(&e);
        }
    };
    let (mut best, mut solution, e_up) = bounder.upper(&root)?;
    let (root_lb, e_lo) = bounder.lower(&root)?;
    let mut evals = e_up + e_lo;
    emit(SearchEvent::Incumbent { value: best });

    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    emit(SearchEvent::Queued { region: root.clone(), lower_bound: root_lb });
    heap.push(Node { max_width: root.max_width(), region: root, lower_bound: root_lb, seq });
    let mut iterations = 0usize;

    loop {
        let Some(node) = heap.pop() else {
            return Ok(Outcome { solution, value: best, gap: 0.0, iterations, evals, converged: true, reason: None });
        };
        if best - node.lower_bound < epsilon {
            return Ok(Outcome {
                solution,
                value: best,
                gap: (best - node.lower_bound).max(0.0),
                iterations,
                evals,
                converged: true,
                reason: None,
            });
        }
        if iterations >= config.max_nodes {
            return Ok(Outcome {
                solution,
                value: best,
                gap: best - node.lower_bound,
                iterations,
                evals,
                converged: false,
                reason: Some(format!("node budget of {} exhausted", config.max_nodes)),
            });
        }
        iterations += 1;
        let children = node.region.bisect_all();
        emit(SearchEvent::Branched { region: node.region, lower_bound: node.lower_bound });

        // Child bounds can be computed up front in parallel; the replay below
        // makes the same prune/update decisions as the serial order.
        let precomputed: Option<Vec<_>> = if config.parallel_children {
            Some(
                children
                    .par_iter()
                    .map(|c| Ok((bounder.lower(c)?, bounder.upper(c)?)))
                    .collect::<Result<Vec<_>, EngineError>>()?,
            )
        } else {
            None
        };
        for (k, child) in children.into_iter().enumerate() {
            let (raw_lb, e) = match &precomputed {
                Some(p) => p[k].0,
                None => bounder.lower(&child)?,
            };
            evals += e;
            let lb = raw_lb.max(node.lower_bound);
            if lb >= best {
                emit(SearchEvent::Pruned { region: child, lower_bound: lb });
                continue;
            }
            let (ub, point, e) = match &precomputed {
                Some(p) => p[k].1.clone(),
                None => bounder.upper(&child)?,
            };
            evals += e;
            if ub < best {
                best = ub;
                solution = point;
                emit(SearchEvent::Incumbent { value: best });
            }
            seq += 1;
            emit(SearchEvent::Queued { region: child.clone(), lower_bound: lb });
            heap.push(Node { max_width: child.max_width(), region: child, lower_bound: lb, seq });
        }
    }
}
