use std::collections::{BTreeMap, BTreeSet};

use super::select::{improvement_target, select_groups};
use super::{DirectConfig, DirectError, DirectResult, OrdF64, StopRule};
use crate::interval::Interval;

#[derive(Debug, Clone, Copy)]
struct Cell {
    center: f64,
    depth: u32,
    value: f64,
}

/// Search state of one 1-D DIRECT run. Cells are grouped by trisection
/// depth; within a depth they are ordered by `(value, seq)` so the group
/// representative is the lowest value, earliest created.
pub(crate) struct Direct1d<F> {
    objective: F,
    width: f64,
    config: DirectConfig,
    cells: Vec<Cell>,
    groups: BTreeMap<u32, BTreeSet<(OrdF64, usize)>>,
    best: (f64, f64),
    evals: usize,
}

impl<F: FnMut(f64) -> f64> Direct1d<F> {
    pub(crate) fn new(objective: F, domain: Interval, config: DirectConfig) -> Result<Self, DirectError> {
        config.validate()?;
        if !(domain.width() > 0.0) || !domain.width().is_finite() {
            return Err(DirectError::EmptyDomain);
        }
        let mut s = Self {
            objective,
            width: domain.width(),
            config,
            cells: Vec::new(),
            groups: BTreeMap::new(),
            best: (0.0, f64::INFINITY),
            evals: 0,
        };
        let c = domain.mid();
        let v = s.eval(c)?;
        s.best = (c, v);
        s.insert(Cell { center: c, depth: 0, value: v });
        Ok(s)
    }

    fn eval(&mut self, x: f64) -> Result<f64, DirectError> {
        let v = (self.objective)(x);
        self.evals += 1;
        if !v.is_finite() {
            return Err(DirectError::NonFiniteObjective { at: vec![x] });
        }
        Ok(v)
    }

    fn insert(&mut self, cell: Cell) {
        let seq = self.cells.len();
        self.groups
            .entry(cell.depth)
            .or_default()
            .insert((OrdF64(cell.value), seq));
        self.cells.push(cell);
    }

    #[inline]
    fn cell_length(&self, depth: u32) -> f64 {
        self.width / 3f64.powi(depth as i32)
    }

    /// Representatives of the potentially-optimal groups, widest first.
    fn selection(&self) -> Vec<usize> {
        // Ascending half-width means descending depth.
        let reps: Vec<(u32, usize, f64)> = self
            .groups
            .iter()
            .rev()
            .filter_map(|(&d, set)| set.first().map(|&(v, seq)| (d, seq, v.0)))
            .collect();
        let points: Vec<(f64, f64)> = reps
            .iter()
            .map(|&(d, _, v)| (0.5 * self.cell_length(d), v))
            .collect();
        let mask = select_groups(&points, improvement_target(self.best.1, self.config.tolerance_phi));
        reps.iter()
            .zip(mask)
            .rev()
            .filter_map(|(&(_, seq, _), keep)| keep.then_some(seq))
            .collect()
    }

    /// Trisects the cell `seq`; returns the new sub-interval length.
    fn divide(&mut self, seq: usize) -> Result<f64, DirectError> {
        let cell = self.cells[seq];
        if let Some(set) = self.groups.get_mut(&cell.depth) {
            set.remove(&(OrdF64(cell.value), seq));
            if set.is_empty() {
                self.groups.remove(&cell.depth);
            }
        }
        let sub = self.cell_length(cell.depth + 1);
        let left = cell.center - sub;
        let right = cell.center + sub;
        let fl = self.eval(left)?;
        let fr = self.eval(right)?;
        for (x, v) in [(left, fl), (right, fr)] {
            if v < self.best.1 {
                self.best = (x, v);
            }
        }
        let depth = cell.depth + 1;
        let live = sub >= self.config.min_resolution;
        for (center, value) in [(left, fl), (cell.center, cell.value), (right, fr)] {
            let c = Cell { center, depth, value };
            if live {
                self.insert(c);
            } else {
                self.cells.push(c);
            }
        }
        Ok(sub)
    }

    /// Runs until the resolution stop or the evaluation budget.
    pub(crate) fn run(mut self) -> Result<DirectResult, DirectError> {
        loop {
            let selected = self.selection();
            if selected.is_empty() {
                return Ok(self.finish(true));
            }
            for seq in selected {
                if self.evals + 2 > self.config.max_evals {
                    return Ok(self.finish(false));
                }
                if self.divide(seq)? < self.config.min_resolution && self.config.stop == StopRule::WholeSolve {
                    return Ok(self.finish(true));
                }
            }
        }
    }

    fn finish(self, converged: bool) -> DirectResult {
        DirectResult {
            minimizer: vec![self.best.0],
            min_value: self.best.1,
            evals: self.evals,
            converged,
        }
    }

    /// Current undivided cells, live or retired, as `(lo, hi)` pairs.
    #[cfg(test)]
    pub(crate) fn live_cells(&self) -> Vec<(f64, f64)> {
        let mut divided = vec![false; self.cells.len()];
        // A cell is divided when a deeper cell shares its center.
        let deeper: std::collections::HashSet<(u64, u32)> =
            self.cells.iter().map(|c| (c.center.to_bits(), c.depth)).collect();
        for (k, c) in self.cells.iter().enumerate() {
            divided[k] = deeper.contains(&(c.center.to_bits(), c.depth + 1));
        }
        (0..self.cells.len())
            .filter(|&seq| !divided[seq])
            .map(|seq| {
                let c = self.cells[seq];
                let h = 0.5 * self.cell_length(c.depth);
                (c.center - h, c.center + h)
            })
            .collect()
    }

    #[cfg(test)]
    pub(crate) fn step(&mut self) -> Result<bool, DirectError> {
        let selected = self.selection();
        for &seq in &selected {
            self.divide(seq)?;
        }
        Ok(!selected.is_empty())
    }

    #[cfg(test)]
    pub(crate) fn incumbent(&self) -> f64 {
        self.best.1
    }
}

/// Minimizes a function of one variable over `domain`.
pub fn minimize_1d<F>(objective: F, domain: Interval, config: &DirectConfig) -> Result<DirectResult, DirectError>
where
    F: FnMut(f64) -> f64,
{
    Direct1d::new(objective, domain, *config)?.run()
}
