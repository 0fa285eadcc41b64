//! Truncated-loss and consensus objectives over separable residuals, plus
//! the one-dimensional bounding functions the hybrid search minimizes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{Interval, IntervalBox};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    /// Absolute value; only meaningful for one-component residuals.
    Abs,
    L2,
    Linf,
}

impl Norm {
    #[inline]
    pub fn apply(self, v: &[f64]) -> f64 {
        match self {
            Norm::Abs => v[0].abs(),
            Norm::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Norm::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObjectiveError {
    #[error("datum index {index} out of range for {len} data")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A residual family `r_i(v) = ||h_i(v1) + g_i(v2..n)||` with `W`-vector
/// valued `h_i`, `g_i`.
///
/// Output slices passed to the per-datum methods have length `W`; the
/// batched methods fill `M * W` entries, datum-major.
pub trait SeparableProblem: Send + Sync {
    fn name(&self) -> &'static str;
    fn dimension(&self) -> usize;
    fn codomain_width(&self) -> usize;
    fn norm(&self) -> Norm;
    fn len(&self) -> usize;
    fn domain(&self) -> &IntervalBox;

    fn h(&self, i: usize, v1: f64, out: &mut [f64]);
    fn g(&self, i: usize, rest: &[f64], out: &mut [f64]);
    /// Sound componentwise bounds of `g_i` over a box in `v2..n`.
    fn g_range(&self, i: usize, rest: &[Interval], lo: &mut [f64], hi: &mut [f64]);
    /// Sound componentwise bounds of `h_i` over an interval of `v1`.
    fn h_range(&self, i: usize, v1: Interval, lo: &mut [f64], hi: &mut [f64]);

    /// Known Lipschitz constant of the `h_i`, for diagnostics only.
    fn lipschitz_hint(&self) -> Option<f64> {
        None
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn h_all(&self, v1: f64, out: &mut [f64]) {
        let w = self.codomain_width();
        for (i, o) in out.chunks_exact_mut(w).enumerate() {
            self.h(i, v1, o);
        }
    }

    fn g_all(&self, rest: &[f64], out: &mut [f64]) {
        let w = self.codomain_width();
        for (i, o) in out.chunks_exact_mut(w).enumerate() {
            self.g(i, rest, o);
        }
    }

    fn g_range_all(&self, rest: &[Interval], lo: &mut [f64], hi: &mut [f64]) {
        let w = self.codomain_width();
        for (i, (l, h)) in lo.chunks_exact_mut(w).zip(hi.chunks_exact_mut(w)).enumerate() {
            self.g_range(i, rest, l, h);
        }
    }

    fn h_range_all(&self, v1: Interval, lo: &mut [f64], hi: &mut [f64]) {
        let w = self.codomain_width();
        for (i, (l, h)) in lo.chunks_exact_mut(w).zip(hi.chunks_exact_mut(w)).enumerate() {
            self.h_range(i, v1, l, h);
        }
    }
}

/// Untruncated residual of datum `i`.
pub fn residual(problem: &dyn SeparableProblem, i: usize, v: &[f64]) -> Result<f64, ObjectiveError> {
    check_point(problem, v)?;
    if i >= problem.len() {
        return Err(ObjectiveError::IndexOutOfRange { index: i, len: problem.len() });
    }
    let w = problem.codomain_width();
    let mut h = vec![0.0; w];
    let mut g = vec![0.0; w];
    problem.h(i, v[0], &mut h);
    problem.g(i, &v[1..], &mut g);
    for (a, b) in h.iter_mut().zip(&g) {
        *a += b;
    }
    Ok(problem.norm().apply(&h))
}

/// `min(r_i(v), xi)`.
pub fn truncated_residual(problem: &dyn SeparableProblem, i: usize, v: &[f64], xi: f64) -> Result<f64, ObjectiveError> {
    Ok(residual(problem, i, v)?.min(xi))
}

/// All residuals at `v`.
pub fn residuals(problem: &dyn SeparableProblem, v: &[f64]) -> Vec<f64> {
    let (h, g) = components(problem, v);
    let w = problem.codomain_width();
    let norm = problem.norm();
    let mut buf = vec![0.0; w];
    h.chunks_exact(w)
        .zip(g.chunks_exact(w))
        .map(|(hc, gc)| {
            for ((b, x), y) in buf.iter_mut().zip(hc).zip(gc) {
                *b = x + y;
            }
            norm.apply(&buf)
        })
        .collect()
}

/// Truncated-loss objective `sum_i min(r_i(v), xi)`.
pub fn tl_objective(problem: &dyn SeparableProblem, v: &[f64], xi: f64) -> f64 {
    let (h, g) = components(problem, v);
    truncated_sum(&h, &g, problem.codomain_width(), problem.norm(), xi)
}

/// Consensus objective: number of residuals at most `xi`.
pub fn cm_objective(problem: &dyn SeparableProblem, v: &[f64], xi: f64) -> usize {
    residuals(problem, v).into_iter().filter(|&r| r <= xi).count()
}

fn components(problem: &dyn SeparableProblem, v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(v.len(), problem.dimension(), "point dimension");
    let mw = problem.len() * problem.codomain_width();
    let mut h = vec![0.0; mw];
    let mut g = vec![0.0; mw];
    problem.h_all(v[0], &mut h);
    problem.g_all(&v[1..], &mut g);
    (h, g)
}

fn check_point(problem: &dyn SeparableProblem, v: &[f64]) -> Result<(), ObjectiveError> {
    if v.len() != problem.dimension() {
        return Err(ObjectiveError::DimensionMismatch { expected: problem.dimension(), got: v.len() });
    }
    Ok(())
}

const LANES: usize = 8;

/// Sum of `term(0..n)` over eight interleaved accumulators. The order is
/// fixed, so results are reproducible, and the lanes break the add chain.
#[inline(always)]
fn lane_sum(n: usize, mut term: impl FnMut(usize) -> f64) -> f64 {
    let mut acc = [0.0; LANES];
    let full = n / LANES * LANES;
    let mut i = 0;
    while i < full {
        for (k, a) in acc.iter_mut().enumerate() {
            *a += term(i + k);
        }
        i += LANES;
    }
    let mut tail = 0.0;
    for j in full..n {
        tail += term(j);
    }
    combine(&acc) + tail
}

#[inline(always)]
fn combine(acc: &[f64; LANES]) -> f64 {
    ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]))
}

#[inline(always)]
fn fmin(a: f64, b: f64) -> f64 {
    if a < b {
        a
    } else {
        b
    }
}

#[inline(always)]
fn fmax(a: f64, b: f64) -> f64 {
    if a > b {
        a
    } else {
        b
    }
}

#[inline(always)]
fn norm2(norm: Norm, a: f64, b: f64) -> f64 {
    match norm {
        Norm::Abs => a.abs(),
        Norm::L2 => (a * a + b * b).sqrt(),
        Norm::Linf => a.abs().max(b.abs()),
    }
}

/// `sum_i min(||h_i + g_i||, xi)`; the one summation routine shared by the
/// objective and the upper-bound slice so both agree bit for bit.
#[inline]
fn truncated_sum(h: &[f64], g: &[f64], w: usize, norm: Norm, xi: f64) -> f64 {
    let n = h.len() / w;
    match w {
        1 => {
            let (h, g) = (&h[..n], &g[..n]);
            let mut acc = [0.0; LANES];
            for (a, b) in h.chunks_exact(LANES).zip(g.chunks_exact(LANES)) {
                for k in 0..LANES {
                    acc[k] += fmin((a[k] + b[k]).abs(), xi);
                }
            }
            let full = n / LANES * LANES;
            let tail: f64 = (full..n).map(|i| fmin((h[i] + g[i]).abs(), xi)).sum();
            combine(&acc) + tail
        }
        2 => {
            let (h, g) = (&h[..2 * n], &g[..2 * n]);
            lane_sum(n, |i| norm2(norm, h[2 * i] + g[2 * i], h[2 * i + 1] + g[2 * i + 1]).min(xi))
        }
        _ => {
            let mut buf = [0.0; 8];
            let buf = &mut buf[..w];
            lane_sum(n, |i| {
                for (j, b) in buf.iter_mut().enumerate() {
                    *b = h[i * w + j] + g[i * w + j];
                }
                norm.apply(buf).min(xi)
            })
        }
    }
}

/// Smallest `|h + s|` over `s` in `[s_lo, s_hi]`.
#[inline(always)]
pub fn component_lower_bound(h: f64, s_lo: f64, s_hi: f64) -> f64 {
    (h + s_lo).max(-(h + s_hi)).max(0.0)
}

/// Lower bound of `r_i(v1, .)` over every `v2..n` whose `g_i` lies in the
/// componentwise range `[g_lower, g_upper]`.
pub fn residual_lower_bound(
    problem: &dyn SeparableProblem,
    i: usize,
    v1: f64,
    g_lower: &[f64],
    g_upper: &[f64],
) -> Result<f64, ObjectiveError> {
    if i >= problem.len() {
        return Err(ObjectiveError::IndexOutOfRange { index: i, len: problem.len() });
    }
    let w = problem.codomain_width();
    let mut h = vec![0.0; w];
    problem.h(i, v1, &mut h);
    for (j, hj) in h.iter_mut().enumerate() {
        *hj = component_lower_bound(*hj, g_lower[j], g_upper[j]);
    }
    Ok(problem.norm().apply(&h))
}

#[inline]
fn lower_sum(h_lo: &[f64], h_hi: &[f64], s_lo: &[f64], s_hi: &[f64], w: usize, norm: Norm, xi: f64) -> f64 {
    let len = h_lo.len();
    let n = len / w;
    let (h_lo, h_hi, s_lo, s_hi) = (&h_lo[..len], &h_hi[..len], &s_lo[..len], &s_hi[..len]);
    let gap = |k: usize| fmax(fmax(h_lo[k] + s_lo[k], -(h_hi[k] + s_hi[k])), 0.0);
    match w {
        1 => {
            let mut acc = [0.0; LANES];
            let chunks = h_lo
                .chunks_exact(LANES)
                .zip(h_hi.chunks_exact(LANES))
                .zip(s_lo.chunks_exact(LANES).zip(s_hi.chunks_exact(LANES)));
            for ((a, b), (c, d)) in chunks {
                for k in 0..LANES {
                    acc[k] += fmin(fmax(fmax(a[k] + c[k], -(b[k] + d[k])), 0.0), xi);
                }
            }
            let full = n / LANES * LANES;
            let tail: f64 = (full..n).map(|i| fmin(gap(i), xi)).sum();
            combine(&acc) + tail
        }
        2 => lane_sum(n, |i| norm2(norm, gap(2 * i), gap(2 * i + 1)).min(xi)),
        _ => {
            let mut buf = [0.0; 8];
            let buf = &mut buf[..w];
            lane_sum(n, |i| {
                for (j, b) in buf.iter_mut().enumerate() {
                    *b = gap(i * w + j);
                }
                norm.apply(buf).min(xi)
            })
        }
    }
}

/// A one-dimensional function of `v1` produced by fixing or relaxing
/// `v2..n`. The interval bound lets a 1-D branch-and-bound minimize it.
pub trait BoundFunction {
    fn eval(&mut self, v1: f64) -> f64;
    /// A value no larger than `eval` anywhere on `v1`.
    fn lower_bound_on(&mut self, v1: Interval) -> f64;
}

/// `v1 -> f(v1, c)` for a fixed `c`: the upper-bound slice.
pub struct SliceObjective<'a> {
    problem: &'a dyn SeparableProblem,
    xi: f64,
    g: Vec<f64>,
    h: Vec<f64>,
    h_hi: Vec<f64>,
}

impl<'a> SliceObjective<'a> {
    pub fn new(problem: &'a dyn SeparableProblem, rest: &[f64], xi: f64) -> Self {
        let mw = problem.len() * problem.codomain_width();
        let mut g = vec![0.0; mw];
        problem.g_all(rest, &mut g);
        Self { problem, xi, g, h: vec![0.0; mw], h_hi: vec![0.0; mw] }
    }
}

impl BoundFunction for SliceObjective<'_> {
    #[inline]
    fn eval(&mut self, v1: f64) -> f64 {
        self.problem.h_all(v1, &mut self.h);
        truncated_sum(&self.h, &self.g, self.problem.codomain_width(), self.problem.norm(), self.xi)
    }

    fn lower_bound_on(&mut self, v1: Interval) -> f64 {
        self.problem.h_range_all(v1, &mut self.h, &mut self.h_hi);
        lower_sum(&self.h, &self.h_hi, &self.g, &self.g, self.problem.codomain_width(), self.problem.norm(), self.xi)
    }
}

/// `v1 -> sum_i min(r_i_lower(v1), xi)` for a box in `v2..n`: a function
/// below `f(v1, v)` for every `v` in the box.
pub struct Underestimator<'a> {
    problem: &'a dyn SeparableProblem,
    xi: f64,
    s_lo: Vec<f64>,
    s_hi: Vec<f64>,
    h: Vec<f64>,
    h_hi: Vec<f64>,
}

impl<'a> Underestimator<'a> {
    pub fn new(problem: &'a dyn SeparableProblem, sub_box: &[Interval], xi: f64) -> Self {
        let mw = problem.len() * problem.codomain_width();
        let mut s_lo = vec![0.0; mw];
        let mut s_hi = vec![0.0; mw];
        problem.g_range_all(sub_box, &mut s_lo, &mut s_hi);
        Self { problem, xi, s_lo, s_hi, h: vec![0.0; mw], h_hi: vec![0.0; mw] }
    }

    /// The `g` ranges, datum-major.
    pub fn g_ranges(&self) -> (&[f64], &[f64]) {
        (&self.s_lo, &self.s_hi)
    }
}

impl BoundFunction for Underestimator<'_> {
    #[inline]
    fn eval(&mut self, v1: f64) -> f64 {
        self.problem.h_all(v1, &mut self.h);
        lower_sum(&self.h, &self.h, &self.s_lo, &self.s_hi, self.problem.codomain_width(), self.problem.norm(), self.xi)
    }

    fn lower_bound_on(&mut self, v1: Interval) -> f64 {
        self.problem.h_range_all(v1, &mut self.h, &mut self.h_hi);
        lower_sum(&self.h, &self.h_hi, &self.s_lo, &self.s_hi, self.problem.codomain_width(), self.problem.norm(), self.xi)
    }
}

/// Lower bound of the truncated objective over a full `n`-dimensional box,
/// from the `h` range over its first interval and the `g` range over the rest.
pub fn box_lower_bound(problem: &dyn SeparableProblem, b: &IntervalBox, xi: f64) -> f64 {
    Underestimator::new(problem, &b.dims()[1..], xi).lower_bound_on(b.head())
}

/// Per-datum lower bounds of the residual over a full box (untruncated).
pub fn box_residual_lower_bounds(problem: &dyn SeparableProblem, b: &IntervalBox) -> Vec<f64> {
    let w = problem.codomain_width();
    let mw = problem.len() * w;
    let (mut s_lo, mut s_hi, mut h_lo, mut h_hi) = (vec![0.0; mw], vec![0.0; mw], vec![0.0; mw], vec![0.0; mw]);
    problem.g_range_all(&b.dims()[1..], &mut s_lo, &mut s_hi);
    problem.h_range_all(b.head(), &mut h_lo, &mut h_hi);
    let norm = problem.norm();
    let mut buf = vec![0.0; w];
    (0..problem.len())
        .map(|i| {
            for (j, x) in buf.iter_mut().enumerate() {
                let k = i * w + j;
                *x = (h_lo[k] + s_lo[k]).max(-(h_hi[k] + s_hi[k])).max(0.0);
            }
            norm.apply(&buf)
        })
        .collect()
}
