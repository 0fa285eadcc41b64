use serde::{Deserialize, Serialize};

use super::ProblemError;
use crate::interval::{affine_range_unchecked, Interval, IntervalBox};
use crate::objective::{Norm, SeparableProblem};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionSample {
    pub a: Vec<f64>,
    pub y: f64,
}

/// `r_i(v) = |v . a_i - y_i|` split as `h_i(v1) = v1 a_i1 - y_i`,
/// `g_i(v2..n) = v2..n . a_i,2..n`.
#[derive(Debug, Clone)]
pub struct LinearRegression {
    n: usize,
    // datum-major coefficient rows
    a: Vec<f64>,
    // first column of `a`, contiguous for the batched `h`
    a1: Vec<f64>,
    y: Vec<f64>,
    domain: IntervalBox,
}

impl LinearRegression {
    pub const DEFAULT_HALF_WIDTH: f64 = 10.0;

    pub fn new(samples: &[RegressionSample], domain: IntervalBox) -> Result<Self, ProblemError> {
        let n = domain.dim();
        if n < 2 {
            return Err(ProblemError::InvalidDomain("regression needs at least two unknowns".into()));
        }
        let mut a = Vec::with_capacity(samples.len() * n);
        let mut y = Vec::with_capacity(samples.len());
        for (i, s) in samples.iter().enumerate() {
            if s.a.len() != n {
                return Err(ProblemError::DimensionMismatch { expected: n, got: s.a.len() });
            }
            if !s.y.is_finite() || s.a.iter().any(|x| !x.is_finite()) {
                return Err(ProblemError::NonFinite { index: i });
            }
            a.extend_from_slice(&s.a);
            y.push(s.y);
        }
        let a1 = a.iter().step_by(n).copied().collect();
        Ok(Self { n, a, a1, y, domain })
    }

    /// Uses the cube `[-10, 10]^n`.
    pub fn with_default_domain(samples: &[RegressionSample]) -> Result<Self, ProblemError> {
        let n = samples.first().map_or(2, |s| s.a.len());
        Self::new(samples, IntervalBox::cube(n, Self::DEFAULT_HALF_WIDTH))
    }

    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.n..(i + 1) * self.n]
    }
}

impl SeparableProblem for LinearRegression {
    fn name(&self) -> &'static str {
        "linreg"
    }

    fn dimension(&self) -> usize {
        self.n
    }

    fn codomain_width(&self) -> usize {
        1
    }

    fn norm(&self) -> Norm {
        Norm::Abs
    }

    fn len(&self) -> usize {
        self.y.len()
    }

    fn domain(&self) -> &IntervalBox {
        &self.domain
    }

    #[inline]
    fn h(&self, i: usize, v1: f64, out: &mut [f64]) {
        out[0] = v1 * self.a[i * self.n] - self.y[i];
    }

    #[inline]
    fn g(&self, i: usize, rest: &[f64], out: &mut [f64]) {
        out[0] = self.row(i)[1..].iter().zip(rest).map(|(c, v)| c * v).sum();
    }

    fn g_range(&self, i: usize, rest: &[Interval], lo: &mut [f64], hi: &mut [f64]) {
        let r = affine_range_unchecked(&self.row(i)[1..], rest);
        lo[0] = r.lo();
        hi[0] = r.hi();
    }

    fn h_range(&self, i: usize, v1: Interval, lo: &mut [f64], hi: &mut [f64]) {
        let r = v1 * self.a[i * self.n] + (-self.y[i]);
        lo[0] = r.lo();
        hi[0] = r.hi();
    }

    fn lipschitz_hint(&self) -> Option<f64> {
        (0..self.len()).map(|i| self.a[i * self.n].abs()).reduce(f64::max)
    }

    fn h_all(&self, v1: f64, out: &mut [f64]) {
        let m = self.y.len();
        let (out, a1, y) = (&mut out[..m], &self.a1[..m], &self.y[..m]);
        for i in 0..m {
            out[i] = v1 * a1[i] - y[i];
        }
    }
}
