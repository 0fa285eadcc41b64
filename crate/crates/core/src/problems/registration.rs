use serde::{Deserialize, Serialize};

use super::ProblemError;
use crate::interval::{square_range, Interval, IntervalBox};
use crate::objective::{Norm, SeparableProblem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correspondence {
    pub p: [f64; 3],
    pub q: [f64; 3],
}

/// Rotation-free translation residual `| ||p_i + t||^2 - ||q_i||^2 |`
/// for the model `q = R (p + t)`.
#[derive(Debug, Clone)]
pub struct RegistrationProblem {
    p: Vec<[f64; 3]>,
    // first source coordinate, contiguous for the batched `h`
    p1: Vec<f64>,
    q_norm_sq: Vec<f64>,
    domain: IntervalBox,
}

/// A translation box guaranteed to contain `t` for every correspondence
/// consistent with the model up to unit noise: `p_i + t = R^T (q_i - noise)`
/// bounds each coordinate of `p_i + t` by `max ||q|| + 1`.
pub fn default_translation_domain(pairs: &[Correspondence]) -> IntervalBox {
    let q_max = pairs
        .iter()
        .map(|c| c.q.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let reach = q_max + 1.0;
    IntervalBox::new(
        (0..3)
            .map(|j| {
                let (p_lo, p_hi) = pairs
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), c| (l.min(c.p[j]), h.max(c.p[j])));
                if pairs.is_empty() {
                    Interval::new(-reach, reach)
                } else {
                    Interval::new(-reach - p_hi, reach - p_lo)
                }
            })
            .collect(),
    )
}

impl RegistrationProblem {
    pub fn new(pairs: &[Correspondence], domain: IntervalBox) -> Result<Self, ProblemError> {
        if domain.dim() != 3 {
            return Err(ProblemError::DimensionMismatch { expected: 3, got: domain.dim() });
        }
        if domain.dims().iter().any(|d| !d.width().is_finite()) {
            return Err(ProblemError::InvalidDomain("translation domain must be finite".into()));
        }
        for (i, c) in pairs.iter().enumerate() {
            if c.p.iter().chain(&c.q).any(|x| !x.is_finite()) {
                return Err(ProblemError::NonFinite { index: i });
            }
        }
        let p = pairs.iter().map(|c| c.p).collect();
        let q_norm_sq = pairs.iter().map(|c| c.q.iter().map(|x| x * x).sum()).collect();
        Self::from_norms(p, q_norm_sq, domain)
    }

    pub fn with_default_domain(pairs: &[Correspondence]) -> Result<Self, ProblemError> {
        Self::new(pairs, default_translation_domain(pairs))
    }

    /// Builds directly from source points and squared target norms.
    pub fn from_norms(p: Vec<[f64; 3]>, q_norm_sq: Vec<f64>, domain: IntervalBox) -> Result<Self, ProblemError> {
        if p.len() != q_norm_sq.len() {
            return Err(ProblemError::DimensionMismatch { expected: p.len(), got: q_norm_sq.len() });
        }
        if domain.dim() != 3 {
            return Err(ProblemError::DimensionMismatch { expected: 3, got: domain.dim() });
        }
        let p1 = p.iter().map(|x| x[0]).collect();
        Ok(Self { p, p1, q_norm_sq, domain })
    }

    pub fn source_points(&self) -> &[[f64; 3]] {
        &self.p
    }
}

impl SeparableProblem for RegistrationProblem {
    fn name(&self) -> &'static str {
        "registration"
    }

    fn dimension(&self) -> usize {
        3
    }

    fn codomain_width(&self) -> usize {
        1
    }

    fn norm(&self) -> Norm {
        Norm::Abs
    }

    fn len(&self) -> usize {
        self.p.len()
    }

    fn domain(&self) -> &IntervalBox {
        &self.domain
    }

    #[inline]
    fn h(&self, i: usize, v1: f64, out: &mut [f64]) {
        let d = v1 + self.p[i][0];
        out[0] = d * d;
    }

    #[inline]
    fn g(&self, i: usize, rest: &[f64], out: &mut [f64]) {
        let d2 = rest[0] + self.p[i][1];
        let d3 = rest[1] + self.p[i][2];
        out[0] = d2 * d2 + d3 * d3 - self.q_norm_sq[i];
    }

    fn g_range(&self, i: usize, rest: &[Interval], lo: &mut [f64], hi: &mut [f64]) {
        let r = square_range(rest[0], self.p[i][1]) + square_range(rest[1], self.p[i][2]) + (-self.q_norm_sq[i]);
        lo[0] = r.lo();
        hi[0] = r.hi();
    }

    fn h_range(&self, i: usize, v1: Interval, lo: &mut [f64], hi: &mut [f64]) {
        let r = square_range(v1, self.p[i][0]);
        lo[0] = r.lo();
        hi[0] = r.hi();
    }

    /// `2 max |t1 + p1|` over the first domain interval.
    fn lipschitz_hint(&self) -> Option<f64> {
        let t = self.domain.head();
        self.p
            .iter()
            .map(|p| 2.0 * (t.lo() + p[0]).abs().max((t.hi() + p[0]).abs()))
            .reduce(f64::max)
    }

    fn h_all(&self, v1: f64, out: &mut [f64]) {
        let m = self.p1.len();
        let (out, p1) = (&mut out[..m], &self.p1[..m]);
        for i in 0..m {
            let d = v1 + p1[i];
            out[i] = d * d;
        }
    }
}
