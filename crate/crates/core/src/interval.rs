//! Closed real intervals, axis-aligned boxes, and the closed-form range
//! computations every bounding function is built from.
//!
//! Endpoint arithmetic uses ordinary round-to-nearest floating point. The
//! ranges are exact in real arithmetic and sound up to a few ulps, which the
//! branch-and-bound tolerances dominate by many orders of magnitude.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("denominator interval contains zero")]
    DenominatorContainsZero,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// Builds an interval from two endpoints given in any order.
    pub fn new(a: f64, b: f64) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub const fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// The whole real line; used as the fallback when a range is unbounded.
    pub const fn entire() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (
            Interval { lo: self.lo, hi: m },
            Interval { lo: m, hi: self.hi },
        )
    }

    /// Interval division. Fails when the denominator contains zero; callers
    /// decide the conservative fallback.
    pub fn checked_div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.contains_zero() {
            return Err(IntervalError::DenominatorContainsZero);
        }
        Ok(self * Interval::new(1.0 / rhs.hi, 1.0 / rhs.lo))
    }

    /// Pointwise square.
    pub fn sqr(self) -> Interval {
        square_range(self, 0.0)
    }

    /// Range of `tan` over the interval, which must lie in `[-pi/2, pi/2]`.
    pub fn tan(self) -> Interval {
        debug_assert!(self.lo >= -FRAC_PI_2 - 1e-12 && self.hi <= FRAC_PI_2 + 1e-12);
        Interval::new(self.lo.tan(), self.hi.tan())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: f64) -> Interval {
        Interval {
            lo: self.lo + rhs,
            hi: self.hi + rhs,
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        Interval {
            lo: p.iter().copied().fold(f64::INFINITY, f64::min),
            hi: p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: f64) -> Interval {
        Interval::new(self.lo * rhs, self.hi * rhs)
    }
}

/// Exact range of `amplitude * sin(theta + phase)` for `theta` in `theta`.
///
/// The shifted argument is reduced modulo 2π so that its lower end lies in
/// `[-pi/2, 3pi/2)`; the extrema are then attained either at the endpoints or
/// at the first crest/trough inside the window. Negative amplitudes use
/// `A sin(x) = |A| sin(x + pi)`.
pub fn sine_range(theta: Interval, amplitude: f64, phase: f64) -> Interval {
    if amplitude < 0.0 {
        return sine_range(theta, -amplitude, phase + PI);
    }
    let a = amplitude;
    let width = theta.width();
    if width >= TAU {
        return Interval { lo: -a, hi: a };
    }
    let start = theta.lo + phase;
    let reduced = (start + FRAC_PI_2).rem_euclid(TAU) - FRAC_PI_2;
    let end = reduced + width;
    let y_start = a * (theta.lo + phase).sin();
    let y_end = a * (theta.hi + phase).sin();
    let mut lo = y_start.min(y_end);
    let mut hi = y_start.max(y_end);
    // Crests at pi/2 and 5pi/2, troughs at 3pi/2 and 7pi/2 cover any window
    // starting in [-pi/2, 3pi/2) with length below 2pi.
    if (reduced..=end).contains(&FRAC_PI_2) || (reduced..=end).contains(&(FRAC_PI_2 + TAU)) {
        hi = a;
    }
    if (reduced..=end).contains(&(3.0 * FRAC_PI_2))
        || (reduced..=end).contains(&(-FRAC_PI_2))
        || (reduced..=end).contains(&(3.0 * FRAC_PI_2 + TAU))
    {
        lo = -a;
    }
    Interval { lo, hi }
}

/// Exact range of `amplitude * cos(theta + phase)`.
pub fn cosine_range(theta: Interval, amplitude: f64, phase: f64) -> Interval {
    sine_range(theta, amplitude, phase + FRAC_PI_2)
}

/// Exact range of `(t + offset)^2` for `t` in `x`.
pub fn square_range(x: Interval, offset: f64) -> Interval {
    let l = x.lo + offset;
    let u = x.hi + offset;
    if u <= 0.0 {
        Interval { lo: u * u, hi: l * l }
    } else if l >= 0.0 {
        Interval { lo: l * l, hi: u * u }
    } else {
        Interval {
            lo: 0.0,
            hi: (l * l).max(u * u),
        }
    }
}

/// Exact range of `coeffs . v` for `v` in the box.
pub fn affine_range(coeffs: &[f64], dims: &[Interval]) -> Result<Interval, IntervalError> {
    if coeffs.len() != dims.len() {
        return Err(IntervalError::DimensionMismatch {
            expected: dims.len(),
            got: coeffs.len(),
        });
    }
    Ok(affine_range_unchecked(coeffs, dims))
}

#[inline]
pub(crate) fn affine_range_unchecked(coeffs: &[f64], dims: &[Interval]) -> Interval {
    let mut lo = 0.0;
    let mut hi = 0.0;
    for (&c, d) in coeffs.iter().zip(dims) {
        if c >= 0.0 {
            lo += c * d.lo;
            hi += c * d.hi;
        } else {
            lo += c * d.hi;
            hi += c * d.lo;
        }
    }
    Interval { lo, hi }
}

/// Axis-aligned box: the search region of every branch-and-bound node and
/// the domain of multi-dimensional DIRECT.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalBox {
    dims: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(dims: Vec<Interval>) -> Self {
        assert!(!dims.is_empty(), "a box needs at least one dimension");
        Self { dims }
    }

    /// Hypercube `[-half_width, half_width]^k`.
    pub fn cube(k: usize, half_width: f64) -> Self {
        Self::new(vec![Interval::new(-half_width, half_width); k])
    }

    pub fn from_point(p: &[f64]) -> Self {
        Self::new(p.iter().map(|&x| Interval::point(x)).collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    #[inline]
    pub fn dims(&self) -> &[Interval] {
        &self.dims
    }

    #[inline]
    pub fn get(&self, j: usize) -> Interval {
        self.dims[j]
    }

    pub fn width(&self, j: usize) -> f64 {
        self.dims[j].width()
    }

    pub fn max_width(&self) -> f64 {
        self.dims.iter().map(Interval::width).fold(0.0, f64::max)
    }

    pub fn center(&self) -> Vec<f64> {
        self.dims.iter().map(Interval::mid).collect()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dims.len() && self.dims.iter().zip(p).all(|(d, &x)| d.contains(x))
    }

    pub fn is_subset_of(&self, other: &IntervalBox) -> bool {
        self.dim() == other.dim() && self.dims.iter().zip(&other.dims).all(|(a, b)| a.is_subset_of(b))
    }

    pub fn volume(&self) -> f64 {
        self.dims.iter().map(Interval::width).product()
    }

    /// First dimension only.
    pub fn head(&self) -> Interval {
        self.dims[0]
    }

    /// Every dimension but the first.
    pub fn tail(&self) -> IntervalBox {
        Self::new(self.dims[1..].to_vec())
    }

    /// Bisects every dimension simultaneously, yielding `2^k` children in a
    /// fixed order (bit `j` of the child index picks the upper half of
    /// dimension `j`).
    pub fn bisect_all(&self) -> Vec<IntervalBox> {
        let k = self.dims.len();
        let halves: Vec<(Interval, Interval)> = self.dims.iter().map(Interval::bisect).collect();
        (0..1usize << k)
            .map(|mask| {
                IntervalBox::new(
                    halves
                        .iter()
                        .enumerate()
                        .map(|(j, &(lower, upper))| if mask >> j & 1 == 1 { upper } else { lower })
                        .collect(),
                )
            })
            .collect()
    }

    /// Maps a point of the unit cube into the box.
    pub fn from_unit(&self, u: &[f64], out: &mut [f64]) {
        for ((o, &t), d) in out.iter_mut().zip(u).zip(&self.dims) {
            *o = d.lo + t * d.width();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    fn grid_range(n: usize, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
        (0..=n)
            .map(|k| f(lo + (hi - lo) * k as f64 / n as f64))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)))
    }

    #[test]
    fn construction_sorts_endpoints() {
        let i = Interval::new(3.0, -1.0);
        assert_eq!((i.lo(), i.hi()), (-1.0, 3.0));
    }

    #[test]
    fn addition_examples() {
        assert_eq!(Interval::new(1.0, 2.0) + Interval::new(3.0, 4.0), Interval::new(4.0, 6.0));
        assert_eq!(Interval::point(0.0) + Interval::new(-5.0, 7.0), Interval::new(-5.0, 7.0));
        assert_eq!(Interval::new(-1.0, 1.0) - Interval::new(-1.0, 1.0), Interval::new(-2.0, 2.0));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(Interval::new(-1.0, 2.0) * Interval::new(3.0, 4.0), Interval::new(-4.0, 8.0));
        assert_eq!(Interval::new(2.0, 3.0) * Interval::point(0.0), Interval::point(0.0));
        assert_eq!(Interval::new(-2.0, -1.0) * Interval::new(-3.0, -1.0), Interval::new(1.0, 6.0));
    }

    #[test]
    fn division_examples() {
        let q = Interval::new(1.0, 2.0).checked_div(Interval::new(2.0, 4.0)).unwrap();
        assert_eq!(q, Interval::new(0.25, 1.0));
        assert_eq!(
            Interval::new(1.0, 2.0).checked_div(Interval::new(-1.0, 1.0)),
            Err(IntervalError::DenominatorContainsZero)
        );
    }

    #[test]
    fn division_negative_denominator_matches_sampled_quotients() {
        let q = Interval::new(1.0, 2.0).checked_div(Interval::new(-4.0, -2.0)).unwrap();
        let n = 400;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in 0..=n {
            for b in 0..=n {
                let x = 1.0 + a as f64 / n as f64;
                let y = -4.0 + 2.0 * b as f64 / n as f64;
                lo = lo.min(x / y);
                hi = hi.max(x / y);
            }
        }
        assert!((q.lo() - lo).abs() < 1e-12 && (q.hi() - hi).abs() < 1e-12);
        assert!((q.lo() + 1.0).abs() < 1e-15 && (q.hi() + 0.25).abs() < 1e-15);
    }

    #[test]
    fn sine_range_examples() {
        let full = sine_range(Interval::new(-PI, PI), 1.0, 0.0);
        assert_eq!((full.lo(), full.hi()), (-1.0, 1.0));
        let p = sine_range(Interval::point(0.0), 2.0, FRAC_PI_2);
        assert!((p.lo() - 2.0).abs() < 1e-15 && (p.hi() - 2.0).abs() < 1e-15);
        let mono = sine_range(Interval::new(0.0, FRAC_PI_3), 1.0, 0.0);
        let (glo, ghi) = grid_range(100_000, 0.0, FRAC_PI_3, f64::sin);
        assert!((mono.lo() - glo).abs() < 1e-12);
        assert!((mono.hi() - ghi).abs() < 1e-12);
        assert!((mono.hi() - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn sine_range_handles_far_phases_and_negative_amplitude() {
        for &(lo, hi, a, ph) in &[
            (5.0, 6.5, 1.3, 11.0),
            (-9.0, -8.2, -0.7, -3.3),
            (-0.3, 0.4, -2.0, 100.0),
            (2.0, 7.9, 1.0, 0.0),
        ] {
            let r = sine_range(Interval::new(lo, hi), a, ph);
            let (glo, ghi) = grid_range(200_000, lo, hi, |t| a * (t + ph).sin());
            assert!(r.lo() <= glo + 1e-12 && r.hi() >= ghi - 1e-12, "{r} vs [{glo},{ghi}]");
            assert!((r.lo() - glo).abs() < 1e-6 && (r.hi() - ghi).abs() < 1e-6);
        }
    }

    #[test]
    fn square_range_cases() {
        assert_eq!(square_range(Interval::new(-2.0, -1.0), 0.0), Interval::new(1.0, 4.0));
        assert_eq!(square_range(Interval::new(-1.0, 2.0), 0.0), Interval::new(0.0, 4.0));
        assert_eq!(square_range(Interval::new(1.0, 2.0), 3.0), Interval::new(16.0, 25.0));
    }

    #[test]
    fn affine_range_examples() {
        let unit = [Interval::new(0.0, 1.0), Interval::new(0.0, 1.0)];
        assert_eq!(affine_range(&[1.0, -1.0], &unit).unwrap(), Interval::new(-1.0, 1.0));
        assert_eq!(affine_range(&[0.0, 0.0], &unit).unwrap(), Interval::point(0.0));
        let b = [Interval::new(-1.0, 1.0), Interval::new(0.0, 2.0)];
        let r = affine_range(&[2.0, 3.0], &b).unwrap();
        let corners = [(-1.0, 0.0), (-1.0, 2.0), (1.0, 0.0), (1.0, 2.0)]
            .iter()
            .map(|&(x, y)| 2.0 * x + 3.0 * y)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        assert_eq!((r.lo(), r.hi()), corners);
        assert_eq!(r, Interval::new(-2.0, 8.0));
        assert_eq!(
            affine_range(&[1.0], &b),
            Err(IntervalError::DimensionMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn bisect_all_tiles_the_box() {
        let b = IntervalBox::new(vec![Interval::new(0.0, 2.0), Interval::new(-1.0, 1.0), Interval::new(3.0, 4.0)]);
        let kids = b.bisect_all();
        assert_eq!(kids.len(), 8);
        let vol: f64 = kids.iter().map(IntervalBox::volume).sum();
        assert!((vol - b.volume()).abs() < 1e-12);
        assert!(kids.iter().all(|k| k.is_subset_of(&b)));
    }
}
