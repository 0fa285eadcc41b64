use std::f64::consts::PI;

use log::warn;
use serde::{Deserialize, Serialize};

use super::wrap_angle;
use crate::interval::{sine_range, Interval, IntervalBox};
use crate::objective::{Norm, SeparableProblem};

/// Normalized (intrinsics removed) coordinates of one match: `u` in view 1,
/// `up` in view 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarMatch {
    pub u: [f64; 2],
    pub up: [f64; 2],
}

/// Planar-motion epipolar residual
/// `|A1 sin(theta1 + phi1) + A2 sin(theta2 + phi2)|`
/// with `theta1 = theta - phi` and `theta2 = phi`.
#[derive(Debug, Clone)]
pub struct PlanarProblem {
    a1: Vec<f64>,
    phi1: Vec<f64>,
    a2: Vec<f64>,
    phi2: Vec<f64>,
    // A1 cos(phi1) and A1 sin(phi1), so h needs one sin_cos per v1
    h_cos: Vec<f64>,
    h_sin: Vec<f64>,
    domain: IntervalBox,
}

impl PlanarProblem {
    pub fn new(matches: &[PlanarMatch]) -> Self {
        let mut p = Self {
            a1: Vec::with_capacity(matches.len()),
            phi1: Vec::with_capacity(matches.len()),
            a2: Vec::with_capacity(matches.len()),
            phi2: Vec::with_capacity(matches.len()),
            h_cos: Vec::with_capacity(matches.len()),
            h_sin: Vec::with_capacity(matches.len()),
            domain: IntervalBox::cube(2, PI),
        };
        let mut degenerate = 0usize;
        for m in matches {
            let (a1, phi1, a2, phi2) = Self::constants(m);
            if a1 == 0.0 && a2 == 0.0 {
                degenerate += 1;
            }
            p.a1.push(a1);
            p.phi1.push(phi1);
            p.a2.push(a2);
            p.phi2.push(phi2);
            p.h_cos.push(a1 * phi1.cos());
            p.h_sin.push(a1 * phi1.sin());
        }
        if degenerate > 0 {
            warn!("{degenerate} planar matches have a zero second coordinate in both views and carry no information");
        }
        p
    }

    /// `(A1, phi1, A2, phi2)` for one match.
    pub fn constants(m: &PlanarMatch) -> (f64, f64, f64, f64) {
        let [u1, u2] = m.u;
        let [up1, up2] = m.up;
        (u2 * (1.0 + up1 * up1).sqrt(), up1.atan(), up2 * (1.0 + u1 * u1).sqrt(), -u1.atan())
    }
}

/// Recovers the yaw `theta` and translation angle `phi` from the search
/// variables, both wrapped to `(-pi, pi]`.
pub fn planar_recover(theta1: f64, theta2: f64) -> (f64, f64) {
    (wrap_angle(theta1 + theta2), wrap_angle(theta2))
}

impl SeparableProblem for PlanarProblem {
    fn name(&self) -> &'static str {
        "planar"
    }

    fn dimension(&self) -> usize {
        2
    }

    fn codomain_width(&self) -> usize {
        1
    }

    fn norm(&self) -> Norm {
        Norm::Abs
    }

    fn len(&self) -> usize {
        self.a1.len()
    }

    fn domain(&self) -> &IntervalBox {
        &self.domain
    }

    #[inline]
    fn h(&self, i: usize, v1: f64, out: &mut [f64]) {
        let (s, c) = v1.sin_cos();
        out[0] = self.h_cos[i] * s + self.h_sin[i] * c;
    }

    #[inline]
    fn g(&self, i: usize, rest: &[f64], out: &mut [f64]) {
        out[0] = self.a2[i] * (rest[0] + self.phi2[i]).sin();
    }

    fn g_range(&self, i: usize, rest: &[Interval], lo: &mut [f64], hi: &mut [f64]) {
        let r = sine_range(rest[0], self.a2[i], self.phi2[i]);
        lo[0] = r.lo();
        hi[0] = r.hi();
    }

    fn h_range(&self, i: usize, v1: Interval, lo: &mut [f64], hi: &mut [f64]) {
        let r = sine_range(v1, self.a1[i], self.phi1[i]);
        lo[0] = r.lo();
        hi[0] = r.hi();
    }

    fn lipschitz_hint(&self) -> Option<f64> {
        self.a1.iter().map(|a| a.abs()).reduce(f64::max)
    }

    fn h_all(&self, v1: f64, out: &mut [f64]) {
        let (s, c) = v1.sin_cos();
        for ((o, hc), hs) in out.iter_mut().zip(&self.h_cos).zip(&self.h_sin) {
            *o = hc * s + hs * c;
        }
    }
}
