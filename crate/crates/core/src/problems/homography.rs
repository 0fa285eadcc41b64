use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix3, Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use super::ProblemError;
use crate::interval::{cosine_range, sine_range, square_range, Interval, IntervalBox};
use crate::objective::{Norm, SeparableProblem};

/// Smallest admissible focal length in pixels; `k = 1/F` is singular at 0.
pub const MIN_FOCAL: f64 = 1.0;
pub const DEFAULT_MAX_FOCAL: f64 = 2000.0;

/// Centered pixel coordinates of one match.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomographyMatch {
    pub z: [f64; 2],
    pub zp: [f64; 2],
}

/// The rotation `Rz(-alpha) Ry(beta) Rz(gamma)` parameterized by the search
/// variables, so that `h(alpha)` rotates `z'` by `+alpha`.
pub fn rotation_matrix(alpha: f64, beta: f64, gamma: f64) -> Matrix3<f64> {
    let rz = |a: f64| Rotation3::from_axis_angle(&Vector3::z_axis(), a);
    let ry = Rotation3::from_axis_angle(&Vector3::y_axis(), beta);
    (rz(-alpha) * ry * rz(gamma)).into_inner()
}

/// Rotational homography with unknown focal length, variables ordered
/// `(alpha | beta, gamma, F)`:
///
/// `h(alpha) = |z'| (cos(alpha + psi), sin(alpha + psi))`
/// `g = -(|z| cos(gamma + sigma) + w, |z| sin(gamma + sigma) sqrt(1 + w^2 k^2)) / (1 - w |z| cos(gamma + sigma) k^2)`
///
/// with `w = F tan(beta)`, `k = 1/F`, pixel norms in 2-D and the residual
/// measured in the L-infinity norm.
#[derive(Debug, Clone)]
pub struct HomographyProblem {
    norm_z: Vec<f64>,
    sigma: Vec<f64>,
    norm_zp: Vec<f64>,
    psi: Vec<f64>,
    zp: Vec<[f64; 2]>,
    domain: IntervalBox,
}

impl HomographyProblem {
    pub fn new(matches: &[HomographyMatch], focal_domain: Interval) -> Result<Self, ProblemError> {
        if !(focal_domain.lo() >= MIN_FOCAL) || !focal_domain.hi().is_finite() {
            return Err(ProblemError::InvalidDomain(format!(
                "focal range {focal_domain} must lie in [{MIN_FOCAL}, inf)"
            )));
        }
        let mut p = Self {
            norm_z: Vec::with_capacity(matches.len()),
            sigma: Vec::with_capacity(matches.len()),
            norm_zp: Vec::with_capacity(matches.len()),
            psi: Vec::with_capacity(matches.len()),
            zp: Vec::with_capacity(matches.len()),
            domain: IntervalBox::new(vec![
                Interval::new(-FRAC_PI_2, FRAC_PI_2),
                Interval::new(-FRAC_PI_2, FRAC_PI_2),
                Interval::new(-FRAC_PI_2, FRAC_PI_2),
                focal_domain,
            ]),
        };
        for (i, m) in matches.iter().enumerate() {
            if m.z.iter().chain(&m.zp).any(|x| !x.is_finite()) {
                return Err(ProblemError::NonFinite { index: i });
            }
            if m.z == [0.0, 0.0] || m.zp == [0.0, 0.0] {
                return Err(ProblemError::DegenerateMatch { index: i });
            }
            p.norm_z.push(m.z[0].hypot(m.z[1]));
            p.sigma.push(m.z[1].atan2(m.z[0]));
            p.norm_zp.push(m.zp[0].hypot(m.zp[1]));
            p.psi.push(m.zp[1].atan2(m.zp[0]));
            p.zp.push(m.zp);
        }
        Ok(p)
    }

    pub fn with_default_focal(matches: &[HomographyMatch]) -> Result<Self, ProblemError> {
        Self::new(matches, Interval::new(MIN_FOCAL, DEFAULT_MAX_FOCAL))
    }
}

impl SeparableProblem for HomographyProblem {
    fn name(&self) -> &'static str {
        "homography"
    }

    fn dimension(&self) -> usize {
        4
    }

    fn codomain_width(&self) -> usize {
        2
    }

    fn norm(&self) -> Norm {
        Norm::Linf
    }

    fn len(&self) -> usize {
        self.norm_z.len()
    }

    fn domain(&self) -> &IntervalBox {
        &self.domain
    }

    #[inline]
    fn h(&self, i: usize, v1: f64, out: &mut [f64]) {
        // |z'| (cos(a + psi), sin(a + psi)) is z' rotated by a
        let (s, c) = v1.sin_cos();
        let [x, y] = self.zp[i];
        out[0] = x * c - y * s;
        out[1] = x * s + y * c;
    }

    fn g(&self, i: usize, rest: &[f64], out: &mut [f64]) {
        let (beta, gamma, f) = (rest[0], rest[1], rest[2]);
        let tb = beta.tan();
        let omega = f * tb;
        let k = 1.0 / f;
        let (s, c) = (gamma + self.sigma[i]).sin_cos();
        let rc = self.norm_z[i] * c;
        let rs = self.norm_z[i] * s;
        let den = 1.0 - omega * rc * k * k;
        out[0] = -(rc + omega) / den;
        out[1] = -(rs * (1.0 + omega * omega * k * k).sqrt()) / den;
    }

    /// Interval propagation through the rational form, using
    /// `w k^2 = tan(beta)/F` and `sqrt(1 + w^2 k^2) = sqrt(1 + tan(beta)^2)`.
    /// A denominator range containing zero leaves both components unbounded.
    fn g_range(&self, i: usize, rest: &[Interval], lo: &mut [f64], hi: &mut [f64]) {
        let (beta, gamma, f) = (rest[0], rest[1], rest[2]);
        let tb = beta.tan();
        let inv_f = Interval::new(1.0 / f.hi(), 1.0 / f.lo());
        let omega = f * tb;
        let slope = tb * inv_f;
        let rc = cosine_range(gamma, self.norm_z[i], self.sigma[i]);
        let rs = sine_range(gamma, self.norm_z[i], self.sigma[i]);
        let den = Interval::point(1.0) - rc * slope;
        let sec = square_range(tb, 0.0) + 1.0;
        let sec = Interval::new(sec.lo().sqrt(), sec.hi().sqrt());
        let (g1, g2) = match ((rc + omega).checked_div(den), (rs * sec).checked_div(den)) {
            (Ok(a), Ok(b)) => (-a, -b),
            _ => (Interval::entire(), Interval::entire()),
        };
        lo[0] = g1.lo();
        hi[0] = g1.hi();
        lo[1] = g2.lo();
        hi[1] = g2.hi();
    }

    fn h_range(&self, i: usize, v1: Interval, lo: &mut [f64], hi: &mut [f64]) {
        let c = cosine_range(v1, self.norm_zp[i], self.psi[i]);
        let s = sine_range(v1, self.norm_zp[i], self.psi[i]);
        lo[0] = c.lo();
        hi[0] = c.hi();
        lo[1] = s.lo();
        hi[1] = s.hi();
    }

    fn lipschitz_hint(&self) -> Option<f64> {
        self.norm_zp.iter().copied().reduce(f64::max)
    }

    fn h_all(&self, v1: f64, out: &mut [f64]) {
        let (s, c) = v1.sin_cos();
        for (o, &[x, y]) in out.chunks_exact_mut(2).zip(&self.zp) {
            o[0] = x * c - y * s;
            o[1] = x * s + y * c;
        }
    }
}
