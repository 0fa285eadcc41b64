//! Full rigid-pose recovery after the translation search: keep the
//! lowest-residual correspondences, then align them robustly.

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

use crate::objective::{residuals, SeparableProblem};
use crate::problems::Correspondence;

/// `q = rotation * (p + translation)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidPose {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl RigidPose {
    pub fn apply(&self, p: &[f64; 3]) -> Vector3<f64> {
        self.rotation * (Vector3::from(*p) + self.translation)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RefineError {
    #[error("need at least 3 non-collinear correspondences (got {0} usable)")]
    DegenerateGeometry(usize),
    #[error("subset fraction must lie in (0, 1], got {0}")]
    InvalidFraction(f64),
}

/// Indices of the `ceil(fraction * M)` smallest residuals at `t_hat`,
/// smallest first, ties broken by index.
pub fn select_subset(problem: &dyn SeparableProblem, t_hat: &[f64], fraction: f64) -> Result<Vec<usize>, RefineError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(RefineError::InvalidFraction(fraction));
    }
    let r = residuals(problem, t_hat);
    let k = ((fraction * r.len() as f64).ceil() as usize).min(r.len());
    let mut idx: Vec<usize> = (0..r.len()).collect();
    idx.sort_by(|&a, &b| r[a].total_cmp(&r[b]).then(a.cmp(&b)));
    idx.truncate(k);
    Ok(idx)
}

/// Schedule of the graduated non-convexity loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GncSchedule {
    pub initial_scale: f64,
    pub inner_iterations: usize,
}

impl Default for GncSchedule {
    fn default() -> Self {
        Self { initial_scale: 16.0, inner_iterations: 4 }
    }
}

/// Geman-McClure weight `(mu / (mu + e^2))^2`.
#[inline]
pub fn gm_weight(mu: f64, e_sq: f64) -> f64 {
    let w = mu / (mu + e_sq);
    w * w
}

/// Robust rigid alignment under `q ~ R (p + t)`.
pub fn fit_rigid(pairs: &[Correspondence], xi: f64) -> Result<RigidPose, RefineError> {
    fit_rigid_with(pairs, xi, GncSchedule::default())
}

pub fn fit_rigid_with(pairs: &[Correspondence], xi: f64, schedule: GncSchedule) -> Result<RigidPose, RefineError> {
    check_geometry(pairs)?;
    let mut weights = vec![1.0; pairs.len()];
    let mut pose = weighted_fit(pairs, &weights).ok_or(RefineError::DegenerateGeometry(pairs.len()))?;
    let sq_errors = |pose: &RigidPose| -> Vec<f64> {
        pairs.iter().map(|c| (Vector3::from(c.q) - pose.apply(&c.p)).norm_squared()).collect()
    };
    let e_max = sq_errors(&pose).into_iter().fold(0.0, f64::max);
    let mut mu = (schedule.initial_scale * e_max).max(xi);
    loop {
        for _ in 0..schedule.inner_iterations {
            for (w, e) in weights.iter_mut().zip(sq_errors(&pose)) {
                *w = gm_weight(mu, e);
            }
            match weighted_fit(pairs, &weights) {
                Some(p) => pose = p,
                None => return Ok(pose),
            }
        }
        mu *= 0.5;
        if mu < xi {
            return Ok(pose);
        }
    }
}

fn check_geometry(pairs: &[Correspondence]) -> Result<(), RefineError> {
    if pairs.len() < 3 {
        return Err(RefineError::DegenerateGeometry(pairs.len()));
    }
    let n = pairs.len() as f64;
    let mean = pairs.iter().fold(Vector3::zeros(), |a, c| a + Vector3::from(c.p)) / n;
    let scatter = pairs.iter().fold(Matrix3::zeros(), |a, c| {
        let d = Vector3::from(c.p) - mean;
        a + d * d.transpose()
    });
    let mut s: Vec<f64> = scatter.symmetric_eigenvalues().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    if !(s[0] > 0.0) || s[1] <= 1e-12 * s[0] {
        return Err(RefineError::DegenerateGeometry(pairs.len()));
    }
    Ok(())
}

/// Weighted least-squares rotation and translation (Kabsch with
/// reflection correction). Returns `None` when the weights vanish.
fn weighted_fit(pairs: &[Correspondence], weights: &[f64]) -> Option<RigidPose> {
    let total: f64 = weights.iter().sum();
    if !(total > 1e-12) {
        return None;
    }
    let (mut pc, mut qc) = (Vector3::zeros(), Vector3::zeros());
    for (c, &w) in pairs.iter().zip(weights) {
        pc += w * Vector3::from(c.p);
        qc += w * Vector3::from(c.q);
    }
    pc /= total;
    qc /= total;
    let mut h = Matrix3::zeros();
    for (c, &w) in pairs.iter().zip(weights) {
        h += w * (Vector3::from(c.p) - pc) * (Vector3::from(c.q) - qc).transpose();
    }
    let svd = h.svd(true, true);
    let (u, v_t) = (svd.u?, svd.v_t?);
    let v = v_t.transpose();
    let d = (v * u.transpose()).determinant().signum();
    let rotation = v * Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, d)) * u.transpose();
    // q = R p + t' with t' = R t.
    let t_prime = qc - rotation * pc;
    Some(RigidPose { rotation, translation: rotation.transpose() * t_prime })
}

/// Geodesic angle between two rotations, in degrees.
pub fn rotation_error(r_hat: &Matrix3<f64>, r_star: &Matrix3<f64>) -> f64 {
    let c = (((r_hat.transpose() * r_star).trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
    c.acos().to_degrees()
}

pub fn translation_error(t_hat: &Vector3<f64>, t_star: &Vector3<f64>) -> f64 {
    (t_hat - t_star).norm()
}
