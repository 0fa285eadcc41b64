//! Seeded synthetic instances with ground truth and inlier labels.

mod homography;
mod linreg;
mod planar;
mod registration;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::objective::SeparableProblem;
use crate::problems::{
    rotation_matrix, wrap_angle, Correspondence, HomographyMatch, HomographyProblem, LinearRegression, PlanarMatch,
    PlanarProblem, ProblemError, ProblemKind, RegistrationProblem, RegressionSample,
};
use crate::refine::{rotation_error, translation_error};

pub use homography::{gen_homography, CANVAS_HEIGHT, CANVAS_WIDTH};
pub use linreg::gen_linreg;
pub use planar::{gen_planar, PLANAR_FOCAL};
pub use registration::gen_registration;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub kind: ProblemKind,
    /// Number of data.
    pub m: usize,
    pub outlier_ratio: f64,
    /// Noise deviation in the problem's measurement units.
    pub noise_radius: f64,
    pub seed: u64,
    /// Number of unknowns; only used by regression.
    pub n: usize,
}

impl GenConfig {
    /// Experiment defaults per problem kind.
    pub fn defaults(kind: ProblemKind) -> Self {
        let (m, outlier_ratio, noise_radius) = match kind {
            ProblemKind::Linreg => (500, 0.9, 0.01),
            ProblemKind::Planar => (2000, 0.5, 2.0),
            ProblemKind::Registration => (1000, 0.9, 0.02),
            ProblemKind::Homography => (200, 0.8, 0.5),
        };
        Self { kind, m, outlier_ratio, noise_radius, seed: 0, n: 3 }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn with_outlier_ratio(mut self, r: f64) -> Self {
        self.outlier_ratio = r;
        self
    }

    pub fn with_noise(mut self, r: f64) -> Self {
        self.noise_radius = r;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..1.0).contains(&self.outlier_ratio) {
            return Err(format!("outlier ratio must lie in [0, 1), got {}", self.outlier_ratio));
        }
        if !(self.noise_radius >= 0.0) || !self.noise_radius.is_finite() {
            return Err(format!("noise must be nonnegative, got {}", self.noise_radius));
        }
        if self.m == 0 {
            return Err("need at least one datum".into());
        }
        if self.kind == ProblemKind::Linreg && self.n < 2 {
            return Err("regression needs n >= 2".into());
        }
        Ok(())
    }

    pub fn outlier_count(&self) -> usize {
        ((self.outlier_ratio * self.m as f64).round() as usize).min(self.m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "rows", rename_all = "lowercase")]
pub enum InstanceData {
    Linreg(Vec<RegressionSample>),
    Planar(Vec<PlanarMatch>),
    Registration(Vec<Correspondence>),
    Homography(Vec<HomographyMatch>),
}

impl InstanceData {
    pub fn kind(&self) -> ProblemKind {
        match self {
            InstanceData::Linreg(_) => ProblemKind::Linreg,
            InstanceData::Planar(_) => ProblemKind::Planar,
            InstanceData::Registration(_) => ProblemKind::Registration,
            InstanceData::Homography(_) => ProblemKind::Homography,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            InstanceData::Linreg(v) => v.len(),
            InstanceData::Planar(v) => v.len(),
            InstanceData::Registration(v) => v.len(),
            InstanceData::Homography(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The search problem with default domains.
    pub fn build(&self) -> Result<Box<dyn SeparableProblem>, ProblemError> {
        Ok(match self {
            InstanceData::Linreg(s) => Box::new(LinearRegression::with_default_domain(s)?),
            InstanceData::Planar(m) => Box::new(PlanarProblem::new(m)),
            InstanceData::Registration(c) => Box::new(RegistrationProblem::with_default_domain(c)?),
            InstanceData::Homography(m) => Box::new(HomographyProblem::with_default_focal(m)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledInstance {
    pub data: InstanceData,
    /// Ground truth in the search variables: `v*`, `(theta1, theta2)`,
    /// `t`, or `(alpha, beta, gamma, F)`.
    pub ground_truth: Vec<f64>,
    /// Registration only: the rotation of `q = R (p + t)`, row-major.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<[[f64; 3]; 3]>,
    pub inlier_mask: Vec<bool>,
}

pub fn generate(config: &GenConfig) -> Result<LabeledInstance, String> {
    config.validate()?;
    Ok(match config.kind {
        ProblemKind::Linreg => gen_linreg(config),
        ProblemKind::Planar => gen_planar(config),
        ProblemKind::Registration => gen_registration(config),
        ProblemKind::Homography => gen_homography(config),
    })
}

/// Position of outliers: a seeded subset of `round(ratio * M)` indices.
pub(crate) fn outlier_mask(rng: &mut crate::rng::SimRng, config: &GenConfig) -> Vec<bool> {
    let mut mask = vec![true; config.m];
    for i in rng.choose(config.m, config.outlier_count()) {
        mask[i] = false;
    }
    mask
}

/// Estimation errors against ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateError {
    /// `||v - v*||`, max angular error (degrees), `E_t`, or rotation error
    /// (degrees) depending on the problem.
    pub primary: f64,
    /// Relative focal error for homography.
    pub secondary: Option<f64>,
}

/// Larger of the two angle errors in degrees, with the search variables
/// compared modulo the sign twin `(theta1 + pi, theta2 + pi)` that leaves
/// every residual unchanged.
pub fn planar_angular_error(est: &[f64], truth: &[f64]) -> f64 {
    let direct = wrap_angle(est[0] - truth[0]).abs().max(wrap_angle(est[1] - truth[1]).abs());
    let twin = wrap_angle(est[0] + std::f64::consts::PI - truth[0])
        .abs()
        .max(wrap_angle(est[1] + std::f64::consts::PI - truth[1]).abs());
    direct.min(twin).to_degrees()
}

impl LabeledInstance {
    pub fn estimate_error(&self, solution: &[f64]) -> EstimateError {
        let gt = &self.ground_truth;
        match self.data.kind() {
            ProblemKind::Linreg => EstimateError {
                primary: solution.iter().zip(gt).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt(),
                secondary: None,
            },
            ProblemKind::Planar => EstimateError { primary: planar_angular_error(solution, gt), secondary: None },
            ProblemKind::Registration => EstimateError {
                primary: translation_error(&Vector3::from_column_slice(&solution[..3]), &Vector3::from_column_slice(&gt[..3])),
                secondary: None,
            },
            ProblemKind::Homography => EstimateError {
                primary: rotation_error(
                    &rotation_matrix(solution[0], solution[1], solution[2]),
                    &rotation_matrix(gt[0], gt[1], gt[2]),
                ),
                secondary: Some((solution[3] - gt[3]).abs() / gt[3]),
            },
        }
    }

    pub fn rotation_matrix(&self) -> Option<Matrix3<f64>> {
        self.rotation.map(|r| Matrix3::from_fn(|i, j| r[i][j]))
    }

    pub fn inlier_count(&self) -> usize {
        self.inlier_mask.iter().filter(|&&b| b).count()
    }
}
