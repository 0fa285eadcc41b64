//! Concrete residual families.

mod homography;
mod linreg;
mod planar;
mod registration;

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use homography::{rotation_matrix, HomographyMatch, HomographyProblem, DEFAULT_MAX_FOCAL, MIN_FOCAL};
pub use linreg::{LinearRegression, RegressionSample};
pub use planar::{planar_recover, PlanarMatch, PlanarProblem};
pub use registration::{default_translation_domain, Correspondence, RegistrationProblem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("match {index} sits at the image center; its angle is undefined")]
    DegenerateMatch { index: usize },
    #[error("non-finite value in datum {index}")]
    NonFinite { index: usize },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Linreg,
    Planar,
    Registration,
    Homography,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] = [
        ProblemKind::Linreg,
        ProblemKind::Planar,
        ProblemKind::Registration,
        ProblemKind::Homography,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::Linreg => "linreg",
            ProblemKind::Planar => "planar",
            ProblemKind::Registration => "registration",
            ProblemKind::Homography => "homography",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown problem '{s}' (expected linreg, planar, registration or homography)"))
    }
}

/// Wraps an angle to `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(TAU) - PI;
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}
