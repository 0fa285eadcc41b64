use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix3, Vector3};

use super::{outlier_mask, GenConfig, InstanceData, LabeledInstance};
use crate::problems::{rotation_matrix, HomographyMatch};
use crate::rng::SimRng;

pub const CANVAS_WIDTH: f64 = 2160.0;
pub const CANVAS_HEIGHT: f64 = 1480.0;

const MAX_POSE_DRAWS: usize = 10_000;

fn canvas_pixel(rng: &mut SimRng) -> [f64; 2] {
    loop {
        let z = [
            rng.uniform_in(-0.5 * CANVAS_WIDTH, 0.5 * CANVAS_WIDTH),
            rng.uniform_in(-0.5 * CANVAS_HEIGHT, 0.5 * CANVAS_HEIGHT),
        ];
        if z != [0.0, 0.0] {
            return z;
        }
    }
}

fn on_canvas(z: &[f64; 2]) -> bool {
    z[0].abs() <= 0.5 * CANVAS_WIDTH && z[1].abs() <= 0.5 * CANVAS_HEIGHT
}

/// Pixel of the second view for pixel `z` of the first, if visible.
fn transfer(r: &Matrix3<f64>, f: f64, z: &[f64; 2]) -> Option<[f64; 2]> {
    let x = r * Vector3::new(z[0], z[1], f);
    if x.z <= 0.0 {
        return None;
    }
    let zp = [f * x.x / x.z, f * x.y / x.z];
    (on_canvas(&zp) && zp != [0.0, 0.0]).then_some(zp)
}

/// Pure rotation about a shared optical center, `F ~ U[500, 1000]` and
/// `alpha, beta, gamma ~ U[-pi/2, pi/2]`. Poses whose views barely overlap
/// are redrawn so every inlier is visible in both images.
pub fn gen_homography(config: &GenConfig) -> LabeledInstance {
    let mut rng = SimRng::new(config.seed);
    let inliers_needed = config.m - config.outlier_count();
    let mut draws = 0;
    let (alpha, beta, gamma, f, r) = loop {
        draws += 1;
        let alpha = rng.uniform_in(-FRAC_PI_2, FRAC_PI_2);
        let beta = rng.uniform_in(-FRAC_PI_2, FRAC_PI_2);
        let gamma = rng.uniform_in(-FRAC_PI_2, FRAC_PI_2);
        let f = rng.uniform_in(500.0, 1000.0);
        let r = rotation_matrix(alpha, beta, gamma);
        // Require a visible fraction of at least 5% of the canvas.
        let probes = 400;
        let visible = (0..probes).filter(|_| transfer(&r, f, &canvas_pixel(&mut rng)).is_some()).count();
        if visible * 20 >= probes || draws >= MAX_POSE_DRAWS || inliers_needed == 0 {
            break (alpha, beta, gamma, f, r);
        }
    };
    let mask = outlier_mask(&mut rng, config);
    let noise = config.noise_radius;
    let matches = mask
        .iter()
        .map(|&inlier| {
            if inlier {
                let (z, zp) = loop {
                    let z = canvas_pixel(&mut rng);
                    if let Some(zp) = transfer(&r, f, &z) {
                        break (z, zp);
                    }
                };
                let mut jitter = |p: [f64; 2]| loop {
                    let q = [p[0] + rng.truncated_normal(noise), p[1] + rng.truncated_normal(noise)];
                    if q != [0.0, 0.0] {
                        return q;
                    }
                };
                HomographyMatch { z: jitter(z), zp: jitter(zp) }
            } else {
                HomographyMatch { z: canvas_pixel(&mut rng), zp: canvas_pixel(&mut rng) }
            }
        })
        .collect();
    LabeledInstance {
        data: InstanceData::Homography(matches),
        ground_truth: vec![alpha, beta, gamma, f],
        rotation: None,
        inlier_mask: mask,
    }
}
