use std::f64::consts::FRAC_PI_3;

use nalgebra::{Rotation3, Vector3};

use super::{outlier_mask, GenConfig, InstanceData, LabeledInstance};
use crate::problems::PlanarMatch;
use crate::rng::SimRng;

pub const PLANAR_FOCAL: f64 = 800.0;
/// Smallest depth a point may have in either camera.
const MIN_DEPTH: f64 = 0.5;

/// Point in the first camera's (world) frame at distance `[4, 8]` from the
/// origin, uniform in direction over the half-space in front of the camera.
fn sample_point(rng: &mut SimRng) -> Vector3<f64> {
    loop {
        let p = Vector3::from(rng.unit_vector()) * rng.uniform_in(4.0, 8.0);
        if p.z >= MIN_DEPTH {
            return p;
        }
    }
}

fn project(p: &Vector3<f64>, rng: &mut SimRng, noise: f64) -> [f64; 2] {
    [
        (PLANAR_FOCAL * p.x / p.z + rng.truncated_normal(noise)) / PLANAR_FOCAL,
        (PLANAR_FOCAL * p.y / p.z + rng.truncated_normal(noise)) / PLANAR_FOCAL,
    ]
}

/// Two views related by `X1 = Ry(theta) X2 + t`, `t = rho (sin phi, 0, cos phi)`.
/// Labels are the search variables `(theta - phi, phi)`.
pub fn gen_planar(config: &GenConfig) -> LabeledInstance {
    let mut rng = SimRng::new(config.seed);
    let theta = rng.uniform_in(-FRAC_PI_3, FRAC_PI_3);
    let phi = rng.uniform_in(-FRAC_PI_3, FRAC_PI_3);
    let rho = rng.uniform_in(-2.0, 2.0);
    let rot = Rotation3::from_axis_angle(&Vector3::y_axis(), theta);
    let t = Vector3::new(phi.sin(), 0.0, phi.cos()) * rho;
    let to_second = |x1: &Vector3<f64>| rot.inverse() * (x1 - t);
    let mask = outlier_mask(&mut rng, config);
    let matches = mask
        .iter()
        .map(|&inlier| {
            let (x1, x2) = loop {
                let x1 = sample_point(&mut rng);
                let source = if inlier { x1 } else { sample_point(&mut rng) };
                let x2 = to_second(&source);
                if x2.z >= MIN_DEPTH {
                    break (x1, x2);
                }
            };
            PlanarMatch { u: project(&x1, &mut rng, config.noise_radius), up: project(&x2, &mut rng, config.noise_radius) }
        })
        .collect();
    LabeledInstance {
        data: InstanceData::Planar(matches),
        ground_truth: vec![theta - phi, phi],
        rotation: None,
        inlier_mask: mask,
    }
}
