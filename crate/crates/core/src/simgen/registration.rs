use nalgebra::{Matrix3, UnitQuaternion, Vector3};

use super::{outlier_mask, GenConfig, InstanceData, LabeledInstance};
use crate::problems::Correspondence;
use crate::rng::SimRng;

fn shell_point(rng: &mut SimRng) -> Vector3<f64> {
    let d = rng.uniform_in(4.0, 8.0);
    Vector3::from(rng.unit_vector()) * d
}

/// Uniform rotation from a normalized Gaussian quaternion.
pub(crate) fn random_rotation(rng: &mut SimRng) -> Matrix3<f64> {
    let q = nalgebra::Quaternion::new(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner()
}

/// Source points on the `[4, 8]` shell, `q = R (p + t) + noise` with `t` in
/// the cube `[-0.5, 0.5]^3`; outlier targets are fresh shell points.
pub fn gen_registration(config: &GenConfig) -> LabeledInstance {
    let mut rng = SimRng::new(config.seed);
    let r = random_rotation(&mut rng);
    let t = Vector3::new(rng.uniform_in(-0.5, 0.5), rng.uniform_in(-0.5, 0.5), rng.uniform_in(-0.5, 0.5));
    let mask = outlier_mask(&mut rng, config);
    let pairs = mask
        .iter()
        .map(|&inlier| {
            let p = shell_point(&mut rng);
            let q = if inlier {
                let noise = Vector3::new(
                    rng.truncated_normal(config.noise_radius),
                    rng.truncated_normal(config.noise_radius),
                    rng.truncated_normal(config.noise_radius),
                );
                r * (p + t) + noise
            } else {
                shell_point(&mut rng)
            };
            Correspondence { p: p.into(), q: q.into() }
        })
        .collect();
    LabeledInstance {
        data: InstanceData::Registration(pairs),
        ground_truth: t.iter().copied().collect(),
        rotation: Some(std::array::from_fn(|i| std::array::from_fn(|j| r[(i, j)]))),
        inlier_mask: mask,
    }
}
