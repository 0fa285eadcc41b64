use super::{outlier_mask, GenConfig, InstanceData, LabeledInstance};
use crate::problems::RegressionSample;
use crate::rng::SimRng;

/// `v* ~ N(0, 3 I)`, `a_i ~ N(0, I)`, `y_i = v* . a_i + noise`; outliers
/// draw `y_i ~ N(0, 2)` instead.
pub fn gen_linreg(config: &GenConfig) -> LabeledInstance {
    let mut rng = SimRng::new(config.seed);
    let n = config.n;
    let v: Vec<f64> = (0..n).map(|_| 3f64.sqrt() * rng.normal()).collect();
    let mask = outlier_mask(&mut rng, config);
    let samples = mask
        .iter()
        .map(|&inlier| {
            let a: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
            let clean: f64 = a.iter().zip(&v).map(|(x, y)| x * y).sum();
            let y = if inlier {
                clean + rng.truncated_normal(config.noise_radius)
            } else {
                2f64.sqrt() * rng.normal()
            };
            RegressionSample { a, y }
        })
        .collect();
    LabeledInstance { data: InstanceData::Linreg(samples), ground_truth: v, rotation: None, inlier_mask: mask }
}
