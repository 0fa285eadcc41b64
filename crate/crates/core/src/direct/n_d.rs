use std::collections::{BTreeMap, BTreeSet};

use super::select::{improvement_target, select_groups};
use super::{DirectConfig, DirectError, DirectResult, OrdF64, StopRule};
use crate::interval::IntervalBox;

struct Rect {
    center: Vec<f64>,
    levels: Vec<u32>,
    value: f64,
}

impl Rect {
    fn divisions(&self) -> u32 {
        self.levels.iter().sum()
    }
}

/// Minimizes a function over a box with the classic multi-dimensional
/// DIRECT scheme on the normalized unit cube.
pub fn minimize_nd<F>(mut objective: F, domain: &IntervalBox, config: &DirectConfig) -> Result<DirectResult, DirectError>
where
    F: FnMut(&[f64]) -> f64,
{
    config.validate()?;
    let k = domain.dim();
    if domain.dims().iter().any(|d| !d.width().is_finite()) {
        return Err(DirectError::EmptyDomain);
    }
    let mut x = vec![0.0; k];
    let mut evals = 0usize;
    let mut eval = |u: &[f64], x: &mut [f64], evals: &mut usize| -> Result<f64, DirectError> {
        domain.from_unit(u, x);
        let v = objective(x);
        *evals += 1;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DirectError::NonFiniteObjective { at: x.to_vec() })
        }
    };

    let c0 = vec![0.5; k];
    let v0 = eval(&c0, &mut x, &mut evals)?;
    let mut best = (c0.clone(), v0);
    let mut rects = vec![Rect { center: c0, levels: vec![0; k], value: v0 }];
    let mut groups: BTreeMap<u32, BTreeSet<(OrdF64, usize)>> = BTreeMap::new();
    groups.entry(0).or_default().insert((OrdF64(v0), 0));
    // Every live rectangle with t divisions has side levels floor(t/k) or
    // ceil(t/k), so t alone fixes its size.
    let half_diag = |t: u32| -> f64 {
        let base = t / k as u32;
        let extra = (t % k as u32) as usize;
        let long = 3f64.powi(-(base as i32));
        let short = long / 3.0;
        0.5 * ((k - extra) as f64 * long * long + extra as f64 * short * short).sqrt()
    };
    let longest_side = |levels: &[u32]| -> f64 {
        domain
            .dims()
            .iter()
            .zip(levels)
            .map(|(d, &l)| d.width() * 3f64.powi(-(l as i32)))
            .fold(0.0, f64::max)
    };
    let retire = config.stop == StopRule::RetireInterval;

    loop {
        let reps: Vec<(u32, usize, f64)> = groups
            .iter()
            .rev()
            .filter_map(|(&t, set)| set.first().map(|&(v, seq)| (t, seq, v.0)))
            .collect();
        let points: Vec<(f64, f64)> = reps.iter().map(|&(t, _, v)| (half_diag(t), v)).collect();
        let mask = select_groups(&points, improvement_target(best.1, config.tolerance_phi));
        let selected: Vec<usize> = reps
            .iter()
            .zip(mask)
            .rev()
            .filter_map(|(&(_, seq, _), keep)| keep.then_some(seq))
            .collect();
        if selected.is_empty() {
            return Ok(finish(domain, best, evals, true));
        }
        for seq in selected {
            let min_level = *rects[seq].levels.iter().min().unwrap();
            let long_dims: Vec<usize> = (0..k).filter(|&j| rects[seq].levels[j] == min_level).collect();
            if evals + 2 * long_dims.len() > config.max_evals {
                return Ok(finish(domain, best, evals, false));
            }
            let t = rects[seq].divisions();
            let set = groups.get_mut(&t).unwrap();
            set.remove(&(OrdF64(rects[seq].value), seq));
            if set.is_empty() {
                groups.remove(&t);
            }
            let delta = 3f64.powi(-(min_level as i32) - 1);
            let mut probes = Vec::with_capacity(long_dims.len());
            for &j in &long_dims {
                let mut pair = [(Vec::new(), 0.0), (Vec::new(), 0.0)];
                for (slot, sign) in pair.iter_mut().zip([-1.0, 1.0]) {
                    let mut c = rects[seq].center.clone();
                    c[j] += sign * delta;
                    let v = eval(&c, &mut x, &mut evals)?;
                    if v < best.1 {
                        best = (c.clone(), v);
                    }
                    *slot = (c, v);
                }
                let w = pair[0].1.min(pair[1].1);
                probes.push((w, j, pair));
            }
            probes.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut levels = rects[seq].levels.clone();
            for (_, j, pair) in probes {
                levels[j] += 1;
                for (c, v) in pair {
                    let id = rects.len();
                    let r = Rect { center: c, levels: levels.clone(), value: v };
                    if !(retire && longest_side(&levels) < config.min_resolution) {
                        groups.entry(r.divisions()).or_default().insert((OrdF64(v), id));
                    }
                    rects.push(r);
                }
            }
            let value = rects[seq].value;
            let longest_new = longest_side(&levels);
            rects[seq].levels = levels;
            if longest_new >= config.min_resolution {
                groups.entry(rects[seq].divisions()).or_default().insert((OrdF64(value), seq));
            } else if retire {
                continue;
            } else {
                return Ok(finish(domain, best, evals, true));
            }
        }
    }
}

fn finish(domain: &IntervalBox, best: (Vec<f64>, f64), evals: usize, converged: bool) -> DirectResult {
    let mut x = vec![0.0; domain.dim()];
    domain.from_unit(&best.0, &mut x);
    DirectResult { minimizer: x, min_value: best.1, evals, converged }
}
