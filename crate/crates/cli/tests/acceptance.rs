//! Acceptance run: one PASS/FAIL line per criterion on stdout (written past
//! the test harness capture). Measured shortfalls are reported, not
//! panicked on. `ACCEPTANCE_ONLY=3,7` restricts the run to some criteria.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use gtm_cli::solve::{solve_instance, SolveOptions};
use gtm_core::direct::{minimize_1d, potentially_optimal, DirectConfig, StopRule};
use gtm_core::engine::{
    bnb_maximize_cm, bnb_minimize_tl, gtm_lower_bound, gtm_minimize, gtm_minimize_observed, gtm_upper_bound,
    nested_bnb_minimize, BnbInner, DirectInner, InnerSolver, SearchEvent, SolveReport,
};
use gtm_core::interval::{sine_range, square_range, Interval, IntervalBox};
use gtm_core::objective::{tl_objective, BoundFunction, SeparableProblem, SliceObjective, Underestimator};
use gtm_core::problems::ProblemKind;
use gtm_core::refine::{rotation_error, translation_error};
use gtm_core::rng::SimRng;
use gtm_core::simgen::{generate, GenConfig, LabeledInstance};
use gtm_core::{EngineConfig, SolverRegistry};
use nalgebra::{Matrix3, Vector3};

/// Node budget for the registration runs of criterion 5.
const REGISTRATION_NODES: usize = 5_000;
/// Node budget for the homography runs of criterion 6.
const HOMOGRAPHY_NODES: usize = 600;

fn say(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}");
    let _ = out.flush();
}

fn verdict(id: u8, pass: bool, detail: &str, secs: f64) -> bool {
    say(&format!("criterion {id}: {} {detail} [{secs:.1} s]", if pass { "PASS" } else { "FAIL" }));
    pass
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}

fn xi_for(kind: ProblemKind) -> f64 {
    match kind {
        ProblemKind::Linreg => 0.02,
        ProblemKind::Planar => 0.1,
        ProblemKind::Registration | ProblemKind::Homography => 2.5,
    }
}

/// Instances at the settings the criteria use.
fn criterion_instance(kind: ProblemKind, seed: u64) -> LabeledInstance {
    let cfg = match kind {
        ProblemKind::Planar => GenConfig::defaults(kind).with_m(500),
        _ => GenConfig::defaults(kind),
    };
    generate(&cfg.with_seed(seed)).unwrap()
}

fn random_sub_box(rng: &mut SimRng, domain: &IntervalBox) -> Vec<Interval> {
    domain
        .dims()
        .iter()
        .map(|d| {
            let w = d.width() * 0.5f64.powi(rng.below(10) as i32);
            let lo = rng.uniform_in(d.lo(), d.hi() - w);
            Interval::new(lo, lo + w)
        })
        .collect()
}

fn retire(cfg: &EngineConfig) -> EngineConfig {
    let mut c = *cfg;
    c.direct.stop = StopRule::RetireInterval;
    c
}

// ---- criterion 1 ----

fn regression_2d(seed: u64) -> Box<dyn SeparableProblem> {
    let cfg = GenConfig::defaults(ProblemKind::Linreg).with_m(50).with_n(2).with_outlier_ratio(0.7).with_seed(seed);
    generate(&cfg).unwrap().data.build().unwrap()
}

/// Grid minimum, largest neighbour difference quotient, and grid step.
fn grid_oracle(p: &dyn SeparableProblem, xi: f64, n: usize) -> (f64, f64, f64) {
    let d = p.domain();
    let at = |j: usize, k: usize| d.get(j).lo() + d.width(j) * k as f64 / n as f64;
    let mut prev: Vec<f64> = Vec::new();
    let mut best = f64::INFINITY;
    let mut lip: f64 = 0.0;
    for a in 0..=n {
        let row: Vec<f64> = (0..=n).map(|b| tl_objective(p, &[at(0, a), at(1, b)], xi)).collect();
        for b in 0..=n {
            best = best.min(row[b]);
            if b > 0 {
                lip = lip.max((row[b] - row[b - 1]).abs() / (d.width(1) / n as f64));
            }
            if a > 0 {
                lip = lip.max((row[b] - prev[b]).abs() / (d.width(0) / n as f64));
            }
        }
        prev = row;
    }
    (best, lip, d.width(0).max(d.width(1)) / n as f64)
}

fn criterion_1() -> bool {
    let xi = 0.02;
    let cfg = EngineConfig::default();
    let eps = cfg.epsilon;
    let mut solve_secs = 0.0;
    let t0 = Instant::now();
    let mut failed = Vec::new();
    let mut worst: f64 = 0.0;
    let mut kept = Vec::new();
    for seed in 0..20 {
        let p = regression_2d(seed);
        let (grid, lip, step) = grid_oracle(p.as_ref(), xi, 2000);
        let slack = lip * step;
        let t = Instant::now();
        let g = gtm_minimize(p.as_ref(), xi, &cfg).unwrap();
        let v = bnb_minimize_tl(p.as_ref(), xi, &cfg).unwrap();
        let n = nested_bnb_minimize(p.as_ref(), xi, &cfg).unwrap();
        solve_secs += t.elapsed().as_secs_f64();
        let grid_ok = [&g, &v, &n].iter().all(|r| r.converged && (r.objective - grid).abs() <= eps + slack);
        let dev = (g.objective - v.objective).abs().max((g.objective - n.objective).abs()).max((v.objective - n.objective).abs());
        worst = worst.max(dev);
        if !grid_ok || dev > 2.0 * eps {
            failed.push(seed);
        }
        kept.push((seed, p, grid, slack, v.objective, n.objective));
    }
    let secs = t0.elapsed().as_secs_f64();
    let pass = verdict(
        1,
        failed.is_empty(),
        &format!(
            "{}/20 seeds agree (failing {failed:?}, worst solver spread {worst:.3e} vs 2eps {:.1e}); solver time {solve_secs:.1} s",
            20 - failed.len(),
            2.0 * eps
        ),
        secs,
    );
    // Same failing seeds with the inner DIRECT retiring intervals instead of
    // ending the call.
    if !failed.is_empty() {
        let rcfg = retire(&cfg);
        let t = Instant::now();
        let mut ok = 0;
        for (seed, p, grid, slack, vo, no) in &kept {
            if !failed.contains(seed) {
                continue;
            }
            let g = gtm_minimize(p.as_ref(), xi, &rcfg).unwrap();
            if g.converged && (g.objective - grid).abs() <= eps + slack && (g.objective - vo).abs() <= 2.0 * eps && (g.objective - no).abs() <= 2.0 * eps {
                ok += 1;
            }
        }
        say(&format!(
            "  sensitivity: retire-interval inner stop agrees on {ok}/{} of those seeds [{:.1} s]",
            failed.len(),
            t.elapsed().as_secs_f64()
        ));
    }
    pass
}

// ---- criterion 2 ----

fn criterion_2() -> bool {
    let t0 = Instant::now();
    let direct = DirectConfig::default();
    let mut lower_viol = 0usize;
    let mut attained_viol = 0usize;
    let mut center_viol = 0usize;
    let mut checked = 0usize;
    for (k, kind) in ProblemKind::ALL.into_iter().enumerate() {
        let inst = criterion_instance(kind, 100 + k as u64);
        let p = inst.data.build().unwrap();
        let xi = xi_for(kind);
        let head = p.domain().head();
        let mut rng = SimRng::new(2000 + k as u64);
        for _ in 0..250 {
            let sub = IntervalBox::new(random_sub_box(&mut rng, &p.domain().tail()));
            let lb = gtm_lower_bound(p.as_ref(), &sub, xi, &direct).unwrap();
            let mut v = vec![0.0; p.dimension()];
            for _ in 0..1000 {
                v[0] = rng.uniform_in(head.lo(), head.hi());
                for (j, d) in sub.dims().iter().enumerate() {
                    v[j + 1] = rng.uniform_in(d.lo(), d.hi());
                }
                if lb > tl_objective(p.as_ref(), &v, xi) + 1e-9 {
                    lower_viol += 1;
                }
            }
            let (ub, v1) = gtm_upper_bound(p.as_ref(), &sub, xi, &direct).unwrap();
            let center = sub.center();
            let mut at = vec![v1];
            at.extend(&center);
            if ub != tl_objective(p.as_ref(), &at, xi) {
                attained_viol += 1;
            }
            at[0] = head.mid();
            if ub > tl_objective(p.as_ref(), &at, xi) {
                center_viol += 1;
            }
            checked += 1;
        }
    }
    let total = lower_viol + attained_viol + center_viol;
    verdict(
        2,
        total == 0,
        &format!(
            "{checked} sub-boxes x 1000 points: {lower_viol} lower-bound, {attained_viol} attainment, {center_viol} center violations"
        ),
        t0.elapsed().as_secs_f64(),
    )
}

// ---- criteria 3, 4 and their instances ----

struct Run {
    problem: Box<dyn SeparableProblem>,
    xi: f64,
    gtm_iterations: usize,
    regions: Vec<IntervalBox>,
}

fn observed_gtm(p: &dyn SeparableProblem, xi: f64, cfg: &EngineConfig) -> (SolveReport, Vec<IntervalBox>) {
    let mut regions = Vec::new();
    let r = gtm_minimize_observed(p, xi, cfg, &mut |e| {
        if let SearchEvent::Queued { region, .. } = e {
            regions.push(region.clone());
        }
    })
    .unwrap();
    (r, regions)
}

fn every_kth(regions: Vec<IntervalBox>, keep: usize) -> Vec<IntervalBox> {
    let step = (regions.len() / keep).max(1);
    regions.into_iter().step_by(step).take(keep).collect()
}

fn criterion_3(print: bool, runs: &mut Vec<Run>) -> bool {
    let cfg = EngineConfig::default();
    let t0 = Instant::now();
    let mut parts = Vec::new();
    let mut accurate = true;
    let mut gtm_at_last = 0.0;
    let mut cm_at_last = 0.0;
    for xi in [0.02, 0.12, 0.22, 0.42] {
        let mut g_err = Vec::new();
        let mut c_err = Vec::new();
        for seed in 0..10 {
            let inst = criterion_instance(ProblemKind::Linreg, seed);
            let p = inst.data.build().unwrap();
            let (g, regions) = observed_gtm(p.as_ref(), xi, &cfg);
            let c = bnb_maximize_cm(p.as_ref(), xi, &cfg).unwrap();
            g_err.push(inst.estimate_error(&g.solution).primary);
            c_err.push(inst.estimate_error(&c.solution).primary);
            runs.push(Run { problem: p, xi, gtm_iterations: g.outer_iterations, regions: every_kth(regions, 25) });
        }
        let (mg, mc) = (median(g_err), median(c_err));
        accurate &= mg < 0.05;
        parts.push(format!("xi {xi}: gtm {mg:.4}, bnb-cm {mc:.4}"));
        gtm_at_last = mg;
        cm_at_last = mc;
    }
    let secs = t0.elapsed().as_secs_f64();
    let separated = cm_at_last >= 5.0 * gtm_at_last;
    let in_time = secs < 600.0;
    if !print {
        return true;
    }
    verdict(
        3,
        accurate && separated && in_time,
        &format!(
            "median errors [{}]; bnb-cm/gtm at 0.42 = {:.1}x; runtime {} 10 min",
            parts.join("; "),
            cm_at_last / gtm_at_last.max(f64::MIN_POSITIVE),
            if in_time { "within" } else { "over" }
        ),
        secs,
    )
}

fn criterion_4(print: bool, runs: &mut Vec<Run>) -> bool {
    let cfg = EngineConfig::default();
    let xi = 0.1;
    let t0 = Instant::now();
    let mut parts = Vec::new();
    let mut accurate = true;
    let mut cm_fails = false;
    for ratio in [0.5, 0.8, 0.9] {
        let mut g_err = Vec::new();
        let mut c_err = Vec::new();
        let mut g_it = Vec::new();
        let mut c_it = Vec::new();
        for seed in 0..10 {
            let cfg_gen = GenConfig::defaults(ProblemKind::Planar).with_m(500).with_outlier_ratio(ratio).with_seed(seed);
            let inst = generate(&cfg_gen).unwrap();
            let p = inst.data.build().unwrap();
            let g = gtm_minimize(p.as_ref(), xi, &cfg).unwrap();
            let c = bnb_maximize_cm(p.as_ref(), xi, &cfg).unwrap();
            g_err.push(inst.estimate_error(&g.solution).primary);
            c_err.push(inst.estimate_error(&c.solution).primary);
            g_it.push(g.outer_iterations as f64);
            c_it.push(c.outer_iterations as f64);
            runs.push(Run { problem: p, xi, gtm_iterations: g.outer_iterations, regions: Vec::new() });
        }
        let (mg, mc) = (median(g_err), median(c_err));
        let (ig, ic) = (median(g_it), median(c_it));
        accurate &= mg < 1.0;
        if ratio == 0.9 {
            cm_fails = mc > 1.0 || ic > ig;
        }
        parts.push(format!("ratio {ratio}: gtm {mg:.3} deg / {ig} nodes, bnb-cm {mc:.3} deg / {ic} nodes"));
    }
    let secs = t0.elapsed().as_secs_f64();
    let in_time = secs < 600.0;
    if !print {
        return true;
    }
    verdict(
        4,
        accurate && cm_fails && in_time,
        &format!("medians [{}]; runtime {} 10 min", parts.join("; "), if in_time { "within" } else { "over" }),
        secs,
    )
}

// ---- criterion 5 ----

fn criterion_5() -> bool {
    let registry = SolverRegistry::standard();
    let mut opts = SolveOptions::new("gtm", 2.5);
    opts.engine.max_nodes = REGISTRATION_NODES;
    opts.refine = Some(0.02);
    let t0 = Instant::now();
    let mut e_t = Vec::new();
    let mut refined_r = Vec::new();
    let mut refined_t = Vec::new();
    let mut converged = 0;
    for seed in 0..10 {
        let inst = criterion_instance(ProblemKind::Registration, seed);
        let s = solve_instance(&registry, &inst.data, &opts).unwrap();
        converged += usize::from(s.converged);
        e_t.push(inst.estimate_error(&s.solution).primary);
        let pose = s.pose.expect("refined pose");
        let r_hat = Matrix3::from_fn(|i, j| pose.rotation[i][j]);
        refined_r.push(rotation_error(&r_hat, &inst.rotation_matrix().unwrap()));
        refined_t.push(translation_error(&Vector3::from(pose.translation), &Vector3::from_column_slice(&inst.ground_truth)));
    }
    let secs = t0.elapsed().as_secs_f64();
    let (mt, mr, mrt) = (median(e_t), median(refined_r), median(refined_t));
    let in_time = secs < 900.0;
    verdict(
        5,
        mt < 0.1 && mr < 3.0 && mrt < 0.5 && in_time,
        &format!(
            "gtm median E_t {mt:.4}; refined median E_R {mr:.3} deg, E_t {mrt:.4}; {converged}/10 converged within {REGISTRATION_NODES} nodes; runtime {} 15 min",
            if in_time { "within" } else { "over" }
        ),
        secs,
    )
}

// ---- criterion 6 ----

fn criterion_6() -> bool {
    let mut cfg = EngineConfig::default();
    cfg.max_nodes = HOMOGRAPHY_NODES;
    let t0 = Instant::now();
    let mut g_rot = Vec::new();
    let mut g_focal = Vec::new();
    let mut d_rot = Vec::new();
    let mut converged = 0;
    for seed in 0..10 {
        let inst = criterion_instance(ProblemKind::Homography, seed);
        let p = inst.data.build().unwrap();
        let g = gtm_minimize(p.as_ref(), 2.5, &cfg).unwrap();
        let d = gtm_core::engine::direct_nd_minimize(p.as_ref(), 2.5, &cfg).unwrap();
        converged += usize::from(g.converged);
        let eg = inst.estimate_error(&g.solution);
        g_rot.push(eg.primary);
        g_focal.push(eg.secondary.unwrap());
        d_rot.push(inst.estimate_error(&d.solution).primary);
    }
    let secs = t0.elapsed().as_secs_f64();
    let (mr, mf, md) = (median(g_rot), median(g_focal), median(d_rot));
    let in_time = secs < 1200.0;
    verdict(
        6,
        mr < 0.5 && mf < 0.05 && md > 5.0 && in_time,
        &format!(
            "gtm median rotation {mr:.3} deg, focal {:.2}%; direct-nd median rotation {md:.2} deg; {converged}/10 gtm converged within {HOMOGRAPHY_NODES} nodes; runtime {} 20 min",
            100.0 * mf,
            if in_time { "within" } else { "over" }
        ),
        secs,
    )
}

// ---- criterion 7 ----

/// Runs are deterministic, so a run capped at `k` nodes follows the uncapped
/// one for its first `k` nodes: hitting the cap shows the uncapped count is
/// at least `k`.
fn criterion_7(runs: &[Run]) -> bool {
    let t0 = Instant::now();
    let mut tl_bad = Vec::new();
    let mut nested_bad = Vec::new();
    for (k, run) in runs.iter().enumerate() {
        let p = run.problem.as_ref();
        let g = run.gtm_iterations;
        let tl_cap = EngineConfig { max_nodes: g + 1, ..EngineConfig::default() };
        let v = bnb_minimize_tl(p, run.xi, &tl_cap).unwrap();
        if v.outer_iterations <= g {
            tl_bad.push((k, g, v.outer_iterations));
        }
        let need = (g as f64 / 1.1).ceil() as usize;
        let nested_cap = EngineConfig { max_nodes: need + 1, ..EngineConfig::default() };
        let n = nested_bnb_minimize(p, run.xi, &nested_cap).unwrap();
        if (g as f64) > 1.1 * n.outer_iterations as f64 {
            nested_bad.push((k, g, n.outer_iterations));
        }
    }
    verdict(
        7,
        tl_bad.is_empty() && nested_bad.is_empty(),
        &format!(
            "{} instances: gtm < bnb-tl fails on {} {tl_bad:?}; gtm <= 1.1 nested fails on {} {nested_bad:?} (run, gtm, other)",
            runs.len(),
            tl_bad.len(),
            nested_bad.len()
        ),
        t0.elapsed().as_secs_f64(),
    )
}

// ---- criterion 8 ----

fn criterion_8(runs: &[Run]) -> bool {
    let cfg = EngineConfig::default();
    let t0 = Instant::now();
    let mut calls = 0usize;
    let mut direct_secs = 0.0;
    let mut bnb_secs = 0.0;
    let mut direct_evals = 0usize;
    let mut bnb_evals = 0usize;
    for run in runs {
        let p = run.problem.as_ref();
        let head = p.domain().head();
        for region in &run.regions {
            let mut f = Underestimator::new(p, region.dims(), run.xi);
            let t = Instant::now();
            let d = DirectInner.minimize(&mut f, head, &cfg).unwrap();
            direct_secs += t.elapsed().as_secs_f64();
            let mut f = Underestimator::new(p, region.dims(), run.xi);
            let t = Instant::now();
            let b = BnbInner.minimize(&mut f, head, &cfg).unwrap();
            bnb_secs += t.elapsed().as_secs_f64();
            direct_evals += d.evals;
            bnb_evals += b.evals;
            calls += 1;
        }
    }
    let n = calls.max(1) as f64;
    let (md, mb) = (direct_secs / n, bnb_secs / n);
    verdict(
        8,
        calls > 0 && mb > md,
        &format!(
            "{calls} bound functions: mean per call bnb {:.3} ms ({:.0} evals) vs direct {:.3} ms ({:.0} evals), ratio {:.2}",
            1e3 * mb,
            bnb_evals as f64 / n,
            1e3 * md,
            direct_evals as f64 / n,
            mb / md
        ),
        t0.elapsed().as_secs_f64(),
    )
}

// ---- criterion 9 ----

fn naive_potentially_optimal(records: &[(f64, f64)], incumbent: f64, phi: f64) -> Vec<usize> {
    let target = incumbent - phi * incumbent.abs().max(1e-12);
    (0..records.len())
        .filter(|&i| {
            let (wi, fi) = records[i];
            let mut k_lo = (fi - target) / wi;
            let mut k_hi = f64::INFINITY;
            for (j, &(wj, fj)) in records.iter().enumerate() {
                if j == i {
                    continue;
                }
                if wj < wi {
                    k_lo = k_lo.max((fi - fj) / (wi - wj));
                } else if wj > wi {
                    k_hi = k_hi.min((fj - fi) / (wj - wi));
                } else if fj < fi {
                    return false;
                }
            }
            k_hi > 0.0 && k_hi >= k_lo
        })
        .collect()
}

fn grid_min(f: &mut dyn BoundFunction, d: Interval, n: usize) -> f64 {
    (0..=n).map(|k| f.eval(d.lo() + d.width() * k as f64 / n as f64)).fold(f64::INFINITY, f64::min)
}

fn criterion_9() -> bool {
    let t0 = Instant::now();
    let literal = DirectConfig::default();
    let retiring = DirectConfig { stop: StopRule::RetireInterval, ..literal };
    let mut matched = 0;
    let mut matched_retire = 0;
    let mut worst: f64 = 0.0;
    let mut total = 0;
    let mut misses = Vec::new();
    for (k, kind) in ProblemKind::ALL.into_iter().enumerate() {
        let p = criterion_instance(kind, 300 + k as u64).data.build().unwrap();
        let xi = xi_for(kind);
        let head = p.domain().head();
        let mut rng = SimRng::new(900 + k as u64);
        for j in 0..25 {
            let sub = random_sub_box(&mut rng, &p.domain().tail());
            let center: Vec<f64> = sub.iter().map(Interval::mid).collect();
            let mut under = Underestimator::new(p.as_ref(), &sub, xi);
            let mut slice = SliceObjective::new(p.as_ref(), &center, xi);
            let f: &mut dyn BoundFunction = if j % 2 == 0 { &mut under } else { &mut slice };
            let oracle = grid_min(f, head, 1_000_000);
            let a = minimize_1d(|x| f.eval(x), head, &literal).unwrap().min_value;
            let b = minimize_1d(|x| f.eval(x), head, &retiring).unwrap().min_value;
            worst = worst.max((a - oracle).abs());
            if (a - oracle).abs() > 1e-3 {
                misses.push(format!("{kind} {}", if j % 2 == 0 { "lower" } else { "slice" }));
            }
            matched += usize::from((a - oracle).abs() <= 1e-3);
            matched_retire += usize::from((b - oracle).abs() <= 1e-3);
            total += 1;
        }
    }

    let mut rng = SimRng::new(99);
    let mut hull_ok = 0;
    for _ in 0..1000 {
        let k = 1 + rng.below(40);
        let records: Vec<(f64, f64)> = (0..k).map(|_| ((1 + rng.below(12)) as f64, rng.below(30) as f64)).collect();
        let fmin = records.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        let phi = [0.0, 1e-4, 0.5][rng.below(3)];
        hull_ok += usize::from(potentially_optimal(&records, fmin, phi) == naive_potentially_optimal(&records, fmin, phi));
    }
    let pass = verdict(
        9,
        matched == total && hull_ok == 1000,
        &format!("{matched}/{total} bound functions within 1e-3 of the grid (worst {worst:.3e}, misses {misses:?}); hull equals naive on {hull_ok}/1000"),
        t0.elapsed().as_secs_f64(),
    );
    say(&format!("  sensitivity: retire-interval inner stop matches {matched_retire}/{total}"));
    pass
}

// ---- criterion 10 ----

fn interval_suite() -> Result<(), String> {
    let mut rng = SimRng::new(10);
    let rand_interval = |rng: &mut SimRng| {
        let a = rng.uniform_in(-20.0, 20.0);
        Interval::new(a, a + rng.uniform_in(0.0, 10.0))
    };
    for round in 0..2000 {
        let a = rand_interval(&mut rng);
        let b = rand_interval(&mut rng);
        let (s, d, m) = (a + b, a - b, a * b);
        if s.lo() != a.lo() + b.lo() || s.hi() != a.hi() + b.hi() {
            return Err(format!("round {round}: sum endpoints"));
        }
        for _ in 0..20 {
            let x = rng.uniform_in(a.lo(), a.hi());
            let y = rng.uniform_in(b.lo(), b.hi());
            if !s.contains(x + y) || !d.contains(x - y) || !m.contains(x * y) {
                return Err(format!("round {round}: arithmetic containment"));
            }
        }
        let amp = rng.uniform_in(-5.0, 5.0);
        let phase = rng.uniform_in(-7.0, 7.0);
        let sr = sine_range(a, amp, phase);
        let off = rng.uniform_in(-30.0, 30.0);
        let qr = square_range(a, off);
        let (mut slo, mut shi, mut qlo, mut qhi) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for k in 0..=4000 {
            let x = a.lo() + a.width() * k as f64 / 4000.0;
            let y = amp * (x + phase).sin();
            let q = (x + off).powi(2);
            if y < sr.lo() - 1e-12 || y > sr.hi() + 1e-12 || q < qr.lo() - 1e-9 || q > qr.hi() + 1e-9 {
                return Err(format!("round {round}: range containment"));
            }
            (slo, shi, qlo, qhi) = (slo.min(y), shi.max(y), qlo.min(q), qhi.max(q));
        }
        let tol = 1e-5 * (1.0 + amp.abs());
        if (slo - sr.lo()).abs() > tol || (shi - sr.hi()).abs() > tol || (qlo - qr.lo()).abs() > 1e-3 || (qhi - qr.hi()).abs() > 1e-9 * (1.0 + qhi) {
            return Err(format!("round {round}: range exactness"));
        }
    }
    Ok(())
}

fn slice_constant(p: &dyn SeparableProblem, kind: ProblemKind, i: usize) -> f64 {
    let d = p.domain().head();
    let mut h = vec![0.0; p.codomain_width()];
    let mut at = |x: f64| {
        p.h(i, x, &mut h);
        h.clone()
    };
    match kind {
        ProblemKind::Linreg => (at(1.0)[0] - at(0.0)[0]).abs(),
        ProblemKind::Planar => at(0.0)[0].hypot(at(std::f64::consts::FRAC_PI_2)[0]),
        ProblemKind::Registration => 2.0 * at(d.lo())[0].sqrt().max(at(d.hi())[0].sqrt()),
        ProblemKind::Homography => {
            let z = at(0.0);
            z[0].hypot(z[1])
        }
    }
}

fn objective_suite() -> Result<(), String> {
    let mut rng = SimRng::new(1);
    for _ in 0..1_000_000 {
        let z1 = rng.uniform_in(-50.0, 50.0);
        let z2 = rng.uniform_in(-50.0, 50.0);
        let z3 = rng.uniform_in(-50.0, 50.0);
        if (z1.min(z3) - z2.min(z3)).abs() > (z1 - z2).abs() {
            return Err(format!("min inequality fails at ({z1}, {z2}, {z3})"));
        }
    }
    for kind in ProblemKind::ALL {
        for seed in 0..3 {
            let cfg = GenConfig::defaults(kind).with_m(40).with_outlier_ratio(0.6).with_seed(seed);
            let p = generate(&cfg).unwrap().data.build().unwrap();
            let xi = xi_for(kind);
            let total: f64 = (0..p.len()).map(|i| slice_constant(p.as_ref(), kind, i)).sum();
            let sub = random_sub_box(&mut rng, &p.domain().tail());
            let center: Vec<f64> = sub.iter().map(Interval::mid).collect();
            let d = p.domain().head();
            let mut under = Underestimator::new(p.as_ref(), &sub, xi);
            let mut slice = SliceObjective::new(p.as_ref(), &center, xi);
            for f in [&mut under as &mut dyn BoundFunction, &mut slice] {
                let n = 20_000;
                let ys: Vec<f64> = (0..=n).map(|k| f.eval(d.lo() + d.width() * k as f64 / n as f64)).collect();
                let q = ys.windows(2).map(|y| (y[1] - y[0]).abs() / (d.width() / n as f64)).fold(0.0, f64::max);
                if q > total * (1.0 + 1e-9) {
                    return Err(format!("{kind} seed {seed}: quotient {q} above {total}"));
                }
            }
        }
    }
    Ok(())
}

fn engine_suite() -> Result<(), String> {
    let cfg = GenConfig::defaults(ProblemKind::Linreg).with_m(100).with_n(3).with_outlier_ratio(0.8).with_seed(7);
    let p = generate(&cfg).unwrap().data.build().unwrap();
    let ecfg = EngineConfig::default();
    let run = || {
        let mut events = Vec::new();
        let r = gtm_minimize_observed(p.as_ref(), 0.1, &ecfg, &mut |e| events.push(e.clone())).unwrap();
        (r, events)
    };
    let (r, events) = run();
    let (r2, events2) = run();
    if r.solution != r2.solution || r.outer_iterations != r2.outer_iterations || events != events2 {
        return Err("repeated runs differ".into());
    }
    let mut leaves: Vec<IntervalBox> = Vec::new();
    let mut incumbents = Vec::new();
    for e in &events {
        match e {
            SearchEvent::Queued { region, .. } | SearchEvent::Pruned { region, .. } => leaves.push(region.clone()),
            SearchEvent::Branched { region, .. } => {
                let k = leaves.iter().position(|b| b == region).ok_or("branched an unqueued node")?;
                leaves.swap_remove(k);
            }
            SearchEvent::Incumbent { value } => incumbents.push(*value),
        }
    }
    if !incumbents.windows(2).all(|w| w[1] <= w[0]) || incumbents.last() != Some(&r.objective) {
        return Err("incumbent not monotone".into());
    }
    let root = p.domain().tail();
    let volume: f64 = leaves.iter().map(IntervalBox::volume).sum();
    if (volume - root.volume()).abs() > 1e-9 * root.volume() {
        return Err(format!("leaves cover {volume}, root {}", root.volume()));
    }
    for (i, a) in leaves.iter().enumerate() {
        for b in &leaves[i + 1..] {
            if a.dims().iter().zip(b.dims()).all(|(x, y)| x.lo() < y.hi() && y.lo() < x.hi()) {
                return Err("leaves overlap".into());
            }
        }
    }
    Ok(())
}

fn simgen_suite() -> Result<(), String> {
    for kind in ProblemKind::ALL {
        let cfg = GenConfig::defaults(kind).with_m(200).with_seed(7);
        if generate(&cfg).unwrap() != generate(&cfg).unwrap() {
            return Err(format!("{kind}: same seed, different instance"));
        }
        for seed in 0..5 {
            let inst = generate(&cfg.clone().with_noise(0.0).with_seed(seed)).unwrap();
            let p = inst.data.build().unwrap();
            let tol = if kind == ProblemKind::Homography { 1e-6 } else { 1e-9 };
            let r = gtm_core::objective::residuals(p.as_ref(), &inst.ground_truth);
            let outliers = inst.inlier_mask.iter().filter(|&&b| !b).count();
            if outliers != cfg.outlier_count() {
                return Err(format!("{kind} seed {seed}: {outliers} outliers"));
            }
            if let Some(i) = (0..r.len()).find(|&i| inst.inlier_mask[i] && r[i] >= tol) {
                return Err(format!("{kind} seed {seed}: inlier {i} residual {}", r[i]));
            }
        }
    }
    Ok(())
}

fn criterion_10() -> bool {
    let t0 = Instant::now();
    let suites: [(&str, fn() -> Result<(), String>); 4] =
        [("interval", interval_suite), ("objective", objective_suite), ("engine", engine_suite), ("simgen", simgen_suite)];
    let results: Vec<String> = suites
        .iter()
        .map(|(name, f)| match f() {
            Ok(()) => format!("{name} ok"),
            Err(e) => format!("{name} FAILED ({e})"),
        })
        .collect();
    let pass = results.iter().all(|r| r.ends_with(" ok"));
    verdict(10, pass, &results.join(", "), t0.elapsed().as_secs_f64())
}

fn selected() -> BTreeSet<u8> {
    match std::env::var("ACCEPTANCE_ONLY") {
        Ok(s) => s.split(',').filter_map(|x| x.trim().parse().ok()).collect(),
        Err(_) => (1..=10).collect(),
    }
}

#[test]
fn acceptance() {
    let only = selected();
    let t0 = Instant::now();
    let mut outcomes: Vec<(u8, bool)> = Vec::new();
    let run = |outcomes: &mut Vec<(u8, bool)>, id: u8, f: fn() -> bool| {
        if only.contains(&id) {
            outcomes.push((id, f()));
        }
    };
    run(&mut outcomes, 1, criterion_1);
    run(&mut outcomes, 2, criterion_2);

    let mut linreg_runs = Vec::new();
    let mut planar_runs = Vec::new();
    let need = |ids: &[u8]| ids.iter().any(|i| only.contains(i));
    if need(&[3, 7, 8]) {
        let pass = criterion_3(only.contains(&3), &mut linreg_runs);
        if only.contains(&3) {
            outcomes.push((3, pass));
        }
    }
    if need(&[4, 7]) {
        let pass = criterion_4(only.contains(&4), &mut planar_runs);
        if only.contains(&4) {
            outcomes.push((4, pass));
        }
    }
    run(&mut outcomes, 5, criterion_5);
    run(&mut outcomes, 6, criterion_6);
    let all_runs: Vec<Run> = linreg_runs.into_iter().chain(planar_runs).collect();
    if only.contains(&7) {
        outcomes.push((7, criterion_7(&all_runs)));
    }
    if only.contains(&8) {
        let linreg: Vec<Run> = all_runs.into_iter().filter(|r| !r.regions.is_empty()).collect();
        outcomes.push((8, criterion_8(&linreg)));
    }
    run(&mut outcomes, 9, criterion_9);
    run(&mut outcomes, 10, criterion_10);

    let passed = outcomes.iter().filter(|o| o.1).count();
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.1).map(|o| o.0).collect();
    say(&format!(
        "acceptance: {passed}/{} criteria pass; failing {failed:?} [{:.1} s]",
        outcomes.len(),
        t0.elapsed().as_secs_f64()
    ));
}
