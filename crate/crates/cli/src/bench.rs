//! Seeded sweeps over outlier ratio or threshold, one row per
//! (value, trial, solver) plus per-(value, solver) medians.

use std::io::Write;
use std::str::FromStr;

use gtm_core::engine::EngineConfig;
use gtm_core::problems::ProblemKind;
use gtm_core::refine::{rotation_error, translation_error};
use gtm_core::simgen::{generate, GenConfig, LabeledInstance};
use gtm_core::SolverRegistry;
use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;

use crate::error::CliError;
use crate::format::{fmt_f64, SolveSummary};
use crate::solve::{solve_instance, SolveOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    Outlier,
    Xi,
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "outlier" => Ok(Sweep::Outlier),
            "xi" => Ok(Sweep::Xi),
            _ => Err(format!("unknown sweep '{s}' (expected outlier or xi)")),
        }
    }
}

pub fn default_xi(kind: ProblemKind) -> f64 {
    match kind {
        ProblemKind::Linreg => 0.02,
        ProblemKind::Planar => 0.1,
        ProblemKind::Registration | ProblemKind::Homography => 2.5,
    }
}

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub problem: ProblemKind,
    pub sweep: Sweep,
    pub values: Vec<f64>,
    pub trials: usize,
    pub solvers: Vec<String>,
    pub seed_base: u64,
    /// Overrides of the generator defaults.
    pub m: Option<usize>,
    pub n: usize,
    pub noise: Option<f64>,
    /// Threshold when sweeping outlier ratio.
    pub xi: Option<f64>,
    /// Outlier ratio when sweeping the threshold.
    pub outlier_ratio: Option<f64>,
    pub engine: EngineConfig,
    pub refine: Option<f64>,
}

impl BenchSpec {
    pub fn new(problem: ProblemKind, sweep: Sweep, values: Vec<f64>, trials: usize, solvers: &[&str]) -> Self {
        Self {
            problem,
            sweep,
            values,
            trials,
            solvers: solvers.iter().map(|s| s.to_string()).collect(),
            seed_base: 0,
            m: None,
            n: 3,
            noise: None,
            xi: None,
            outlier_ratio: None,
            engine: EngineConfig::default(),
            refine: None,
        }
    }

    fn validate(&self, registry: &SolverRegistry) -> Result<(), CliError> {
        if self.solvers.is_empty() {
            return Err(CliError::InvalidFlag("--solvers must name at least one solver".into()));
        }
        if self.values.is_empty() {
            return Err(CliError::InvalidFlag("--values must hold at least one value".into()));
        }
        if self.trials == 0 {
            return Err(CliError::InvalidFlag("--trials must be positive".into()));
        }
        for s in &self.solvers {
            registry.get(s).map_err(|_| CliError::UnknownSolver(s.clone()))?;
        }
        if self.refine.is_some() && self.problem != ProblemKind::Registration {
            return Err(CliError::InvalidFlag("--refine only applies to registration".into()));
        }
        self.engine.validate().map_err(|e| CliError::InvalidFlag(e.to_string()))?;
        for &v in &self.values {
            self.cell_config(v, 0).validate().map_err(CliError::InvalidFlag)?;
            if !(self.cell_xi(v) > 0.0) {
                return Err(CliError::InvalidFlag(format!("threshold must be positive, got {}", self.cell_xi(v))));
            }
        }
        Ok(())
    }

    fn cell_config(&self, value: f64, trial: usize) -> GenConfig {
        let mut cfg = GenConfig::defaults(self.problem).with_n(self.n).with_seed(self.seed_base + trial as u64);
        if let Some(m) = self.m {
            cfg = cfg.with_m(m);
        }
        if let Some(r) = self.noise {
            cfg = cfg.with_noise(r);
        }
        match self.sweep {
            Sweep::Outlier => cfg.with_outlier_ratio(value),
            Sweep::Xi => match self.outlier_ratio {
                Some(r) => cfg.with_outlier_ratio(r),
                None => cfg,
            },
        }
    }

    fn cell_xi(&self, value: f64) -> f64 {
        match self.sweep {
            Sweep::Outlier => self.xi.unwrap_or_else(|| default_xi(self.problem)),
            Sweep::Xi => value,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub problem: ProblemKind,
    pub solver_id: String,
    pub xi: f64,
    pub outlier_ratio: f64,
    /// `None` on median rows.
    pub seed: Option<u64>,
    /// `||v - v*||`, max angular error (deg), `E_t`, or rotation error (deg).
    pub error_primary: f64,
    /// Relative focal error for homography, refined rotation error (deg)
    /// for registration with refinement.
    pub error_secondary: Option<f64>,
    pub objective: f64,
    pub gap: f64,
    pub outer_iterations: f64,
    pub inner_evals: f64,
    pub wall_ms: f64,
    /// `None` on median rows.
    pub converged: Option<bool>,
}

impl BenchRow {
    pub fn is_median(&self) -> bool {
        self.seed.is_none()
    }
}

pub const BENCH_HEADER: [&str; 14] = [
    "row",
    "problem",
    "solver_id",
    "xi",
    "outlier_ratio",
    "seed",
    "error_primary",
    "error_secondary",
    "objective",
    "gap",
    "outer_iterations",
    "inner_evals",
    "wall_ms",
    "converged",
];

fn errors(instance: &LabeledInstance, summary: &SolveSummary) -> (f64, Option<f64>) {
    match (&summary.pose, instance.rotation_matrix()) {
        (Some(pose), Some(r_star)) => {
            let r_hat = Matrix3::from_fn(|i, j| pose.rotation[i][j]);
            let t_star = Vector3::from_column_slice(&instance.ground_truth);
            (
                translation_error(&Vector3::from(pose.translation), &t_star),
                Some(rotation_error(&r_hat, &r_star)),
            )
        }
        _ => {
            let e = instance.estimate_error(&summary.solution);
            (e.primary, e.secondary)
        }
    }
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

/// Trial rows ordered by (value, trial, solver), then one median row per
/// (value, solver). Runs cells on `threads` workers.
pub fn run_bench(registry: &SolverRegistry, spec: &BenchSpec, threads: usize) -> Result<Vec<BenchRow>, CliError> {
    spec.validate(registry)?;
    let cells: Vec<(usize, usize)> =
        (0..spec.values.len()).flat_map(|v| (0..spec.trials).map(move |t| (v, t))).collect();
    let run_cell = |&(v, t): &(usize, usize)| -> Result<Vec<BenchRow>, CliError> {
        let value = spec.values[v];
        let cfg = spec.cell_config(value, t);
        let xi = spec.cell_xi(value);
        let instance = generate(&cfg).map_err(CliError::InvalidFlag)?;
        spec.solvers
            .iter()
            .map(|solver| {
                let opts = SolveOptions { solver: solver.clone(), xi, engine: spec.engine, refine: spec.refine };
                let s = solve_instance(registry, &instance.data, &opts)?;
                let (Some(objective), Some(gap)) = (s.objective, s.certified_gap) else {
                    return Err(CliError::NotConverged(format!(
                        "{solver} on {} seed {}: {}",
                        spec.problem,
                        cfg.seed,
                        s.reason.unwrap_or_default()
                    )));
                };
                let (error_primary, error_secondary) = errors(&instance, &s);
                log::debug!("{solver} value {value} seed {} error {error_primary:.4}", cfg.seed);
                Ok(BenchRow {
                    problem: spec.problem,
                    solver_id: solver.clone(),
                    xi,
                    outlier_ratio: cfg.outlier_ratio,
                    seed: Some(cfg.seed),
                    error_primary,
                    error_secondary,
                    objective,
                    gap,
                    outer_iterations: s.outer_iterations as f64,
                    inner_evals: s.inner_evals as f64,
                    wall_ms: s.wall_ms,
                    converged: Some(s.converged),
                })
            })
            .collect()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::InvalidFlag(e.to_string()))?;
    let per_cell: Vec<Vec<BenchRow>> = pool.install(|| cells.par_iter().map(run_cell).collect::<Result<_, _>>())?;
    let mut rows: Vec<BenchRow> = per_cell.into_iter().flatten().collect();

    let mut medians = Vec::new();
    for (v, &value) in spec.values.iter().enumerate() {
        for solver in &spec.solvers {
            let group: Vec<&BenchRow> = rows[v * spec.trials * spec.solvers.len()..(v + 1) * spec.trials * spec.solvers.len()]
                .iter()
                .filter(|r| &r.solver_id == solver)
                .collect();
            let med = |f: fn(&BenchRow) -> f64| median(group.iter().map(|r| f(r)).collect());
            let secondary: Vec<f64> = group.iter().filter_map(|r| r.error_secondary).collect();
            medians.push(BenchRow {
                problem: spec.problem,
                solver_id: solver.clone(),
                xi: spec.cell_xi(value),
                outlier_ratio: group[0].outlier_ratio,
                seed: None,
                error_primary: med(|r| r.error_primary),
                error_secondary: (secondary.len() == group.len()).then(|| median(secondary)),
                objective: med(|r| r.objective),
                gap: med(|r| r.gap),
                outer_iterations: med(|r| r.outer_iterations),
                inner_evals: med(|r| r.inner_evals),
                wall_ms: med(|r| r.wall_ms),
                converged: None,
            });
        }
    }
    rows.extend(medians);
    Ok(rows)
}

fn fmt_count(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{}", x as u64)
    } else {
        format!("{x}")
    }
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BENCH_HEADER)?;
    for r in rows {
        w.write_record([
            if r.is_median() { "median".to_string() } else { "trial".to_string() },
            r.problem.to_string(),
            r.solver_id.clone(),
            fmt_f64(r.xi),
            fmt_f64(r.outlier_ratio),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            fmt_f64(r.error_primary),
            r.error_secondary.map(fmt_f64).unwrap_or_default(),
            fmt_f64(r.objective),
            fmt_f64(r.gap),
            fmt_count(r.outer_iterations),
            fmt_count(r.inner_evals),
            fmt_f64(r.wall_ms),
            r.converged.map(|c| c.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()
}
