//! Front end for the `gtm` binary: instance CSV schemas, the solve report,
//! and the benchmark harness.

pub mod args;
pub mod bench;
pub mod error;
pub mod format;
pub mod solve;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use gtm_core::direct::StopRule;
use gtm_core::engine::EngineConfig;
use gtm_core::simgen::{generate, GenConfig};
use gtm_core::SolverRegistry;

use args::{BenchArgs, Cli, Command, SimulateArgs, SolveArgs};
use bench::{run_bench, write_bench_csv, BenchSpec};
use error::CliError;
use format::{read_instance_file, sidecar_path, write_instance_csv, TruthSidecar};
use solve::{solve_instance, SolveOptions};

/// Worker count from `GTM_THREADS`, or `default` when unset.
pub fn threads_from_env(default: usize) -> Result<usize, CliError> {
    match std::env::var("GTM_THREADS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(t),
            _ => Err(CliError::InvalidFlag(format!("GTM_THREADS must be a positive integer, got '{s}'"))),
        },
        Err(_) => Ok(default),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn engine_config(epsilon: f64, max_nodes: Option<usize>, stop: StopRule) -> Result<EngineConfig, CliError> {
    let mut cfg = EngineConfig { epsilon, ..EngineConfig::default() };
    cfg.direct.stop = stop;
    if let Some(n) = max_nodes {
        cfg.max_nodes = n;
    }
    cfg.validate().map_err(|e| CliError::InvalidFlag(e.to_string()))?;
    Ok(cfg)
}

fn refine_fraction(refine: bool, fraction: f64) -> Result<Option<f64>, CliError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(CliError::InvalidFlag(format!("--subset-fraction must lie in (0, 1], got {fraction}")));
    }
    Ok(refine.then_some(fraction))
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let mut cfg = GenConfig::defaults(a.problem).with_n(a.n).with_seed(a.seed);
    if let Some(m) = a.m {
        cfg = cfg.with_m(m);
    }
    if let Some(r) = a.outlier_ratio {
        cfg = cfg.with_outlier_ratio(r);
    }
    if let Some(r) = a.noise {
        cfg = cfg.with_noise(r);
    }
    let instance = generate(&cfg).map_err(CliError::InvalidFlag)?;
    let mut out = create(&a.out)?;
    write_instance_csv(&instance.data, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(&a.out, e))?;
    let side = sidecar_path(&a.out);
    let mut w = create(&side)?;
    serde_json::to_writer_pretty(&mut w, &TruthSidecar::new(&cfg, &instance))
        .map_err(std::io::Error::from)
        .and_then(|_| writeln!(w))
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(&side, e))?;
    log::info!("wrote {} rows to {}", instance.data.len(), a.out.display());
    Ok(())
}

pub fn cmd_solve(a: &SolveArgs) -> Result<(), CliError> {
    if !(a.xi > 0.0 && a.xi.is_finite()) {
        return Err(CliError::InvalidFlag(format!("--xi must be positive and finite, got {}", a.xi)));
    }
    let mut engine = engine_config(a.epsilon, a.max_nodes, a.direct_stop)?;
    let threads = threads_from_env(1)?;
    engine.parallel_children = threads > 1;
    let opts = SolveOptions { solver: a.solver.clone(), xi: a.xi, engine, refine: refine_fraction(a.refine, a.subset_fraction)? };
    let registry = SolverRegistry::standard();
    registry.get(&opts.solver).map_err(|_| CliError::UnknownSolver(opts.solver.clone()))?;
    let data = read_instance_file(a.problem, &a.input)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::InvalidFlag(e.to_string()))?;
    let summary = pool.install(|| solve_instance(&registry, &data, &opts))?;
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    match &a.out {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{json}").and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))?;
        }
        None => println!("{json}"),
    }
    if summary.converged {
        Ok(())
    } else {
        Err(CliError::NotConverged(summary.reason.unwrap_or_else(|| "unknown reason".into())))
    }
}

pub fn cmd_bench(a: &BenchArgs) -> Result<(), CliError> {
    let solvers: Vec<String> = a.solvers.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    let spec = BenchSpec {
        problem: a.problem,
        sweep: a.sweep,
        values: a.values.clone(),
        trials: a.trials,
        solvers,
        seed_base: a.seed_base,
        m: a.m,
        n: a.n,
        noise: a.noise,
        xi: a.xi,
        outlier_ratio: a.outlier_ratio,
        engine: engine_config(a.epsilon, a.max_nodes, a.direct_stop)?,
        refine: refine_fraction(a.refine, a.subset_fraction)?,
    };
    let default_threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let threads = threads_from_env(default_threads)?;
    let rows = run_bench(&SolverRegistry::standard(), &spec, threads)?;
    match &a.out {
        Some(path) => {
            let mut w = create(path)?;
            write_bench_csv(&rows, &mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))?;
        }
        None => write_bench_csv(&rows, std::io::stdout().lock()).map_err(|e| CliError::io("<stdout>", e))?,
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Bench(a) => cmd_bench(a),
    }
}
