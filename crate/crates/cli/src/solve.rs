use gtm_core::engine::EngineConfig;
use gtm_core::problems::ProblemKind;
use gtm_core::refine::{fit_rigid, select_subset};
use gtm_core::simgen::InstanceData;
use gtm_core::SolverRegistry;

use crate::error::CliError;
use crate::format::{Pose, SolveSummary};

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub solver: String,
    pub xi: f64,
    pub engine: EngineConfig,
    /// Subset fraction for the rotation refinement; registration only.
    pub refine: Option<f64>,
}

impl SolveOptions {
    pub fn new(solver: &str, xi: f64) -> Self {
        Self { solver: solver.to_string(), xi, engine: EngineConfig::default(), refine: None }
    }
}

/// Runs one solver on one instance. Problem and solver failures come back
/// as a summary with `converged = false` and a reason; only an unknown
/// solver id or a misplaced refine flag is an error.
pub fn solve_instance(registry: &SolverRegistry, data: &InstanceData, opts: &SolveOptions) -> Result<SolveSummary, CliError> {
    let solver = registry.get(&opts.solver).map_err(|_| CliError::UnknownSolver(opts.solver.clone()))?;
    let kind = data.kind();
    if opts.refine.is_some() && kind != ProblemKind::Registration {
        return Err(CliError::InvalidFlag(format!("--refine only applies to registration, not {kind}")));
    }
    let mut summary = SolveSummary {
        solver: opts.solver.clone(),
        problem: kind,
        xi: opts.xi,
        epsilon: opts.engine.epsilon,
        solution: Vec::new(),
        objective: None,
        certified_gap: None,
        outer_iterations: 0,
        inner_evals: 0,
        wall_ms: 0.0,
        converged: false,
        reason: None,
        pose: None,
    };
    let problem = match data.build() {
        Ok(p) => p,
        Err(e) => {
            summary.reason = Some(e.to_string());
            return Ok(summary);
        }
    };
    let report = match solver.solve(problem.as_ref(), opts.xi, &opts.engine) {
        Ok(r) => r,
        Err(e) => {
            summary.reason = Some(e.to_string());
            return Ok(summary);
        }
    };
    summary.solution = report.solution;
    summary.objective = Some(report.objective);
    summary.certified_gap = Some(report.certified_gap);
    summary.outer_iterations = report.outer_iterations;
    summary.inner_evals = report.inner_evals;
    summary.wall_ms = report.wall_ms;
    summary.converged = report.converged;
    summary.reason = report.reason;

    if let (Some(fraction), InstanceData::Registration(pairs)) = (opts.refine, data) {
        let refined = select_subset(problem.as_ref(), &summary.solution, fraction).and_then(|subset| {
            let chosen: Vec<_> = subset.iter().map(|&i| pairs[i]).collect();
            fit_rigid(&chosen, opts.xi)
        });
        match refined {
            Ok(pose) => {
                let r = pose.rotation;
                summary.pose = Some(Pose {
                    rotation: [0, 1, 2].map(|i| [r[(i, 0)], r[(i, 1)], r[(i, 2)]]),
                    translation: [pose.translation.x, pose.translation.y, pose.translation.z],
                });
            }
            Err(e) => {
                summary.converged = false;
                summary.reason = Some(format!("refinement failed: {e}"));
            }
        }
    }
    Ok(summary)
}
