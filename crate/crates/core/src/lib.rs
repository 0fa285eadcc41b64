//! Globally optimal truncated-loss estimation.
//!
//! The objective `sum_i min(r_i(v), xi)` over separable residuals
//! `r_i(v) = ||h_i(v1) + g_i(v2..n)||` is minimized by a best-first
//! branch-and-bound over `v2..n` whose per-box bounds are one-dimensional
//! problems in `v1`, each solved by DIRECT.

pub mod direct;
pub mod engine;
pub mod interval;
pub mod objective;
pub mod problems;
pub mod refine;
pub mod rng;
pub mod simgen;

pub use direct::{DirectConfig, DirectResult};
pub use engine::{EngineConfig, SolveReport, Solver, SolverRegistry};
pub use interval::{Interval, IntervalBox};
pub use objective::{Norm, SeparableProblem};
