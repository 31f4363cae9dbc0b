//! Γ-convergence experiments and the rotation counterexample.
//!
//! [`run_gamma_experiment`] discretizes a plan at increasing levels and
//! solves the discrete problems between the discretized marginals.
//! [`verify_optimality_theorem`] chains the monotonicity search, the
//! finite-optimality audit and a Γ-run into one verdict.
//! [`run_counterexample`] builds the rotation `x ↦ x + α mod 1` and shows
//! that without continuity of the cost an ICM plan need not be optimal.

mod counterexample;
mod fixtures;
mod gamma;
mod verify;

pub use counterexample::{indicator_cost, run_counterexample, CounterexampleRun};
pub use fixtures::{diagonal_plan, rotation_plan, shift_plan, uniform_grid, Alpha};
pub use gamma::{run_gamma_experiment, GammaConfig, GammaRun, LevelRecord, RunStatus};
pub use verify::{verify_optimality_theorem, Stage, Verdict, VerifyConfig};
