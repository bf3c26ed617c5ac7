//! Monte Carlo orchestration: trials with confidence intervals, parameter
//! sweeps, simulated contention optimization and the density scaling study.

mod capture;
mod plan;
pub mod seed;
mod studies;
mod trials;

pub use capture::{run_capture_experiment, CaptureCell, CaptureExperiment};
pub use plan::{ExperimentPlan, Scheme, SweepAxis, SweepField, WindowSpec, MIN_TRIALS};
pub use studies::{
    find_optimal_p_simulated, linear_grid, optimum_from_grid, scaling_study, simulate_p_grid,
    sweep, sweep_points, AnalyticValues, PGridPoint, ScalingRow, SimulatedOptimum, SweepRow,
};
pub use trials::{run_trials, ProgressEstimate, TrialSummary};
