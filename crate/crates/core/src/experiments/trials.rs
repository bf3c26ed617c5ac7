use rayon::prelude::*;

use super::plan::{ExperimentPlan, Scheme};
use super::seed::{derive_seed, CHANNEL_STREAM, SNAPSHOT_STREAM};
use crate::analytic::{spatial_density_of_progress, ModelParams};
use crate::error::{Error, Result};
use crate::routing::{modified_msr_decision, msr_decision, nfp_decision};
use crate::simcore::{sample_snapshot, simulate_sinr_table, SimWindow};

/// Snapshot draws allowed per trial before giving up on finding a
/// transmitter to measure.
const MAX_ATTEMPTS: u64 = 10_000;
const Z_95: f64 = 1.96;

/// Monte Carlo estimate of mean progress per transmitter.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgressEstimate {
    pub mean_progress: f64,
    /// `λp · mean_progress`.
    pub density_of_progress: f64,
    /// 95% half-width for `mean_progress`.
    pub ci_halfwidth: f64,
    /// 95% half-width for `density_of_progress`.
    pub density_ci_halfwidth: f64,
    pub trials: usize,
    /// Transmitter-averaged progress of each trial, in trial order.
    pub samples: Vec<f64>,
}

impl ProgressEstimate {
    pub fn from_samples(params: &ModelParams, samples: Vec<f64>) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = if samples.len() > 1 {
            samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let ci = Z_95 * (var / n).sqrt();
        Self {
            mean_progress: mean,
            density_of_progress: spatial_density_of_progress(params, mean),
            ci_halfwidth: ci,
            density_ci_halfwidth: spatial_density_of_progress(params, ci),
            trials: samples.len(),
            samples,
        }
    }
}

/// Estimates for one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSummary {
    pub estimates: Vec<(Scheme, ProgressEstimate)>,
    /// Snapshot draws discarded for having no transmitter to measure.
    pub resampled_trials: usize,
}

impl TrialSummary {
    pub fn estimate(&self, scheme: Scheme) -> Option<&ProgressEstimate> {
        self.estimates
            .iter()
            .find(|(s, _)| *s == scheme)
            .map(|(_, e)| e)
    }
}

struct TrialOutcome {
    means: Vec<f64>,
    resampled: usize,
}

fn run_trial(
    params: &ModelParams,
    window: &SimWindow,
    schemes: &[Scheme],
    master_seed: u64,
    point: u64,
    trial: u64,
) -> Result<TrialOutcome> {
    for attempt in 0..MAX_ATTEMPTS {
        let path = |stream| [point, trial, attempt, stream];
        let snapshot = sample_snapshot(
            params,
            window,
            derive_seed(master_seed, &path(SNAPSHOT_STREAM)),
        )?;
        let eligible: Vec<usize> = snapshot.eligible_transmitters().collect();
        if eligible.is_empty() {
            continue;
        }
        let table = simulate_sinr_table(
            &snapshot,
            params,
            derive_seed(master_seed, &path(CHANNEL_STREAM)),
        )?;
        let count = eligible.len() as f64;
        let mut means = Vec::with_capacity(schemes.len());
        for &scheme in schemes {
            let mut total = 0.0;
            for &tx in &eligible {
                total += match scheme {
                    Scheme::Nfp => nfp_decision(&snapshot, &table, tx).progress,
                    Scheme::Msr => msr_decision(&snapshot, &table, tx).progress,
                    Scheme::ModifiedMsr => {
                        modified_msr_decision(&snapshot, &table, params, tx)?.progress
                    }
                };
            }
            means.push(total / count);
        }
        return Ok(TrialOutcome {
            means,
            resampled: attempt as usize,
        });
    }
    Err(Error::Numerical(format!(
        "no measurable transmitter in {MAX_ATTEMPTS} snapshots (expected {} transmitters per snapshot)",
        params.lambda_t() * window.area()
    )))
}

/// Runs `trials` independent trials at one parameter point. Seeds depend on
/// `(master_seed, point, trial)` only, so results do not depend on thread
/// count or scheduling.
pub(super) fn run_point(
    params: &ModelParams,
    window: &SimWindow,
    schemes: &[Scheme],
    trials: usize,
    master_seed: u64,
    point: u64,
) -> Result<TrialSummary> {
    params.validate()?;
    window.validate()?;
    let outcomes: Vec<TrialOutcome> = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(params, window, schemes, master_seed, point, t))
        .collect::<Result<_>>()?;
    let resampled_trials = outcomes.iter().map(|o| o.resampled).sum();
    let estimates = schemes
        .iter()
        .enumerate()
        .map(|(i, &scheme)| {
            let samples = outcomes.iter().map(|o| o.means[i]).collect();
            (scheme, ProgressEstimate::from_samples(params, samples))
        })
        .collect();
    Ok(TrialSummary {
        estimates,
        resampled_trials,
    })
}

/// Runs the plan at its base parameters (any sweep axis is ignored).
pub fn run_trials(plan: &ExperimentPlan) -> Result<TrialSummary> {
    plan.validate()?;
    let window = plan.window.resolve(plan.params.lambda)?;
    run_point(
        &plan.params,
        &window,
        &plan.schemes,
        plan.trials,
        plan.master_seed,
        0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::WindowSpec;
    use crate::simcore::Boundary;

    fn small_plan() -> ExperimentPlan {
        ExperimentPlan {
            window: WindowSpec::ExpectedNodes {
                nodes: 300.0,
                boundary: Boundary::Torus,
            },
            trials: 60,
            schemes: Scheme::ALL.to_vec(),
            ..ExperimentPlan::default()
        }
    }

    #[test]
    fn estimate_statistics() {
        let params = ModelParams {
            lambda: 4.0,
            p: 0.25,
            ..ModelParams::default()
        };
        let e = ProgressEstimate::from_samples(&params, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.mean_progress, 2.5);
        assert_eq!(e.density_of_progress, 2.5);
        let sd = (5.0f64 / 3.0).sqrt();
        assert!((e.ci_halfwidth - 1.96 * sd / 2.0).abs() < 1e-15);
        assert_eq!(e.trials, 4);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let plan = small_plan();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let three = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let a = one.install(|| run_trials(&plan)).unwrap();
        let b = three.install(|| run_trials(&plan)).unwrap();
        assert_eq!(a, b);
        let c = run_trials(&ExperimentPlan {
            master_seed: 2,
            ..plan
        })
        .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn impossible_threshold_gives_zero() {
        let mut plan = small_plan();
        plan.params.beta = 1e12;
        let s = run_trials(&plan).unwrap();
        for (_, e) in &s.estimates {
            assert!(e.mean_progress < 1e-3, "{}", e.mean_progress);
        }
    }

    #[test]
    fn nearly_no_receivers_gives_zero() {
        let mut plan = small_plan();
        plan.params.p = 0.999;
        let s = run_trials(&plan).unwrap();
        for (_, e) in &s.estimates {
            assert!(e.mean_progress < 0.05, "{}", e.mean_progress);
        }
    }

    #[test]
    fn sparse_transmitters_are_resampled() {
        let mut plan = small_plan();
        plan.params.p = 0.002;
        let s = run_trials(&plan).unwrap();
        // P(no transmitter) = e^{-0.6}
        assert!(s.resampled_trials > 10);
        assert_eq!(s.estimate(Scheme::Nfp).unwrap().trials, plan.trials);
    }

    #[test]
    fn msr_dominates_nfp_in_expectation() {
        let s = run_trials(&small_plan()).unwrap();
        let nfp = s.estimate(Scheme::Nfp).unwrap();
        let msr = s.estimate(Scheme::Msr).unwrap();
        assert!(msr.mean_progress > nfp.mean_progress);
        assert!(nfp.mean_progress > 0.0);
    }
}
