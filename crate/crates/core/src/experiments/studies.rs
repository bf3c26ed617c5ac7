use super::plan::{ExperimentPlan, Scheme, WindowSpec};
use super::trials::{run_point, ProgressEstimate, TrialSummary};
use crate::analytic::{AnalyticCurve, ModelParams};
use crate::error::{invalid, Error, Result};
use crate::simcore::SimWindow;

/// Analytic progress values at one parameter point; `None` where a formula
/// does not apply (noise, or more than one antenna for the lower bound).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticValues {
    pub nfp: Option<f64>,
    pub msr_upper: Option<f64>,
    pub baccelli_lower: Option<f64>,
}

impl AnalyticValues {
    pub fn at(params: &ModelParams) -> Self {
        let eval = |curve: AnalyticCurve| curve.progress(params).ok();
        Self {
            nfp: eval(AnalyticCurve::Nfp),
            msr_upper: eval(AnalyticCurve::MsrUpper),
            baccelli_lower: eval(AnalyticCurve::BaccelliLower),
        }
    }

    /// Analytic counterpart of a simulated scheme.
    pub fn for_scheme(&self, scheme: Scheme) -> Option<f64> {
        match scheme {
            Scheme::Nfp => self.nfp,
            Scheme::Msr => self.msr_upper,
            Scheme::ModifiedMsr => self.baccelli_lower,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Swept value, `None` for a plan without a sweep axis.
    pub value: Option<f64>,
    pub params: ModelParams,
    pub window: SimWindow,
    /// Simulation result, or the error message for a failed point.
    pub outcome: std::result::Result<TrialSummary, String>,
    pub analytic: AnalyticValues,
}

/// Parameter points of a plan: one per swept value, or the base point.
pub fn sweep_points(plan: &ExperimentPlan) -> Result<Vec<(Option<f64>, ModelParams)>> {
    match &plan.sweep {
        None => Ok(vec![(None, plan.params)]),
        Some(axis) if axis.values.is_empty() => Ok(vec![(None, plan.params)]),
        Some(axis) => axis
            .values
            .iter()
            .map(|&v| Ok((Some(v), axis.field.apply(&plan.params, v)?)))
            .collect(),
    }
}

/// Runs every sweep point with its own seed branch and attaches analytic
/// values. A failing point is recorded in its row and the sweep continues.
pub fn sweep(plan: &ExperimentPlan) -> Result<Vec<SweepRow>> {
    plan.validate()?;
    let points = sweep_points(plan)?;
    let mut rows = Vec::with_capacity(points.len());
    for (index, (value, params)) in points.into_iter().enumerate() {
        let window = plan.window.resolve(params.lambda)?;
        let outcome = run_point(
            &params,
            &window,
            &plan.schemes,
            plan.trials,
            plan.master_seed,
            index as u64,
        )
        .map_err(|e| e.to_string());
        rows.push(SweepRow {
            value,
            params,
            window,
            outcome,
            analytic: AnalyticValues::at(&params),
        });
    }
    Ok(rows)
}

const MIN_SIM_GRID: usize = 15;
const GRID_MUST_COVER: (f64, f64) = (0.005, 0.2);

/// Simulated results at each transmission probability of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PGridPoint {
    pub p: f64,
    pub summary: TrialSummary,
}

/// Grid argmax of simulated density of progress.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedOptimum {
    pub scheme: Scheme,
    pub index: usize,
    pub p: f64,
    pub density: f64,
    pub density_ci_halfwidth: f64,
    /// Values of p closer to the argmax than to any other grid point.
    pub cell: (f64, f64),
    /// Whether the best point's CI is disjoint from the runner-up's.
    pub significant: bool,
    pub runner_up_index: Option<usize>,
}

impl SimulatedOptimum {
    pub fn cell_contains(&self, p: f64) -> bool {
        self.cell.0 <= p && p <= self.cell.1
    }
}

fn validate_sim_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < MIN_SIM_GRID {
        return Err(invalid(
            "p_grid",
            format!("needs at least {MIN_SIM_GRID} points, got {}", grid.len()),
        ));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(invalid("p_grid", "values must be strictly increasing"));
    }
    if !(grid[0] > 0.0 && grid[grid.len() - 1] < 1.0) {
        return Err(invalid("p_grid", "values must lie in (0, 1)"));
    }
    if grid[0] > GRID_MUST_COVER.0 || grid[grid.len() - 1] < GRID_MUST_COVER.1 {
        return Err(invalid(
            "p_grid",
            format!(
                "must span at least [{}, {}]",
                GRID_MUST_COVER.0, GRID_MUST_COVER.1
            ),
        ));
    }
    Ok(())
}

/// Simulates the plan's schemes at each p of `grid` (point index = grid
/// position).
pub fn simulate_p_grid(plan: &ExperimentPlan, grid: &[f64]) -> Result<Vec<PGridPoint>> {
    plan.validate()?;
    validate_sim_grid(grid)?;
    grid.iter()
        .enumerate()
        .map(|(i, &p)| {
            let params = plan.params.with_p(p);
            let window = plan.window.resolve(params.lambda)?;
            let summary = run_point(
                &params,
                &window,
                &plan.schemes,
                plan.trials,
                plan.master_seed,
                i as u64,
            )?;
            Ok(PGridPoint { p, summary })
        })
        .collect()
}

/// Grid argmax for `scheme`; ties go to the smaller p.
pub fn optimum_from_grid(points: &[PGridPoint], scheme: Scheme) -> Result<SimulatedOptimum> {
    let estimates: Vec<&ProgressEstimate> = points
        .iter()
        .map(|pt| {
            pt.summary
                .estimate(scheme)
                .ok_or_else(|| Error::Domain(format!("scheme {} was not simulated", scheme.name())))
        })
        .collect::<Result<_>>()?;
    if estimates.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    let mut order: Vec<usize> = (0..estimates.len()).collect();
    order.sort_by(|&a, &b| {
        estimates[b]
            .density_of_progress
            .total_cmp(&estimates[a].density_of_progress)
            .then(a.cmp(&b))
    });
    let best = order[0];
    let runner_up = order.get(1).copied();
    let e = estimates[best];
    let significant = runner_up.is_some_and(|r| {
        let o = estimates[r];
        e.density_of_progress - e.density_ci_halfwidth
            > o.density_of_progress + o.density_ci_halfwidth
    });
    let ps: Vec<f64> = points.iter().map(|pt| pt.p).collect();
    let lo = if best == 0 {
        ps[0]
    } else {
        0.5 * (ps[best - 1] + ps[best])
    };
    let hi = if best + 1 == ps.len() {
        ps[best]
    } else {
        0.5 * (ps[best] + ps[best + 1])
    };
    Ok(SimulatedOptimum {
        scheme,
        index: best,
        p: ps[best],
        density: e.density_of_progress,
        density_ci_halfwidth: e.density_ci_halfwidth,
        cell: (lo, hi),
        significant,
        runner_up_index: runner_up,
    })
}

/// Grid search for the simulated optimal transmission probability.
pub fn find_optimal_p_simulated(
    plan: &ExperimentPlan,
    scheme: Scheme,
    grid: &[f64],
) -> Result<SimulatedOptimum> {
    let plan = ExperimentPlan {
        schemes: vec![scheme],
        ..plan.clone()
    };
    optimum_from_grid(&simulate_p_grid(&plan, grid)?, scheme)
}

/// Linear grid of `points` values over `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1).max(1) as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub lambda: f64,
    pub window: SimWindow,
    pub summary: TrialSummary,
    /// `√(λ / λ₀)` relative to the first density.
    pub expected_ratio: f64,
    /// Per scheme: simulated density ratio to the first row and its 95%
    /// half-width from the two relative CIs combined.
    pub ratios: Vec<(Scheme, f64, f64)>,
}

/// Runs the plan at each density with the window rescaled as `1/√λ` and
/// the same seed branch, so the snapshots are scaled copies of each other.
pub fn scaling_study(plan: &ExperimentPlan, lambdas: &[f64]) -> Result<Vec<ScalingRow>> {
    plan.validate()?;
    if lambdas.len() < 2 {
        return Err(invalid("lambdas", "at least two densities are required"));
    }
    let base_window = plan.window.resolve(plan.params.lambda)?;
    let mut rows: Vec<ScalingRow> = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let params = plan.params.with_lambda(lambda);
        params.validate()?;
        let window = match plan.window {
            WindowSpec::ExpectedNodes { .. } => plan.window.resolve(lambda)?,
            WindowSpec::Side { .. } => SimWindow {
                side: base_window.side * (plan.params.lambda / lambda).sqrt(),
                boundary: base_window.boundary,
            },
        };
        let summary = run_point(
            &params,
            &window,
            &plan.schemes,
            plan.trials,
            plan.master_seed,
            0,
        )?;
        let (expected_ratio, ratios) = match rows.first() {
            None => (1.0, plan.schemes.iter().map(|&s| (s, 1.0, 0.0)).collect()),
            Some(first) => {
                let ratios = plan
                    .schemes
                    .iter()
                    .map(|&s| {
                        let a = first.summary.estimate(s).expect("scheme simulated");
                        let b = summary.estimate(s).expect("scheme simulated");
                        let ratio = b.density_of_progress / a.density_of_progress;
                        let rel = ((a.density_ci_halfwidth / a.density_of_progress).powi(2)
                            + (b.density_ci_halfwidth / b.density_of_progress).powi(2))
                        .sqrt();
                        (s, ratio, ratio * rel)
                    })
                    .collect();
                ((lambda / first.lambda).sqrt(), ratios)
            }
        };
        rows.push(ScalingRow {
            lambda,
            window,
            summary,
            expected_ratio,
            ratios,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{run_trials, SweepAxis, SweepField};
    use crate::simcore::Boundary;

    fn plan() -> ExperimentPlan {
        ExperimentPlan {
            window: WindowSpec::ExpectedNodes {
                nodes: 200.0,
                boundary: Boundary::Torus,
            },
            trials: 40,
            ..ExperimentPlan::default()
        }
    }

    #[test]
    fn single_point_sweep_equals_run_trials() {
        let mut p = plan();
        p.sweep = Some(SweepAxis {
            field: SweepField::P,
            values: vec![0.05],
        });
        let rows = sweep(&p).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(
            rows[0].outcome.as_ref().unwrap(),
            &run_trials(&plan()).unwrap()
        );
        assert!(rows[0].analytic.baccelli_lower.is_some());
    }

    #[test]
    fn sweep_without_axis_has_one_row() {
        let rows = sweep(&plan()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].value, None);
    }

    #[test]
    fn sweep_records_analytic_gaps() {
        let mut p = plan();
        p.sweep = Some(SweepAxis {
            field: SweepField::Antennas,
            values: vec![1.0, 3.0],
        });
        let rows = sweep(&p).unwrap();
        assert!(rows[0].analytic.baccelli_lower.is_some());
        assert!(rows[1].analytic.baccelli_lower.is_none());
        assert!(rows[1].analytic.msr_upper.is_some());
    }

    #[test]
    fn grid_requirements() {
        let p = plan();
        assert!(simulate_p_grid(&p, &linear_grid(0.005, 0.2, 10)).is_err());
        assert!(simulate_p_grid(&p, &linear_grid(0.01, 0.2, 20)).is_err());
        assert!(simulate_p_grid(&p, &linear_grid(0.005, 0.15, 20)).is_err());
    }

    #[test]
    fn optimum_cell_and_ties() {
        let params = ModelParams::default();
        let mk = |p: f64, v: f64| PGridPoint {
            p,
            summary: TrialSummary {
                estimates: vec![(
                    Scheme::Msr,
                    ProgressEstimate::from_samples(&params, vec![v, v + 0.01, v - 0.01]),
                )],
                resampled_trials: 0,
            },
        };
        let pts = vec![mk(0.1, 1.0), mk(0.2, 3.0), mk(0.3, 3.0), mk(0.4, 1.0)];
        let opt = optimum_from_grid(&pts, Scheme::Msr).unwrap();
        assert_eq!(opt.index, 1);
        assert!(!opt.significant);
        assert!((opt.cell.0 - 0.15).abs() < 1e-12 && (opt.cell.1 - 0.25).abs() < 1e-12);
        let pts = vec![mk(0.1, 1.0), mk(0.2, 3.0), mk(0.3, 2.0)];
        assert!(optimum_from_grid(&pts, Scheme::Msr).unwrap().significant);
        assert!(optimum_from_grid(&pts, Scheme::Nfp).is_err());
    }

    #[test]
    fn scaling_with_rescaled_window_is_exact() {
        let rows = scaling_study(&plan(), &[1.0, 4.0, 100.0]).unwrap();
        for row in &rows[1..] {
            for &(_, ratio, _) in &row.ratios {
                assert!(
                    (ratio / row.expected_ratio - 1.0).abs() < 1e-6,
                    "{ratio} vs {}",
                    row.expected_ratio
                );
            }
        }
    }
}
