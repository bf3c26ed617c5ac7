//! Acceptance checks: simulation against the closed forms, and the closed
//! forms against brute-force oracles.
//!
//! Expensive studies shared by several criteria are computed once per
//! [`Validator`] and cached.

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{
    baccelli_g, msr_h, nfp_expected_progress, nfp_progress_quadrature_oracle, optimal_contention,
    AnalyticCurve, ContentionOptimum, ModelParams, PGrid,
};
use crate::error::{invalid, Result};
use crate::experiments::seed::derive_seed;
use crate::experiments::{
    find_optimal_p_simulated, linear_grid, run_capture_experiment, scaling_study, sweep,
    CaptureCell, CaptureExperiment, ExperimentPlan, ScalingRow, Scheme, SimulatedOptimum,
    SweepAxis, SweepField, SweepRow, WindowSpec, MIN_TRIALS,
};
use crate::oracles::{explicit_sinr, riemann_g, riemann_h};
use crate::simcore::{build_sinr_table, Boundary, ChannelSet, Point, SimWindow, Snapshot};

const SWEEP_P: [f64; 5] = [0.01, 0.02, 0.05, 0.1, 0.2];
const ANTENNAS: [usize; 3] = [1, 2, 3];
const TARGET_OPTIMA: [f64; 3] = [0.015, 0.03, 0.045];
const OPTIMUM_TOLERANCE: f64 = 0.005;
const NFP_RELATIVE_TOLERANCE: f64 = 0.03;
const TIGHTNESS_FLOOR: f64 = 0.6;
const GAIN_TARGET: f64 = 2.5;
const SCALING_LAMBDAS: [f64; 3] = [1.0, 4.0, 100.0];
const MICRO_INSTANCES: usize = 1000;
const MICRO_TOLERANCE: f64 = 1e-9;
const NFP_ORACLE_TOLERANCE: f64 = 1e-8;
const RIEMANN_TOLERANCE: f64 = 1e-6;
const RIEMANN_PANELS: usize = 1_000_000;
const RIEMANN_H_UPPER: f64 = 12.0;
const SIM_GRID_POINTS: usize = 15;

/// Grid for the analytic contention optimizer.
fn analytic_grid() -> PGrid {
    PGrid::log(0.002, 0.9, 60)
}

fn sim_grid() -> Vec<f64> {
    linear_grid(0.005, 0.2, SIM_GRID_POINTS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
}

impl Criterion {
    pub const ALL: [Criterion; 9] = [
        Criterion::A1,
        Criterion::A2,
        Criterion::A3,
        Criterion::A4,
        Criterion::A5,
        Criterion::A6,
        Criterion::A7,
        Criterion::A8,
        Criterion::A9,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Criterion::A1 => "A1",
            Criterion::A2 => "A2",
            Criterion::A3 => "A3",
            Criterion::A4 => "A4",
            Criterion::A5 => "A5",
            Criterion::A6 => "A6",
            Criterion::A7 => "A7",
            Criterion::A8 => "A8",
            Criterion::A9 => "A9",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Criterion::A1 => "capture frequency vs capture probability",
            Criterion::A2 => "simulated NFP density vs closed form",
            Criterion::A3 => "MSR upper bound holds and is tight",
            Criterion::A4 => "lower bound ordering and proximity to NFP",
            Criterion::A5 => "optimal contention probabilities",
            Criterion::A6 => "second-antenna gain at the optimum",
            Criterion::A7 => "density scaling and density-free optimum",
            Criterion::A8 => "downdate SINR vs explicit inversion",
            Criterion::A9 => "closed forms vs quadrature and Riemann sums",
        }
    }

    /// Case-insensitive parse of an id such as `a5`.
    pub fn parse(s: &str) -> Option<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.id().eq_ignore_ascii_case(s.trim()))
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Outcome of one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub passed: bool,
    /// Headline measured quantity.
    pub measured: String,
    pub tolerance: String,
    /// One line per checked point.
    pub details: Vec<String>,
}

impl CriterionReport {
    /// `A2 PASS simulated NFP density vs closed form | measured ... | tolerance ...`
    pub fn line(&self) -> String {
        format!(
            "{} {} {} | measured: {} | tolerance: {}",
            self.criterion.id(),
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion.title(),
            self.measured,
            self.tolerance
        )
    }
}

/// Scales and seed of a validation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationConfig {
    pub master_seed: u64,
    /// Trials per simulated point.
    pub trials: usize,
    /// Trials per capture-experiment cell.
    pub capture_trials: usize,
    /// Trials per point of the simulated optimum search in the scaling check.
    pub scaling_grid_trials: usize,
    /// Expected nodes per snapshot.
    pub nodes: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            master_seed: 1,
            trials: 1000,
            capture_trials: 10_000,
            scaling_grid_trials: 500,
            nodes: 1000.0,
        }
    }
}

impl ValidationConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("trials", self.trials),
            ("capture_trials", self.capture_trials),
            ("scaling_grid_trials", self.scaling_grid_trials),
        ] {
            if value < MIN_TRIALS {
                return Err(invalid(
                    name,
                    format!("must be >= {MIN_TRIALS}, got {value}"),
                ));
            }
        }
        if !(self.nodes >= 10.0 && self.nodes.is_finite()) {
            return Err(invalid(
                "nodes",
                format!("must be >= 10, got {}", self.nodes),
            ));
        }
        Ok(())
    }

    fn seed(&self, path: &[u64]) -> u64 {
        derive_seed(self.master_seed, path)
    }
}

/// Simulated MSR curve for one antenna count at the heavy-tailed setting.
#[derive(Debug, Clone, PartialEq)]
struct AntennaCurve {
    antennas: usize,
    optimum: ContentionOptimum,
    rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq)]
struct AntennaGrid {
    antennas: usize,
    analytic: ContentionOptimum,
    simulated: SimulatedOptimum,
}

#[derive(Debug, Clone, PartialEq)]
struct ScalingResult {
    rows: Vec<ScalingRow>,
    analytic: Vec<(f64, ContentionOptimum, ContentionOptimum)>,
    simulated: Vec<(f64, SimulatedOptimum)>,
}

/// Runs criteria and caches the studies they share.
#[derive(Debug, Default)]
pub struct Validator {
    config: ValidationConfig,
    light_tail: OnceLock<Result<(ContentionOptimum, Vec<SweepRow>)>>,
    heavy_tail: OnceLock<Result<Vec<AntennaCurve>>>,
    grids: OnceLock<Result<Vec<AntennaGrid>>>,
}

fn cached<T>(cell: &OnceLock<Result<T>>, init: impl FnOnce() -> Result<T>) -> Result<&T> {
    cell.get_or_init(init).as_ref().map_err(Clone::clone)
}

fn light_tail_params() -> ModelParams {
    ModelParams {
        lambda: 1.0,
        alpha: 4.0,
        beta: 1.0,
        antennas: 1,
        ..ModelParams::default()
    }
}

fn heavy_tail_params(antennas: usize) -> ModelParams {
    ModelParams {
        lambda: 1.0,
        alpha: 3.0,
        beta: 10.0,
        antennas,
        ..ModelParams::default()
    }
}

fn row_density(row: &SweepRow, scheme: Scheme) -> Result<(f64, f64)> {
    let summary = row.outcome.as_ref().map_err(|e| {
        crate::Error::Numerical(format!("simulation at p = {:?} failed: {e}", row.value))
    })?;
    let e = summary
        .estimate(scheme)
        .ok_or_else(|| crate::Error::Domain(format!("scheme {} missing", scheme.name())))?;
    Ok((e.density_of_progress, e.density_ci_halfwidth))
}

fn analytic_density(curve: AnalyticCurve, params: &ModelParams) -> Result<f64> {
    curve.density(params)
}

fn is_sweep_point(row: &SweepRow) -> bool {
    row.value.is_some_and(|v| SWEEP_P.contains(&v))
}

impl Validator {
    pub fn new(config: ValidationConfig) -> Self {
        Self {
            config,
            ..Self::default()
        }
    }

    pub fn config(&self) -> &ValidationConfig {
        &self.config
    }

    pub fn run(&self, criterion: Criterion) -> Result<CriterionReport> {
        self.config.validate()?;
        match criterion {
            Criterion::A1 => self.a1(),
            Criterion::A2 => self.a2(),
            Criterion::A3 => self.a3(),
            Criterion::A4 => self.a4(),
            Criterion::A5 => self.a5(),
            Criterion::A6 => self.a6(),
            Criterion::A7 => self.a7(),
            Criterion::A8 => self.a8(),
            Criterion::A9 => self.a9(),
        }
    }

    pub fn run_all(&self) -> Result<Vec<CriterionReport>> {
        Criterion::ALL.iter().map(|&c| self.run(c)).collect()
    }

    /// α = 4, β = 1, L = 1 sweep over the five standard p values and the
    /// MSR bound's optimum, plain torus.
    fn light_tail(&self) -> Result<&(ContentionOptimum, Vec<SweepRow>)> {
        cached(&self.light_tail, || {
            let params = light_tail_params();
            let optimum = optimal_contention(&params, AnalyticCurve::MsrUpper, &analytic_grid())?;
            let mut values = SWEEP_P.to_vec();
            values.push(optimum.p);
            let plan = ExperimentPlan {
                params,
                window: WindowSpec::ExpectedNodes {
                    nodes: self.config.nodes,
                    boundary: Boundary::Torus,
                },
                trials: self.config.trials,
                master_seed: self.config.seed(&[2]),
                sweep: Some(SweepAxis {
                    field: SweepField::P,
                    values,
                }),
                schemes: vec![Scheme::Nfp, Scheme::Msr],
            };
            Ok((optimum, sweep(&plan)?))
        })
    }

    /// α = 3, β = 10 MSR sweeps per antenna count, with far-field
    /// compensation on the torus.
    fn heavy_tail(&self) -> Result<&Vec<AntennaCurve>> {
        cached(&self.heavy_tail, || {
            ANTENNAS
                .iter()
                .map(|&antennas| {
                    let params = heavy_tail_params(antennas);
                    let optimum =
                        optimal_contention(&params, AnalyticCurve::MsrUpper, &analytic_grid())?;
                    let mut values = SWEEP_P.to_vec();
                    values.push(optimum.p);
                    let plan = ExperimentPlan {
                        params,
                        window: WindowSpec::ExpectedNodes {
                            nodes: self.config.nodes,
                            boundary: Boundary::TorusFarField,
                        },
                        trials: self.config.trials,
                        master_seed: self.config.seed(&[3, antennas as u64]),
                        sweep: Some(SweepAxis {
                            field: SweepField::P,
                            values,
                        }),
                        schemes: vec![Scheme::Msr],
                    };
                    Ok(AntennaCurve {
                        antennas,
                        optimum,
                        rows: sweep(&plan)?,
                    })
                })
                .collect()
        })
    }

    /// Analytic and simulated MSR optima per antenna count at α = 3, β = 10.
    fn grids(&self) -> Result<&Vec<AntennaGrid>> {
        cached(&self.grids, || {
            ANTENNAS
                .iter()
                .map(|&antennas| {
                    let params = heavy_tail_params(antennas);
                    let analytic =
                        optimal_contention(&params, AnalyticCurve::MsrUpper, &analytic_grid())?;
                    let plan = ExperimentPlan {
                        params,
                        window: WindowSpec::ExpectedNodes {
                            nodes: self.config.nodes,
                            boundary: Boundary::TorusFarField,
                        },
                        trials: self.config.trials,
                        master_seed: self.config.seed(&[5, antennas as u64]),
                        sweep: None,
                        schemes: vec![Scheme::Msr],
                    };
                    let simulated = find_optimal_p_simulated(&plan, Scheme::Msr, &sim_grid())?;
                    Ok(AntennaGrid {
                        antennas,
                        analytic,
                        simulated,
                    })
                })
                .collect()
        })
    }

    fn a1(&self) -> Result<CriterionReport> {
        let mut cells: Vec<(usize, f64, CaptureCell)> = Vec::new();
        for &antennas in &ANTENNAS {
            for alpha in [3.0, 4.0] {
                // far interference decays slowly at α = 3, so the field is larger
                let expected_interferers = if alpha < 3.5 { 40_000.0 } else { 4_000.0 };
                let exp = CaptureExperiment {
                    params: ModelParams {
                        lambda: 1.0,
                        p: 0.05,
                        alpha,
                        beta: 1.0,
                        antennas,
                        noise: 0.0,
                    },
                    betas: vec![1.0, 10.0],
                    normalized_means: vec![0.25, 1.0, 4.0],
                    expected_interferers,
                    trials: self.config.capture_trials,
                    master_seed: self.config.seed(&[1, antennas as u64, alpha as u64]),
                };
                for cell in run_capture_experiment(&exp)? {
                    cells.push((antennas, alpha, cell));
                }
            }
        }
        let total = cells.len();
        let inside = cells.iter().filter(|(_, _, c)| c.within_ci()).count();
        // same pass fraction as 16 of 18
        let required = (total * 16).div_ceil(18);
        let details = cells
            .iter()
            .map(|(l, alpha, c)| {
                format!(
                    "L={l} alpha={alpha} beta={} m={}: frequency {:.4} analytic {:.4} +/- {:.4} {}",
                    c.beta,
                    c.normalized_mean,
                    c.frequency,
                    c.analytic,
                    c.ci_halfwidth,
                    if c.within_ci() { "in" } else { "OUT" }
                )
            })
            .collect();
        Ok(CriterionReport {
            criterion: Criterion::A1,
            passed: inside >= required,
            measured: format!("{inside}/{total} cells inside the 95% binomial CI"),
            tolerance: format!(">= {required}/{total} cells"),
            details,
        })
    }

    fn a2(&self) -> Result<CriterionReport> {
        let (_, rows) = self.light_tail()?;
        let mut passed = true;
        let mut worst: f64 = 0.0;
        let mut details = Vec::new();
        for row in rows.iter().filter(|r| is_sweep_point(r)) {
            let (sim, ci) = row_density(row, Scheme::Nfp)?;
            let an = analytic_density(AnalyticCurve::Nfp, &row.params)?;
            let tol = ci.max(NFP_RELATIVE_TOLERANCE * an);
            let err = (sim - an).abs();
            passed &= err <= tol;
            worst = worst.max(err / tol);
            details.push(format!(
                "p={}: simulated {sim:.5} +/- {ci:.5}, closed form {an:.5}, |diff| {err:.2e} <= {tol:.2e}: {}",
                row.params.p,
                err <= tol
            ));
        }
        Ok(CriterionReport {
            criterion: Criterion::A2,
            passed,
            measured: format!("worst |sim - analytic| / tolerance = {worst:.3}"),
            tolerance: "max(CI, 3% relative) at every p".into(),
            details,
        })
    }

    fn a3(&self) -> Result<CriterionReport> {
        let (light_opt, light_rows) = self.light_tail()?;
        let mut curves: Vec<(String, f64, &[SweepRow])> =
            vec![("alpha=4 beta=1 L=1".into(), light_opt.p, light_rows)];
        for c in self.heavy_tail()? {
            curves.push((
                format!("alpha=3 beta=10 L={}", c.antennas),
                c.optimum.p,
                &c.rows,
            ));
        }
        let mut passed = true;
        let mut max_ratio: f64 = 0.0;
        let mut min_tightness = f64::INFINITY;
        let mut details = Vec::new();
        for (label, p_opt, rows) in curves {
            for row in rows {
                let (sim, ci) = row_density(row, Scheme::Msr)?;
                let bound = analytic_density(AnalyticCurve::MsrUpper, &row.params)?;
                let ratio = sim / bound;
                let below = sim <= bound;
                passed &= below;
                max_ratio = max_ratio.max(ratio);
                let at_optimum = row.params.p == p_opt;
                if at_optimum {
                    passed &= ratio >= TIGHTNESS_FLOOR;
                    min_tightness = min_tightness.min(ratio);
                }
                details.push(format!(
                    "{label} p={:.5}{}: simulated {sim:.5} +/- {ci:.5}, bound {bound:.5}, ratio {ratio:.3}",
                    row.params.p,
                    if at_optimum { " (bound optimum)" } else { "" }
                ));
            }
        }
        Ok(CriterionReport {
            criterion: Criterion::A3,
            passed,
            measured: format!(
                "max sim/bound = {max_ratio:.3}, min sim/bound at optimum = {min_tightness:.3}"
            ),
            tolerance: format!("sim/bound <= 1 everywhere, >= {TIGHTNESS_FLOOR} at each optimum"),
            details,
        })
    }

    fn a4(&self) -> Result<CriterionReport> {
        let (_, rows) = self.light_tail()?;
        let mut ordered = true;
        let (mut to_nfp, mut to_msr, mut n) = (0.0, 0.0, 0.0);
        let mut details = Vec::new();
        for row in rows.iter().filter(|r| is_sweep_point(r)) {
            let (nfp, _) = row_density(row, Scheme::Nfp)?;
            let (msr, _) = row_density(row, Scheme::Msr)?;
            let lower = analytic_density(AnalyticCurve::BaccelliLower, &row.params)?;
            ordered &= lower <= msr;
            to_nfp += (lower - nfp).abs();
            to_msr += (lower - msr).abs();
            n += 1.0;
            details.push(format!(
                "p={}: lower bound {lower:.5}, simulated NFP {nfp:.5}, simulated MSR {msr:.5}",
                row.params.p
            ));
        }
        let (to_nfp, to_msr) = (to_nfp / n, to_msr / n);
        Ok(CriterionReport {
            criterion: Criterion::A4,
            passed: ordered && to_nfp < to_msr,
            measured: format!(
                "lower bound <= MSR everywhere: {ordered}; mean distance to NFP {to_nfp:.5}, to MSR {to_msr:.5}"
            ),
            tolerance: "ordering at every p and distance to NFP < distance to MSR".into(),
            details,
        })
    }

    fn a5(&self) -> Result<CriterionReport> {
        let grids = self.grids()?;
        let mut passed = true;
        let mut details = Vec::new();
        let mut measured = Vec::new();
        for (g, &target) in grids.iter().zip(&TARGET_OPTIMA) {
            let analytic_ok = (g.analytic.p - target).abs() <= OPTIMUM_TOLERANCE;
            let cell_ok = g.simulated.cell_contains(target);
            let significance_ok = g.antennas != 1 || g.simulated.significant;
            passed &= analytic_ok && cell_ok && significance_ok;
            measured.push(format!(
                "L={}: analytic {:.4}, simulated cell [{:.4}, {:.4}]",
                g.antennas, g.analytic.p, g.simulated.cell.0, g.simulated.cell.1
            ));
            details.push(format!(
                "L={}: analytic p* {:.5} (target {target}, ok {analytic_ok}); simulated argmax p={:.5} density {:.5} +/- {:.5}, cell [{:.5}, {:.5}] contains target {cell_ok}, significant {}",
                g.antennas,
                g.analytic.p,
                g.simulated.p,
                g.simulated.density,
                g.simulated.density_ci_halfwidth,
                g.simulated.cell.0,
                g.simulated.cell.1,
                g.simulated.significant
            ));
        }
        Ok(CriterionReport {
            criterion: Criterion::A5,
            passed,
            measured: measured.join("; "),
            tolerance: format!(
                "analytic within +/-{OPTIMUM_TOLERANCE}, grid cell contains target, L=1 argmax CI disjoint from runner-up"
            ),
            details,
        })
    }

    fn a6(&self) -> Result<CriterionReport> {
        let grids = self.grids()?;
        let (one, two) = (&grids[0], &grids[1]);
        let analytic = two.analytic.density / one.analytic.density;
        let (a, b) = (&one.simulated, &two.simulated);
        let simulated = b.density / a.density;
        let rel = ((a.density_ci_halfwidth / a.density).powi(2)
            + (b.density_ci_halfwidth / b.density).powi(2))
        .sqrt();
        let ci = simulated * rel;
        let confirmed = (simulated - analytic).abs() <= ci;
        Ok(CriterionReport {
            criterion: Criterion::A6,
            passed: analytic >= GAIN_TARGET && confirmed,
            measured: format!("bound ratio {analytic:.3}, simulated ratio {simulated:.3} +/- {ci:.3}"),
            tolerance: format!("bound ratio >= {GAIN_TARGET}, simulated ratio within CI of it"),
            details: vec![
                format!(
                    "L=1: bound optimum p={:.5} density {:.5}; simulated argmax p={:.5} density {:.5}",
                    one.analytic.p, one.analytic.density, a.p, a.density
                ),
                format!(
                    "L=2: bound optimum p={:.5} density {:.5}; simulated argmax p={:.5} density {:.5}",
                    two.analytic.p, two.analytic.density, b.p, b.density
                ),
            ],
        })
    }

    fn scaling(&self) -> Result<ScalingResult> {
        let base = ModelParams {
            p: 0.05,
            ..light_tail_params()
        };
        let window = WindowSpec::ExpectedNodes {
            nodes: self.config.nodes,
            boundary: Boundary::Torus,
        };
        let plan = ExperimentPlan {
            params: base,
            window,
            trials: self.config.trials,
            master_seed: self.config.seed(&[7]),
            sweep: None,
            schemes: vec![Scheme::Nfp, Scheme::Msr],
        };
        let rows = scaling_study(&plan, &SCALING_LAMBDAS)?;
        let mut analytic = Vec::new();
        let mut simulated = Vec::new();
        for &lambda in &SCALING_LAMBDAS {
            let params = base.with_lambda(lambda);
            analytic.push((
                lambda,
                optimal_contention(&params, AnalyticCurve::Nfp, &analytic_grid())?,
                optimal_contention(&params, AnalyticCurve::MsrUpper, &analytic_grid())?,
            ));
            let grid_plan = ExperimentPlan {
                params,
                trials: self.config.scaling_grid_trials,
                master_seed: self.config.seed(&[7, 1]),
                ..plan.clone()
            };
            simulated.push((
                lambda,
                find_optimal_p_simulated(&grid_plan, Scheme::Msr, &sim_grid())?,
            ));
        }
        Ok(ScalingResult {
            rows,
            analytic,
            simulated,
        })
    }

    fn a7(&self) -> Result<CriterionReport> {
        let s = self.scaling()?;
        let mut details = Vec::new();
        let mut ratios_ok = true;
        let mut worst: f64 = 0.0;
        for row in &s.rows[1..] {
            for &(scheme, ratio, ci) in &row.ratios {
                let ok = (ratio - row.expected_ratio).abs() <= ci;
                ratios_ok &= ok;
                worst = worst.max((ratio - row.expected_ratio).abs());
                details.push(format!(
                    "lambda={} {}: density ratio {ratio:.6} +/- {ci:.2e}, expected {:.6}",
                    row.lambda,
                    scheme.name(),
                    row.expected_ratio
                ));
            }
        }
        let (_, nfp0, msr0) = s.analytic[0];
        let analytic_ok = s
            .analytic
            .iter()
            .all(|(_, n, m)| n.p == nfp0.p && m.p == msr0.p);
        for (lambda, n, m) in &s.analytic {
            details.push(format!(
                "lambda={lambda}: analytic p* NFP {:e}, MSR bound {:e}",
                n.p, m.p
            ));
        }
        let cell0 = s.simulated[0].1.cell;
        let cells_ok = s.simulated.iter().all(|(_, o)| o.cell == cell0);
        for (lambda, o) in &s.simulated {
            details.push(format!(
                "lambda={lambda}: simulated MSR argmax p={:.5}, cell [{:.5}, {:.5}]",
                o.p, o.cell.0, o.cell.1
            ));
        }
        Ok(CriterionReport {
            criterion: Criterion::A7,
            passed: ratios_ok && analytic_ok && cells_ok,
            measured: format!(
                "max |ratio - sqrt(lambda ratio)| = {worst:.2e}; analytic p* identical: {analytic_ok}; simulated cells identical: {cells_ok}"
            ),
            tolerance: "ratios within combined CI, analytic p* bitwise equal, same grid cell".into(),
            details,
        })
    }

    fn a8(&self) -> Result<CriterionReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed(&[8]));
        let mut worst: f64 = 0.0;
        let mut failures = 0usize;
        let mut pairs = 0usize;
        for _ in 0..MICRO_INSTANCES {
            let antennas = rng.random_range(1..=4usize);
            let n_tx = rng.random_range(1..=5usize);
            let n_rx = rng.random_range(1..=3usize);
            let params = ModelParams {
                antennas,
                alpha: rng.random_range(2.5..5.0),
                noise: 10f64.powf(rng.random_range(-3.0..0.0)),
                ..ModelParams::default()
            };
            let mut point = || Point::new(rng.random_range(0.0..20.0), rng.random_range(0.0..20.0));
            let transmitters: Vec<Point> = (0..n_tx).map(|_| point()).collect();
            let receivers: Vec<Point> = (0..n_rx).map(|_| point()).collect();
            let snapshot = Snapshot::new(
                SimWindow::guard(20.0, 0.5),
                transmitters,
                receivers,
                vec![Point::new(1.0, 0.0); n_tx],
            )?;
            let vectors: Vec<Vec<Vec<Complex64>>> = (0..n_rx)
                .map(|_| {
                    (0..n_tx)
                        .map(|_| {
                            (0..antennas)
                                .map(|_| {
                                    Complex64::new(
                                        rng.random_range(-2.0..2.0),
                                        rng.random_range(-2.0..2.0),
                                    )
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            let channels = ChannelSet::from_vectors(antennas, &vectors);
            let table = build_sinr_table(&snapshot, &channels, &params)?;
            for tx in 0..n_tx {
                for rx in 0..n_rx {
                    let fast = table.sinr(tx, rx);
                    let slow = explicit_sinr(&snapshot, &channels, &params, tx, rx)?;
                    let rel = if fast == slow {
                        0.0
                    } else {
                        ((fast - slow) / slow).abs()
                    };
                    pairs += 1;
                    if !(rel <= MICRO_TOLERANCE) {
                        failures += 1;
                    }
                    worst = worst.max(rel);
                }
            }
        }
        Ok(CriterionReport {
            criterion: Criterion::A8,
            passed: failures == 0,
            measured: format!(
                "max relative error {worst:.2e} over {pairs} pairs in {MICRO_INSTANCES} instances"
            ),
            tolerance: format!("relative {MICRO_TOLERANCE:e} for every pair"),
            details: vec![format!("{failures} pairs out of tolerance")],
        })
    }

    fn a9(&self) -> Result<CriterionReport> {
        let mut details = Vec::new();
        let mut nfp_worst: f64 = 0.0;
        for antennas in [1, 2, 4] {
            for alpha in [3.0, 4.0] {
                for beta in [1.0, 10.0] {
                    for p in [0.01, 0.05, 0.2] {
                        let params = ModelParams {
                            lambda: 1.0,
                            p,
                            alpha,
                            beta,
                            antennas,
                            noise: 0.0,
                        };
                        let diff = (nfp_expected_progress(&params)?
                            - nfp_progress_quadrature_oracle(&params)?)
                        .abs();
                        nfp_worst = nfp_worst.max(diff);
                    }
                }
            }
        }
        details.push(format!(
            "NFP closed form vs quadrature: max |diff| {nfp_worst:.2e} over 36 points"
        ));

        let mut h_worst: f64 = 0.0;
        for antennas in [1, 2, 3] {
            for beta in [1.0, 10.0] {
                for (alpha, p) in [(4.0, 0.05), (3.0, 0.02), (3.0, 0.2)] {
                    let params = ModelParams {
                        p,
                        alpha,
                        beta,
                        antennas,
                        ..ModelParams::default()
                    };
                    let diff = (msr_h(&params)?
                        - riemann_h(&params, RIEMANN_PANELS, RIEMANN_H_UPPER)?)
                    .abs();
                    h_worst = h_worst.max(diff);
                }
            }
        }
        details.push(format!(
            "H vs Riemann sum: max |diff| {h_worst:.2e} over 18 points"
        ));

        let mut g_worst: f64 = 0.0;
        for z in [0.1, 0.5, 0.9] {
            let diff = (baccelli_g(z)? - riemann_g(z, RIEMANN_PANELS)?).abs();
            g_worst = g_worst.max(diff);
            details.push(format!("G({z}): |diff| {diff:.2e}"));
        }
        Ok(CriterionReport {
            criterion: Criterion::A9,
            passed: nfp_worst <= NFP_ORACLE_TOLERANCE
                && h_worst <= RIEMANN_TOLERANCE
                && g_worst <= RIEMANN_TOLERANCE,
            measured: format!("NFP {nfp_worst:.2e}, H {h_worst:.2e}, G {g_worst:.2e}"),
            tolerance: format!(
                "NFP {NFP_ORACLE_TOLERANCE:e}, H and G {RIEMANN_TOLERANCE:e} absolute"
            ),
            details,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criterion_ids_round_trip() {
        for c in Criterion::ALL {
            assert_eq!(Criterion::parse(c.id()), Some(c));
            assert_eq!(Criterion::parse(&c.id().to_lowercase()), Some(c));
        }
        assert_eq!(Criterion::parse("A10"), None);
    }

    #[test]
    fn config_rejects_small_trial_counts() {
        let v = Validator::new(ValidationConfig {
            trials: 5,
            ..ValidationConfig::default()
        });
        assert!(v.run(Criterion::A8).is_err());
    }

    #[test]
    fn cheap_criteria_pass() {
        let v = Validator::default();
        for c in [Criterion::A8, Criterion::A9] {
            let r = v.run(c).unwrap();
            assert!(r.passed, "{}", r.line());
        }
    }

    #[test]
    fn report_line_format() {
        let r = CriterionReport {
            criterion: Criterion::A6,
            passed: false,
            measured: "x".into(),
            tolerance: "y".into(),
            details: vec![],
        };
        assert_eq!(
            r.line(),
            "A6 FAIL second-antenna gain at the optimum | measured: x | tolerance: y"
        );
    }
}
