use super::{
    baccelli_lower_bound, msr_progress_upper_bound, nfp_expected_progress,
    spatial_density_of_progress, ModelParams,
};
use crate::error::{invalid, Result};

/// Golden-section stopping width in p.
const REFINE_TOL: f64 = 1e-4;
const MIN_GRID_POINTS: usize = 20;

/// Analytic progress curve to optimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnalyticCurve {
    Nfp,
    MsrUpper,
    BaccelliLower,
}

impl AnalyticCurve {
    pub fn progress(self, params: &ModelParams) -> Result<f64> {
        match self {
            AnalyticCurve::Nfp => nfp_expected_progress(params),
            AnalyticCurve::MsrUpper => msr_progress_upper_bound(params),
            AnalyticCurve::BaccelliLower => baccelli_lower_bound(params),
        }
    }

    pub fn density(self, params: &ModelParams) -> Result<f64> {
        Ok(spatial_density_of_progress(params, self.progress(params)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSpacing {
    Linear,
    Log,
}

/// A grid of transmission probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub spacing: GridSpacing,
}

impl PGrid {
    pub fn linear(lo: f64, hi: f64, points: usize) -> Self {
        Self {
            lo,
            hi,
            points,
            spacing: GridSpacing::Linear,
        }
    }

    pub fn log(lo: f64, hi: f64, points: usize) -> Self {
        Self {
            lo,
            hi,
            points,
            spacing: GridSpacing::Log,
        }
    }

    pub fn validate(&self, min_points: usize) -> Result<()> {
        if !(self.lo > 0.0 && self.hi < 1.0 && self.lo < self.hi) {
            return Err(invalid(
                "p_grid",
                format!(
                    "bounds must satisfy 0 < lo < hi < 1, got [{}, {}]",
                    self.lo, self.hi
                ),
            ));
        }
        if self.points < min_points {
            return Err(invalid(
                "p_grid",
                format!("needs at least {min_points} points, got {}", self.points),
            ));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.lo];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / n;
                match self.spacing {
                    GridSpacing::Linear => self.lo + t * (self.hi - self.lo),
                    GridSpacing::Log => self.lo * (self.hi / self.lo).powf(t),
                }
            })
            .collect()
    }
}

/// Result of an analytic contention search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContentionOptimum {
    pub p: f64,
    pub density: f64,
}

/// Transmission probability maximizing the spatial density of progress of
/// `curve`: grid argmax, then golden-section refinement inside the two
/// neighbouring grid cells. Ties go to the smaller p.
///
/// Density is proportional to `√λ` at fixed p, so the search runs on the
/// `λ = 1` curve and the optimum is exactly independent of λ.
pub fn optimal_contention(
    params: &ModelParams,
    curve: AnalyticCurve,
    grid: &PGrid,
) -> Result<ContentionOptimum> {
    grid.validate(MIN_GRID_POINTS)?;
    params.with_p(grid.lo).validate()?;
    let unit = params.with_lambda(1.0);
    let objective = |p: f64| curve.density(&unit.with_p(p));

    let ps = grid.values();
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, &p) in ps.iter().enumerate() {
        let v = objective(p)?;
        if v > best_val {
            best = i;
            best_val = v;
        }
    }

    let lo = ps[best.saturating_sub(1)];
    let hi = ps[(best + 1).min(ps.len() - 1)];
    let (refined_p, refined_val) = golden_section_max(&objective, lo, hi)?;
    let p_star = if refined_val > best_val || (refined_val == best_val && refined_p < ps[best]) {
        refined_p
    } else {
        ps[best]
    };
    Ok(ContentionOptimum {
        p: p_star,
        density: curve.density(&params.with_p(p_star))?,
    })
}

fn golden_section_max<F: Fn(f64) -> Result<f64>>(
    f: &F,
    mut a: f64,
    mut b: f64,
) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > REFINE_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let mid = 0.5 * (a + b);
    Ok((mid, f(mid)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig4_params(antennas: usize) -> ModelParams {
        ModelParams {
            alpha: 3.0,
            beta: 10.0,
            antennas,
            ..ModelParams::default()
        }
    }

    #[test]
    fn msr_optima_follow_antenna_count() {
        let grid = PGrid::linear(0.002, 0.2, 100);
        for (antennas, expected) in [(1, 0.015), (2, 0.03), (3, 0.045)] {
            let opt =
                optimal_contention(&fig4_params(antennas), AnalyticCurve::MsrUpper, &grid).unwrap();
            assert!(
                (opt.p - expected).abs() <= 0.005,
                "L={antennas}: p*={}",
                opt.p
            );
        }
    }

    #[test]
    fn optimum_independent_of_lambda() {
        let grid = PGrid::log(0.002, 0.9, 40);
        for curve in [AnalyticCurve::Nfp, AnalyticCurve::MsrUpper] {
            let a = optimal_contention(&fig4_params(2), curve, &grid).unwrap();
            let b = optimal_contention(&fig4_params(2).with_lambda(10.0), curve, &grid).unwrap();
            assert_eq!(a.p, b.p);
            assert!((b.density / a.density - 10f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn nfp_prefers_more_contention() {
        let grid = PGrid::log(0.002, 0.9, 60);
        let nfp = optimal_contention(&fig4_params(1), AnalyticCurve::Nfp, &grid).unwrap();
        let msr = optimal_contention(&fig4_params(1), AnalyticCurve::MsrUpper, &grid).unwrap();
        assert!(nfp.p > msr.p);
    }

    #[test]
    fn grid_validation() {
        let params = fig4_params(1);
        assert!(
            optimal_contention(&params, AnalyticCurve::Nfp, &PGrid::linear(0.01, 0.2, 5)).is_err()
        );
        assert!(
            optimal_contention(&params, AnalyticCurve::Nfp, &PGrid::linear(0.0, 0.2, 30)).is_err()
        );
        assert!(
            optimal_contention(&params, AnalyticCurve::Nfp, &PGrid::linear(0.1, 1.0, 30)).is_err()
        );
    }

    #[test]
    fn grid_values() {
        let lin = PGrid::linear(0.1, 0.5, 5).values();
        assert_eq!(lin.len(), 5);
        assert!((lin[2] - 0.3).abs() < 1e-15);
        let log = PGrid::log(0.01, 0.1, 3).values();
        assert!((log[1] - 0.01 * 10f64.sqrt()).abs() < 1e-15);
    }
}
