//! Closed-form capture probability and expected-progress expressions for
//! Poisson Aloha networks with optimum-combining receivers.
//!
//! All progress quantities scale as `1/√λ`; the implementations keep that
//! prefactor separate so that `q(c·λ) = q(λ)/√c` holds to rounding.

mod baccelli;
mod msr;
mod nfp;
mod optimize;

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::numerics::gamma_fn;

pub use baccelli::{baccelli_g, baccelli_h_tilde, baccelli_lower_bound};
pub use msr::{msr_capture_kernel, msr_h, msr_progress_upper_bound};
pub use nfp::{nfp_expected_progress, nfp_progress_quadrature_oracle};
pub use optimize::{optimal_contention, AnalyticCurve, ContentionOptimum, GridSpacing, PGrid};

/// Model parameters shared by the formulas and the simulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Node density per unit area.
    pub lambda: f64,
    /// Aloha transmission probability.
    pub p: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// SINR capture threshold.
    pub beta: f64,
    /// Receive antennas per node.
    pub antennas: usize,
    /// Noise power per antenna.
    pub noise: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            p: 0.05,
            alpha: 4.0,
            beta: 1.0,
            antennas: 1,
            noise: 0.0,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(invalid(
                "lambda",
                format!("must be > 0, got {}", self.lambda),
            ));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(invalid("p", format!("must lie in (0, 1), got {}", self.p)));
        }
        if !(self.alpha > 2.0 && self.alpha.is_finite()) {
            return Err(invalid("alpha", format!("must be > 2, got {}", self.alpha)));
        }
        if !(self.beta > 0.0) {
            return Err(invalid("beta", format!("must be > 0, got {}", self.beta)));
        }
        if self.antennas < 1 {
            return Err(invalid("antennas", "must be >= 1"));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(invalid(
                "noise",
                format!("must be >= 0, got {}", self.noise),
            ));
        }
        Ok(())
    }

    /// Transmitter density `λp`.
    pub fn lambda_t(&self) -> f64 {
        self.lambda * self.p
    }

    /// Receiver density `λ(1−p)`.
    pub fn lambda_r(&self) -> f64 {
        self.lambda * (1.0 - self.p)
    }

    pub fn with_p(self, p: f64) -> Self {
        Self { p, ..self }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        Self { lambda, ..self }
    }

    pub fn with_antennas(self, antennas: usize) -> Self {
        Self { antennas, ..self }
    }

    pub(crate) fn require_noise_free(&self, what: &str) -> Result<()> {
        if self.noise != 0.0 {
            return Err(Error::Unsupported(format!(
                "{what} is derived for the interference-limited model; noise must be 0"
            )));
        }
        Ok(())
    }

    pub fn derived(&self) -> Result<DerivedConstants> {
        self.validate()?;
        let delta = delta_constant(self.alpha)?;
        Ok(DerivedConstants {
            delta,
            gamma_rate: self.lambda_t() * delta * self.beta.powf(2.0 / self.alpha),
        })
    }
}

/// Constants that depend only on the parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// `Δ = (2π/α)·Γ(2/α)·Γ(1−2/α)`.
    pub delta: f64,
    /// `γ = λp·Δ·β^(2/α)`: mean of the capture Poisson sum per unit squared
    /// distance.
    pub gamma_rate: f64,
}

/// Interference geometry constant `Δ = (2π/α)·Γ(2/α)·Γ(1−2/α)`.
pub fn delta_constant(alpha: f64) -> Result<f64> {
    if !(alpha > 2.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!(
            "path-loss exponent must exceed 2, got {alpha}"
        )));
    }
    let two_over = 2.0 / alpha;
    Ok(2.0 * PI / alpha * gamma_fn(two_over)? * gamma_fn(1.0 - two_over)?)
}

/// Poisson CDF `P(N < L)` for `N ~ Poisson(mean)`.
pub(crate) fn poisson_below(mean: f64, count: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..count {
        term *= mean / k as f64;
        sum += term;
    }
    sum * (-mean).exp()
}

/// Probability that a receiver at `distance` captures its transmitter's
/// packet under optimum combining in a Poisson field of Rayleigh-faded
/// interferers:
///
/// ```text
/// P_s = Σ_{k<L} m^k/k! · e^(−m),   m = λp·Δ·β^(2/α)·d² + σ²β
/// ```
pub fn capture_probability(params: &ModelParams, distance: f64) -> Result<f64> {
    let consts = params.derived()?;
    if !(distance >= 0.0) {
        return Err(Error::Domain(format!(
            "distance must be >= 0, got {distance}"
        )));
    }
    let mean = consts.gamma_rate * distance * distance + params.noise * params.beta;
    Ok(poisson_below(mean, params.antennas))
}

/// Transmission density times expected progress.
pub fn spatial_density_of_progress(params: &ModelParams, mean_progress: f64) -> f64 {
    params.lambda_t() * mean_progress
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::regularized_upper_gamma;
    use approx::assert_relative_eq;

    #[test]
    fn delta_closed_forms() {
        assert_relative_eq!(
            delta_constant(4.0).unwrap(),
            PI * PI / 2.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            delta_constant(3.0).unwrap(),
            4.0 * PI * PI / (3.0 * 3f64.sqrt()),
            max_relative = 1e-13
        );
    }

    #[test]
    fn delta_diverges_towards_two() {
        let d201 = delta_constant(2.01).unwrap();
        let d21 = delta_constant(2.1).unwrap();
        let d3 = delta_constant(3.0).unwrap();
        assert!(d201.is_finite());
        assert!(d201 > d21 && d21 > d3);
        assert!(delta_constant(2.0).is_err());
        assert!(delta_constant(1.5).is_err());
    }

    #[test]
    fn capture_at_zero_distance() {
        let p = ModelParams::default().with_antennas(3);
        assert_eq!(capture_probability(&p, 0.0).unwrap(), 1.0);
    }

    fn unit_mean_distance(params: &ModelParams) -> f64 {
        (1.0 / params.derived().unwrap().gamma_rate).sqrt()
    }

    #[test]
    fn capture_single_and_dual_antenna_unit_mean() {
        let one = ModelParams::default();
        let d = unit_mean_distance(&one);
        assert_relative_eq!(
            capture_probability(&one, d).unwrap(),
            (-1f64).exp(),
            max_relative = 1e-12
        );
        let two = one.with_antennas(2);
        assert_relative_eq!(
            capture_probability(&two, d).unwrap(),
            2.0 * (-1f64).exp(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn capture_with_noise_adds_to_mean() {
        let p = ModelParams {
            noise: 0.5,
            beta: 2.0,
            ..ModelParams::default()
        };
        assert_relative_eq!(
            capture_probability(&p, 0.0).unwrap(),
            (-1f64).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn capture_rejects_bad_inputs() {
        let p = ModelParams::default();
        assert!(capture_probability(&p, -1.0).is_err());
        assert!(capture_probability(&p.with_p(1.0), 1.0).is_err());
        let bad_alpha = ModelParams { alpha: 2.0, ..p };
        assert!(capture_probability(&bad_alpha, 1.0).is_err());
    }

    #[test]
    fn capture_monotonicity_grid() {
        let mut checked = 0;
        for &lt in &[0.01, 0.05, 0.2] {
            for &beta in &[0.5, 1.0, 10.0] {
                for antennas in 1..=4 {
                    for &alpha in &[3.0, 4.0] {
                        let params = ModelParams {
                            lambda: 1.0,
                            p: lt,
                            alpha,
                            beta,
                            antennas,
                            noise: 0.0,
                        };
                        let mut prev = 1.0;
                        for i in 0..8 {
                            let d = 0.3 * i as f64;
                            let v = capture_probability(&params, d).unwrap();
                            assert!(v <= prev + 1e-15);
                            prev = v;
                            let more_beta = ModelParams {
                                beta: beta * 1.5,
                                ..params
                            };
                            assert!(capture_probability(&more_beta, d).unwrap() <= v + 1e-15);
                            let denser = params.with_p((lt * 1.5).min(0.99));
                            assert!(capture_probability(&denser, d).unwrap() <= v + 1e-15);
                            let wider = params.with_antennas(antennas + 1);
                            assert!(capture_probability(&wider, d).unwrap() >= v - 1e-15);
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked >= 100);
    }

    #[test]
    fn capture_equals_regularized_gamma() {
        for antennas in 1..=4 {
            for &d in &[0.0, 0.1, 0.5, 1.0, 2.0] {
                let params = ModelParams::default().with_antennas(antennas);
                let m = params.derived().unwrap().gamma_rate * d * d;
                let via_gamma = if m == 0.0 {
                    1.0
                } else {
                    regularized_upper_gamma(antennas as f64, m).unwrap()
                };
                let direct = capture_probability(&params, d).unwrap();
                assert!((via_gamma - direct).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn density_of_progress() {
        let p = ModelParams::default();
        assert_eq!(spatial_density_of_progress(&p, 0.0), 0.0);
        assert_relative_eq!(
            spatial_density_of_progress(&p, 2.0),
            0.1,
            max_relative = 1e-15
        );
    }

    #[test]
    fn derived_rates() {
        let p = ModelParams::default();
        assert_relative_eq!(p.lambda_t(), 0.05);
        assert_relative_eq!(p.lambda_r(), 0.95);
        let c = p.derived().unwrap();
        assert_relative_eq!(c.gamma_rate, 0.05 * PI * PI / 2.0, max_relative = 1e-14);
    }
}
