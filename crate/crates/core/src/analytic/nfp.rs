use std::f64::consts::{FRAC_PI_2, PI};

use super::{capture_probability, ModelParams};
use crate::error::Result;
use crate::numerics::{gamma_fn, integrate, integrate_semi_infinite, QuadratureSpec};

/// Expected one-hop progress when each transmitter relays to its nearest
/// receiver in the forward half-plane (progress counts only on capture).
///
/// ```text
/// (1/√λ) Σ_{k<L} Γ(k+3/2)·(gp)^k·(1−p) / (k!·((1−p)π/2 + gp)^(k+3/2)),   g = β^(2/α)Δ
/// ```
pub fn nfp_expected_progress(params: &ModelParams) -> Result<f64> {
    let consts = params.derived()?;
    params.require_noise_free("NFP closed form")?;
    let p = params.p;
    let g = params.beta.powf(2.0 / params.alpha) * consts.delta;
    let base = (1.0 - p) * FRAC_PI_2 + g * p;
    let mut sum = 0.0;
    let mut factorial = 1.0;
    for k in 0..params.antennas {
        if k > 0 {
            factorial *= k as f64;
        }
        let kf = k as f64;
        sum += gamma_fn(kf + 1.5)? * (g * p).powi(k as i32) * (1.0 - p)
            / (factorial * base.powf(kf + 1.5));
    }
    Ok(sum / params.lambda.sqrt())
}

/// Numerical evaluation of `E[r·cosθ·P_s(r)]` with θ uniform on
/// `[−π/2, π/2]` and r the distance to the nearest receiver in a half-plane,
/// `P(R > r) = exp(−λ(1−p)·π·r²/2)`.
///
/// Test oracle for [`nfp_expected_progress`].
pub fn nfp_progress_quadrature_oracle(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    params.require_noise_free("NFP quadrature oracle")?;
    let spec = QuadratureSpec::default().with_tolerance(1e-13);
    let lr = params.lambda_r();
    let angular = integrate(|t: f64| t.cos() / PI, -FRAC_PI_2, FRAC_PI_2, &spec)?;

    // integrate in u = r·√λ so the integrand's scale is λ-free
    let scale = params.lambda.sqrt();
    let unit = ModelParams {
        lambda: 1.0,
        ..*params
    };
    let lr_unit = lr / params.lambda;
    let radial = integrate_semi_infinite(
        |u: f64| {
            let density = lr_unit * PI * u * (-lr_unit * PI * u * u / 2.0).exp();
            u * density * capture_probability(&unit, u).unwrap_or(f64::NAN)
        },
        &spec,
    )?;
    Ok(angular * radial / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closed_form_matches_oracle_on_grid() {
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
                        let closed = nfp_expected_progress(&params).unwrap();
                        let oracle = nfp_progress_quadrature_oracle(&params).unwrap();
                        assert!(
                            (closed - oracle).abs() < 1e-8,
                            "L={antennas} a={alpha} b={beta} p={p}: {closed} vs {oracle}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn single_antenna_reference_point() {
        let params = ModelParams {
            p: 0.05,
            ..ModelParams::default()
        };
        let delta = PI * PI / 2.0;
        let expected = gamma_fn(1.5).unwrap() * 0.95 / (0.95 * FRAC_PI_2 + delta * 0.05).powf(1.5);
        assert_relative_eq!(
            nfp_expected_progress(&params).unwrap(),
            expected,
            max_relative = 1e-14
        );
        assert!((nfp_progress_quadrature_oracle(&params).unwrap() - expected).abs() < 1e-8);
    }

    #[test]
    fn sparse_transmitter_limit() {
        let params = ModelParams::default().with_p(1e-6);
        let limit = gamma_fn(1.5).unwrap() / FRAC_PI_2.powf(1.5);
        let oracle = nfp_progress_quadrature_oracle(&params).unwrap();
        assert!((oracle - limit).abs() < 1e-5);
        assert!((nfp_expected_progress(&params).unwrap() - oracle).abs() < 1e-8);
    }

    #[test]
    fn vanishing_receivers() {
        let params = ModelParams::default().with_p(1.0 - 1e-9);
        assert!(nfp_progress_quadrature_oracle(&params).unwrap() < 1e-7);
        assert!(nfp_expected_progress(&params).unwrap() < 1e-7);
    }

    #[test]
    fn lambda_scaling() {
        let params = ModelParams::default().with_antennas(2);
        let base = nfp_expected_progress(&params).unwrap();
        let quad = nfp_expected_progress(&params.with_lambda(4.0)).unwrap();
        assert_relative_eq!(quad, base / 2.0, max_relative = 1e-15);
        let hundred = nfp_expected_progress(&params.with_lambda(100.0)).unwrap();
        assert_relative_eq!(hundred, base / 10.0, max_relative = 1e-15);

        let o1 = nfp_progress_quadrature_oracle(&params).unwrap();
        let o4 = nfp_progress_quadrature_oracle(&params.with_lambda(4.0)).unwrap();
        assert!((o4 - o1 / 2.0).abs() < 1e-8);
    }

    #[test]
    fn noise_is_rejected() {
        let params = ModelParams {
            noise: 0.1,
            ..ModelParams::default()
        };
        assert!(nfp_expected_progress(&params).is_err());
    }
}
