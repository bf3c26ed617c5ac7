//! Lower bound on MSR-Aloha progress obtained by replacing the capture event
//! with its probability in the relay selection rule (single antenna only).

use std::f64::consts::E;

use super::ModelParams;
use crate::error::{Error, Result};
use crate::numerics::{bracketed_root, integrate, QuadratureSpec};

const ROOT_TOL: f64 = 1e-15;

/// `ln φ(t)` with `φ(t) = e^t/√(2e·t)`.
fn ln_boundary(t: f64) -> f64 {
    t - 0.5 * (2.0 * E * t).ln()
}

/// Interval `[t₁, t₂]` on which `φ(t) ≤ 1/z`, for `0 < z < 1`.
///
/// `φ` has its unique minimum `φ(1/2) = 1`, so one crossing lies on each side
/// of `1/2`.
pub(crate) fn g_region(z: f64) -> Result<(f64, f64)> {
    let level = -z.ln();
    let f = |t: f64| ln_boundary(t) - level;

    let mut eps = 0.25;
    while f(eps) <= 0.0 {
        eps *= 0.5;
        if eps < 1e-300 {
            return Err(Error::Numerical(format!("no lower crossing for z = {z}")));
        }
    }
    let mut top = 1.0;
    while f(top) <= 0.0 {
        top *= 2.0;
        if !top.is_finite() {
            return Err(Error::Numerical(format!("no upper crossing for z = {z}")));
        }
    }
    let t1 = bracketed_root(f, eps, 0.5, ROOT_TOL)?;
    let t2 = bracketed_root(f, 0.5, top, ROOT_TOL)?;
    Ok((t1, t2))
}

/// `G(z) = 2∫ arccos(z·φ(t)) dt` over the region where `z·φ(t) ≤ 1`.
pub fn baccelli_g(z: f64) -> Result<f64> {
    if !(z > 0.0 && z <= 1.0) {
        return Err(Error::Domain(format!("G(z) requires 0 < z <= 1, got {z}")));
    }
    if z == 1.0 {
        return Ok(0.0);
    }
    let (t1, t2) = g_region(z)?;
    let spec = QuadratureSpec::default().with_tolerance(1e-12);
    let integral = integrate(
        |t: f64| (z * ln_boundary(t).exp()).min(1.0).acos(),
        t1,
        t2,
        &spec,
    )?;
    Ok(2.0 * integral)
}

/// `H̃(p, β) = ∫_0^1 1 − exp(−((1−p)/p)·G(z)/(2β^(2/α)Δ)) dz`.
pub fn baccelli_h_tilde(params: &ModelParams) -> Result<f64> {
    let consts = params.derived()?;
    let rate =
        (1.0 - params.p) / params.p / (2.0 * params.beta.powf(2.0 / params.alpha) * consts.delta);
    integrate(
        |z: f64| {
            if z <= 0.0 {
                return 1.0;
            }
            let g = baccelli_g(z).unwrap_or(f64::NAN);
            -(-rate * g).exp_m1()
        },
        0.0,
        1.0,
        &QuadratureSpec::default().with_tolerance(1e-10),
    )
}

/// Lower bound `H̃(p, β)/(β^(1/α)·√(2eλpΔ))` on single-antenna MSR-Aloha
/// progress.
pub fn baccelli_lower_bound(params: &ModelParams) -> Result<f64> {
    let consts = params.derived()?;
    params.require_noise_free("MSR-Aloha lower bound")?;
    if params.antennas != 1 {
        return Err(Error::Unsupported(format!(
            "the lower bound covers single-antenna receivers only, got {} antennas",
            params.antennas
        )));
    }
    let h = baccelli_h_tilde(params)?;
    Ok(
        h / (params.beta.powf(1.0 / params.alpha) * (params.p * 2.0 * consts.delta * E).sqrt())
            / params.lambda.sqrt(),
    )
}
