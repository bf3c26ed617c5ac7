use super::ModelParams;
use crate::error::Result;
use crate::numerics::{
    gamma_fn, half_integer_gamma_ladder, integrate_semi_infinite, QuadratureSpec,
};

/// Half-plane integral of the capture sum, in units where `γ = 1`:
///
/// ```text
/// F(z) = Σ_{i<L} Σ_{k≤i} Γ(1/2+k)·Γ(1/2+i−k, z²) / (2·k!·(i−k)!)
/// ```
pub fn msr_capture_kernel(z: f64, antennas: usize) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(crate::error::Error::Domain(format!(
            "capture kernel requires z >= 0, got {z}"
        )));
    }
    let upper = half_integer_gamma_ladder(z * z, antennas)?;
    kernel_from_ladder(&upper, &complete_half_gammas(antennas)?, antennas)
}

fn complete_half_gammas(antennas: usize) -> Result<Vec<f64>> {
    (0..antennas).map(|k| gamma_fn(0.5 + k as f64)).collect()
}

fn factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut f = 1.0;
    for k in 0..n {
        if k > 0 {
            f *= k as f64;
        }
        out.push(f);
    }
    out
}

fn kernel_from_ladder(upper: &[f64], complete: &[f64], antennas: usize) -> Result<f64> {
    let fact = factorials(antennas);
    let mut sum = 0.0;
    for i in 0..antennas {
        for k in 0..=i {
            sum += complete[k] * upper[i - k] / (2.0 * fact[k] * fact[i - k]);
        }
    }
    Ok(sum)
}

/// The λ-free factor of the MSR-Aloha progress bound,
///
/// ```text
/// H(p, L, β) = ∫_0^∞ 1 − exp(−((1−p)/p)·F(z)/(β^(2/α)Δ)) dz
/// ```
pub fn msr_h(params: &ModelParams) -> Result<f64> {
    let consts = params.derived()?;
    let rate = (1.0 - params.p) / params.p / (params.beta.powf(2.0 / params.alpha) * consts.delta);
    let complete = complete_half_gammas(params.antennas)?;
    let antennas = params.antennas;
    integrate_semi_infinite(
        |z: f64| {
            let upper = half_integer_gamma_ladder(z * z, antennas).unwrap_or_default();
            let f = kernel_from_ladder(&upper, &complete, antennas).unwrap_or(f64::NAN);
            -(-rate * f).exp_m1()
        },
        &QuadratureSpec::default().with_tolerance(1e-12),
    )
}

/// Upper bound on the MSR-Aloha mean progress,
/// `H(p, L, β) / (β^(1/α)·√(λpΔ))`.
pub fn msr_progress_upper_bound(params: &ModelParams) -> Result<f64> {
    let consts = params.derived()?;
    params.require_noise_free("MSR-Aloha progress bound")?;
    let h = msr_h(params)?;
    Ok(
        h / (params.beta.powf(1.0 / params.alpha) * (params.p * consts.delta).sqrt())
            / params.lambda.sqrt(),
    )
}
