//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Finite intervals are bisected, worst panel first, until the summed error
//! estimate meets `max(abs_tol, rel_tol·|I|)`. Semi-infinite integrals are
//! built from finite pieces `[0,1], [1,2], [2,4], ...`, doubling the frontier
//! until the integrand there has fallen below `tail_cutoff` and the newest
//! piece contributes less than `abs_tol`.

use crate::error::{invalid, Error, Result};

/// Tolerances and limits for [`integrate`] and [`integrate_semi_infinite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Total panel splits allowed across the whole integral.
    pub max_subdivisions: usize,
    /// Integrand magnitude below which the semi-infinite tail is dropped.
    pub tail_cutoff: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-8,
            max_subdivisions: 100_000,
            tail_cutoff: 1e-12,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(invalid("abs_tol", "must be > 0"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(invalid("rel_tol", "must be > 0"));
        }
        if self.max_subdivisions < 1 {
            return Err(invalid("max_subdivisions", "must be >= 1"));
        }
        if !(self.tail_cutoff > 0.0) {
            return Err(invalid("tail_cutoff", "must be > 0"));
        }
        Ok(())
    }

    /// Same spec with both tolerances tightened to `tol`.
    pub fn with_tolerance(self, tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            ..self
        }
    }
}

// Kronrod 15-point abscissae (positive half) and weights; every other
// abscissa, starting at index 1, is a 7-point Gauss node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    estimate: f64,
    error: f64,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (i, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        estimate: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Adaptive estimate of `∫_a^b f`, charging splits against `budget`.
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    budget: &mut usize,
) -> Result<f64> {
    let mut panels = vec![gauss_kronrod(f, a, b)];
    loop {
        let total: f64 = panels.iter().map(|p| p.estimate).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !total.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite integrand on [{a}, {b}]"
            )));
        }
        if error <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(total);
        }
        if *budget == 0 {
            return Err(Error::NoConvergence {
                subdivisions: spec.max_subdivisions,
                estimate: total,
                error,
            });
        }
        *budget -= 1;

        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("panel list is never empty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // panel cannot be split further in double precision
            return Err(Error::NoConvergence {
                subdivisions: spec.max_subdivisions - *budget,
                estimate: total,
                error,
            });
        }
        panels.push(gauss_kronrod(f, p.a, mid));
        panels.push(gauss_kronrod(f, mid, p.b));
    }
}

/// Adaptive quadrature of `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut budget = spec.max_subdivisions;
    adaptive(&f, a, b, spec, &mut budget)
}

/// Adaptive quadrature of `f` over `[0, ∞)` for integrands that vanish at
/// infinity.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<f64> {
    integrate_from(f, 0.0, spec)
}

/// `∫_start^∞ f` with the same frontier-doubling rule as
/// [`integrate_semi_infinite`].
pub fn integrate_from<F: Fn(f64) -> f64>(f: F, start: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let mut budget = spec.max_subdivisions;
    let mut lo = start;
    let mut width = 1.0;
    let mut total = 0.0;
    loop {
        let hi = lo + width;
        let piece = adaptive(&f, lo, hi, spec, &mut budget)?;
        total += piece;
        if f(hi).abs() < spec.tail_cutoff && piece.abs() < spec.abs_tol {
            return Ok(total);
        }
        if !hi.is_finite() || hi > 1e300 {
            return Err(Error::NoConvergence {
                subdivisions: spec.max_subdivisions - budget,
                estimate: total,
                error: piece.abs(),
            });
        }
        lo = hi;
        width *= 2.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::erfc;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exponential_tail() {
        let spec = QuadratureSpec::default();
        let v = integrate_semi_infinite(|z: f64| (-z).exp(), &spec).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = spec.abs_tol);
    }

    #[test]
    fn gaussian_moment() {
        let spec = QuadratureSpec::default();
        let v = integrate_semi_infinite(|z: f64| z * (-z * z).exp(), &spec).unwrap();
        assert_abs_diff_eq!(v, 0.5, epsilon = spec.abs_tol);
    }

    #[test]
    fn zero_integrand() {
        let v = integrate_semi_infinite(|_| 0.0, &QuadratureSpec::default()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn erfc_kernel_matches_midpoint_sum() {
        // 1 − exp(−(π/2)·erfc(z)), the single-antenna progress integrand shape
        let f = |z: f64| -(-(std::f64::consts::FRAC_PI_2) * erfc(z)).exp_m1();
        let v = integrate_semi_infinite(f, &QuadratureSpec::default()).unwrap();
        let n = 1_000_000;
        let upper = 12.0;
        let h = upper / n as f64;
        let riemann: f64 = (0..n).map(|i| f((i as f64 + 0.5) * h)).sum::<f64>() * h;
        assert!(v > 0.0);
        assert_abs_diff_eq!(v, riemann, epsilon = 1e-8);
    }

    #[test]
    fn finite_interval_with_endpoint_singularity() {
        // ∫_0^1 √x dx = 2/3
        let v = integrate(|x: f64| x.sqrt(), 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert_abs_diff_eq!(v, 2.0 / 3.0, epsilon = 1e-9);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let spec = QuadratureSpec {
            max_subdivisions: 1,
            abs_tol: 1e-15,
            rel_tol: 1e-15,
            ..QuadratureSpec::default()
        };
        let r = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &spec);
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn invalid_spec_rejected() {
        let spec = QuadratureSpec {
            abs_tol: 0.0,
            ..QuadratureSpec::default()
        };
        assert!(integrate(|x| x, 0.0, 1.0, &spec).is_err());
    }
}
