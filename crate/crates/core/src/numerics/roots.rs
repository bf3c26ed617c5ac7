use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 2_000;

/// Bisection root of `f` on `[lo, hi]`.
///
/// Requires a strict sign change, `f(lo)·f(hi) < 0`. Stops as soon as
/// `|f(t)| <= tol` or the bracket is narrower than `tol`.
pub fn bracketed_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "root tolerance must be > 0, got {tol}"
        )));
    }
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if !(f_lo * f_hi < 0.0) {
        return Err(Error::NotBracketed { lo, hi, f_lo, f_hi });
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid.abs() <= tol || hi - lo < tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boundary(t: f64) -> f64 {
        t.exp() / (2.0 * std::f64::consts::E * t).sqrt()
    }

    #[test]
    fn linear_root() {
        let r = bracketed_root(|t| t - 2.0, 0.0, 5.0, 1e-12).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lower_region_boundary() {
        let z: f64 = 0.5;
        let t1 = bracketed_root(|t| boundary(t) - 1.0 / z, 1e-12, 0.5, 1e-14).unwrap();
        assert!(t1 > 0.0 && t1 < 0.5);
        assert!((boundary(t1) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn touching_root_is_not_a_bracket() {
        // the boundary function's minimum is exactly 1 at t = 1/2
        assert!((boundary(0.5) - 1.0).abs() < 1e-15);
        let r = bracketed_root(|t| boundary(t) - 1.0, 0.25, 0.75, 1e-12);
        assert!(matches!(r, Err(Error::NotBracketed { .. })));
    }

    #[test]
    fn same_sign_rejected() {
        assert!(bracketed_root(|t| t * t + 1.0, -1.0, 1.0, 1e-9).is_err());
    }

    #[test]
    fn reversed_bracket_accepted() {
        let r = bracketed_root(|t| t - 2.0, 5.0, 0.0, 1e-12).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
    }
}
