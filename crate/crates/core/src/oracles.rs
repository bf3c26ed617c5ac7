//! Brute-force reference computations used to check the fast paths.

use num_complex::Complex64;

use crate::analytic::{msr_capture_kernel, ModelParams};
use crate::error::{Error, Result};
use crate::simcore::linalg::{add_outer, gauss_jordan_inverse};
use crate::simcore::{path_gain, ChannelSet, Snapshot};

/// Midpoint sum for `G(z)` over `[0, T]`, with the arccos argument clamped
/// so the integrand vanishes outside the region. `T` is found by doubling.
pub fn riemann_g(z: f64, panels: usize) -> Result<f64> {
    if !(z > 0.0 && z <= 1.0) || panels == 0 {
        return Err(Error::Domain(format!("riemann_g({z}, {panels})")));
    }
    let phi = |t: f64| (t - 0.5 * (2.0 * std::f64::consts::E * t).ln()).exp();
    let mut top = 1.0;
    while z * phi(top) <= 1.0 {
        top *= 2.0;
    }
    let h = top / panels as f64;
    let sum: f64 = (0..panels)
        .map(|i| {
            let t = (i as f64 + 0.5) * h;
            (z * phi(t)).min(1.0).acos()
        })
        .sum();
    Ok(2.0 * sum * h)
}

/// Midpoint sum for `H(p, L, β)` over `[0, upper]`.
pub fn riemann_h(params: &ModelParams, panels: usize, upper: f64) -> Result<f64> {
    let delta = params.derived()?.delta;
    let rate = (1.0 - params.p) / params.p / (params.beta.powf(2.0 / params.alpha) * delta);
    let h = upper / panels as f64;
    let mut sum = 0.0;
    for i in 0..panels {
        let z = (i as f64 + 0.5) * h;
        sum += -(-rate * msr_capture_kernel(z, params.antennas)?).exp_m1();
    }
    Ok(sum * h)
}

/// SINR from the interference-plus-noise covariance `R` built without the
/// desired transmitter and inverted explicitly.
pub fn explicit_sinr(
    snapshot: &Snapshot,
    channels: &ChannelSet,
    params: &ModelParams,
    tx: usize,
    rx: usize,
) -> Result<f64> {
    let l = params.antennas;
    let y = snapshot.receivers[rx];
    let mut r = vec![Complex64::new(0.0, 0.0); l * l];
    for i in 0..l {
        r[i * l + i] = Complex64::new(params.noise, 0.0);
    }
    for (i, &x) in snapshot.transmitters.iter().enumerate() {
        if i != tx {
            add_outer(
                &mut r,
                channels.vector(i, rx),
                path_gain(snapshot.window.distance_sq(x, y), params.alpha),
            );
        }
    }
    let Some(inv) = gauss_jordan_inverse(&r, l) else {
        return Ok(f64::INFINITY);
    };
    let h = channels.vector(tx, rx);
    let mut q = Complex64::new(0.0, 0.0);
    for a in 0..l {
        for b in 0..l {
            q += h[a].conj() * inv[a * l + b] * h[b];
        }
    }
    Ok(path_gain(
        snapshot.window.distance_sq(snapshot.transmitters[tx], y),
        params.alpha,
    ) * q.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::{Point, SimWindow};
    use nalgebra::{DMatrix, DVector};

    #[test]
    fn g_oracle_vanishes_at_one() {
        assert!(riemann_g(1.0, 1000).unwrap().abs() < 1e-3);
        assert!(riemann_g(0.0, 10).is_err());
    }

    #[test]
    fn explicit_sinr_agrees_with_nalgebra() {
        let l = 3;
        let tx = vec![
            Point::new(1.0, 2.0),
            Point::new(4.0, 1.0),
            Point::new(3.0, 3.5),
            Point::new(0.5, 0.5),
        ];
        let s = Snapshot::new(
            SimWindow::guard(10.0, 0.5),
            tx.clone(),
            vec![Point::new(2.0, 2.0)],
            vec![Point::new(0.0, 1.0); 4],
        )
        .unwrap();
        let vecs: Vec<Vec<Complex64>> = (0..4)
            .map(|i| {
                (0..l)
                    .map(|a| {
                        Complex64::new(
                            (i * 3 + a) as f64 * 0.37 - 1.0,
                            ((i + a) % 3) as f64 * 0.5 - 0.4,
                        )
                    })
                    .collect()
            })
            .collect();
        let ch = ChannelSet::from_vectors(l, std::slice::from_ref(&vecs));
        let params = ModelParams {
            antennas: l,
            noise: 0.05,
            alpha: 3.0,
            ..ModelParams::default()
        };
        for j in 0..4 {
            let mut r = DMatrix::<Complex64>::identity(l, l) * Complex64::new(0.05, 0.0);
            for (i, x) in tx.iter().enumerate() {
                if i != j {
                    let h = DVector::from_vec(vecs[i].clone());
                    let g = path_gain(s.window.distance_sq(*x, s.receivers[0]), 3.0);
                    r += &h * h.adjoint() * Complex64::new(g, 0.0);
                }
            }
            let h = DVector::from_vec(vecs[j].clone());
            let q = (h.adjoint() * r.try_inverse().unwrap() * &h)[(0, 0)].re;
            let expected = path_gain(s.window.distance_sq(tx[j], s.receivers[0]), 3.0) * q;
            let got = explicit_sinr(&s, &ch, &params, j, 0).unwrap();
            assert!((got / expected - 1.0).abs() < 1e-10, "{got} vs {expected}");
        }
    }
}
