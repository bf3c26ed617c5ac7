//! Capture frequency of a single link in a Poisson field of interferers.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use super::seed::derive_seed;
use crate::analytic::{capture_probability, ModelParams};
use crate::error::{invalid, Error, Result};
use crate::simcore::linalg::{add_outer, Cholesky};
use crate::simcore::{complex_normal, downdate_sinr, path_gain, Point, SimWindow};

const Z_95: f64 = 1.96;

/// A receiver at the centre of a torus, interferers drawn from a PPP of
/// density `λp`, and one desired transmitter per cell at the distance giving
/// `λp·Δ·β^(2/α)·d² = m`. All cells of one trial share the interferer field.
#[derive(Debug, Clone, PartialEq)]
pub struct CaptureExperiment {
    pub params: ModelParams,
    pub betas: Vec<f64>,
    /// Values of `m`.
    pub normalized_means: Vec<f64>,
    pub expected_interferers: f64,
    pub trials: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaptureCell {
    pub beta: f64,
    pub normalized_mean: f64,
    pub distance: f64,
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    pub analytic: f64,
    /// 95% binomial half-width around `analytic`.
    pub ci_halfwidth: f64,
}

impl CaptureCell {
    pub fn within_ci(&self) -> bool {
        (self.frequency - self.analytic).abs() <= self.ci_halfwidth
    }
}

struct Cell {
    beta: f64,
    m: f64,
    distance: f64,
    gain: f64,
}

pub fn run_capture_experiment(exp: &CaptureExperiment) -> Result<Vec<CaptureCell>> {
    let params = exp.params;
    params.validate()?;
    params.require_noise_free("the capture experiment")?;
    if exp.trials == 0 {
        return Err(invalid("trials", "must be positive"));
    }
    if !(exp.expected_interferers > 0.0) {
        return Err(invalid("expected_interferers", "must be positive"));
    }
    let window = SimWindow::torus((exp.expected_interferers / params.lambda_t()).sqrt());
    let mut cells = Vec::new();
    for &beta in &exp.betas {
        let p = ModelParams { beta, ..params };
        let rate = p.derived()?.gamma_rate;
        for &m in &exp.normalized_means {
            let distance = (m / rate).sqrt();
            if !(distance < 0.5 * window.side) {
                return Err(Error::Domain(format!(
                    "link distance {distance} does not fit the window"
                )));
            }
            cells.push(Cell {
                beta,
                m,
                distance,
                gain: path_gain(distance * distance, params.alpha),
            });
        }
    }

    let l = params.antennas;
    let interferers = Poisson::new(exp.expected_interferers)
        .map_err(|e| Error::Numerical(format!("poisson({}): {e}", exp.expected_interferers)))?;
    let per_trial: Vec<Vec<bool>> = (0..exp.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(exp.master_seed, &[t]));
            let rx = window.center();
            let mut cov = vec![Complex64::new(0.0, 0.0); l * l];
            let mut h = vec![Complex64::new(0.0, 0.0); l];
            let n = interferers.sample(&mut rng) as usize;
            for _ in 0..n {
                let x = Point::new(
                    rng.random::<f64>() * window.side,
                    rng.random::<f64>() * window.side,
                );
                h.iter_mut().for_each(|v| *v = complex_normal(&mut rng));
                add_outer(
                    &mut cov,
                    &h,
                    path_gain(window.distance_sq(x, rx), params.alpha),
                );
            }
            let mut scratch = vec![Complex64::new(0.0, 0.0); l];
            cells
                .iter()
                .map(|cell| {
                    h.iter_mut().for_each(|v| *v = complex_normal(&mut rng));
                    let mut a = cov.clone();
                    add_outer(&mut a, &h, cell.gain);
                    let sinr = match Cholesky::factor(&a, l) {
                        Some(chol) => downdate_sinr(&chol, &h, cell.gain, &mut scratch),
                        None => f64::INFINITY,
                    };
                    sinr >= cell.beta
                })
                .collect()
        })
        .collect();

    cells
        .iter()
        .enumerate()
        .map(|(i, cell)| {
            let successes = per_trial.iter().filter(|v| v[i]).count();
            let analytic = capture_probability(
                &ModelParams {
                    beta: cell.beta,
                    ..params
                },
                cell.distance,
            )?;
            let n = exp.trials as f64;
            Ok(CaptureCell {
                beta: cell.beta,
                normalized_mean: cell.m,
                distance: cell.distance,
                trials: exp.trials,
                successes,
                frequency: successes as f64 / n,
                analytic,
                ci_halfwidth: Z_95 * (analytic * (1.0 - analytic) / n).sqrt(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequencies_follow_capture_probability() {
        let exp = CaptureExperiment {
            params: ModelParams {
                antennas: 2,
                ..ModelParams::default()
            },
            betas: vec![1.0],
            normalized_means: vec![0.5, 2.0],
            expected_interferers: 2000.0,
            trials: 3000,
            master_seed: 3,
        };
        for cell in run_capture_experiment(&exp).unwrap() {
            // 4.5σ band: loose enough for a unit test
            let band = cell.ci_halfwidth / 1.96 * 4.5;
            assert!((cell.frequency - cell.analytic).abs() < band, "{cell:?}");
            let expected_m =
                exp.params.derived().unwrap().gamma_rate * cell.distance * cell.distance;
            assert!((expected_m - cell.normalized_mean).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_noise_and_zero_trials() {
        let base = CaptureExperiment {
            params: ModelParams::default(),
            betas: vec![1.0],
            normalized_means: vec![1.0],
            expected_interferers: 100.0,
            trials: 10,
            master_seed: 0,
        };
        assert!(run_capture_experiment(&CaptureExperiment {
            trials: 0,
            ..base.clone()
        })
        .is_err());
        let noisy = ModelParams {
            noise: 0.1,
            ..ModelParams::default()
        };
        assert!(run_capture_experiment(&CaptureExperiment {
            params: noisy,
            ..base
        })
        .is_err());
    }
}
