use num_complex::Complex64;

use super::channel::{fill_receiver_block, ChannelSet};
use super::linalg::{add_outer, Cholesky};
use super::snapshot::Snapshot;
use super::window::{Point, SimWindow};
use crate::analytic::ModelParams;
use crate::error::{Error, Result};

/// Below this value of `1 − c·q` the desired signal is treated as perfectly
/// separated from interference.
pub const DOWNDATE_TOLERANCE: f64 = 1e-10;

/// `d^{−α}` from a squared distance.
#[inline]
pub fn path_gain(dist_sq: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        1.0 / (dist_sq * dist_sq)
    } else if alpha == 3.0 {
        1.0 / (dist_sq * dist_sq.sqrt())
    } else {
        dist_sq.powf(-0.5 * alpha)
    }
}

/// SINR of a signal with path gain `gain` and channel `h`, given the factor
/// of the total covariance `A` (signal included).
#[inline]
pub(crate) fn downdate_sinr(
    chol: &Cholesky,
    h: &[Complex64],
    gain: f64,
    scratch: &mut [Complex64],
) -> f64 {
    let cq = gain * chol.inverse_quadratic_form(h, scratch);
    let rest = 1.0 - cq;
    if rest <= DOWNDATE_TOLERANCE {
        f64::INFINITY
    } else {
        cq / rest
    }
}

/// Reusable buffers for the per-receiver covariance build.
#[derive(Debug, Clone)]
pub(crate) struct ReceiverWorkspace {
    antennas: usize,
    alpha: f64,
    noise: f64,
    cov: Vec<Complex64>,
    gains: Vec<f64>,
    scratch: Vec<Complex64>,
}

impl ReceiverWorkspace {
    pub(crate) fn new(params: &ModelParams, window: &SimWindow) -> Result<Self> {
        let l = params.antennas;
        Ok(Self {
            antennas: l,
            alpha: params.alpha,
            noise: params.noise + window.far_field_interference(params.lambda_t(), params.alpha)?,
            cov: vec![Complex64::new(0.0, 0.0); l * l],
            gains: Vec::new(),
            scratch: vec![Complex64::new(0.0, 0.0); l],
        })
    }

    /// Builds `A_k` from every transmitter and factors it. `Ok(None)` means
    /// `A_k` is singular in the noise-free case.
    fn factor(
        &mut self,
        window: &SimWindow,
        transmitters: &[Point],
        rx: Point,
        block: &[Complex64],
    ) -> Result<Option<Cholesky>> {
        let l = self.antennas;
        self.cov
            .iter_mut()
            .for_each(|c| *c = Complex64::new(0.0, 0.0));
        for i in 0..l {
            self.cov[i * l + i] = Complex64::new(self.noise, 0.0);
        }
        self.gains.clear();
        for (i, &tx) in transmitters.iter().enumerate() {
            let g = path_gain(window.distance_sq(tx, rx), self.alpha);
            self.gains.push(g);
            add_outer(&mut self.cov, &block[i * l..(i + 1) * l], g);
        }
        match Cholesky::factor(&self.cov, l) {
            Some(c) => Ok(Some(c)),
            None if self.noise == 0.0 => Ok(None),
            None => Err(Error::Numerical(format!(
                "covariance factorization failed with noise floor {}",
                self.noise
            ))),
        }
    }

    /// SINR of every transmitter at receiver `rx`; `out[j]` for transmitter j.
    pub(crate) fn column(
        &mut self,
        window: &SimWindow,
        transmitters: &[Point],
        rx: Point,
        block: &[Complex64],
        out: &mut [f64],
    ) -> Result<()> {
        let l = self.antennas;
        match self.factor(window, transmitters, rx, block)? {
            None => out.iter_mut().for_each(|s| *s = f64::INFINITY),
            Some(chol) => {
                for (j, s) in out.iter_mut().enumerate() {
                    *s = downdate_sinr(
                        &chol,
                        &block[j * l..(j + 1) * l],
                        self.gains[j],
                        &mut self.scratch,
                    );
                }
            }
        }
        Ok(())
    }

    fn single(
        &mut self,
        window: &SimWindow,
        transmitters: &[Point],
        rx: Point,
        block: &[Complex64],
        tx: usize,
    ) -> Result<f64> {
        let l = self.antennas;
        Ok(match self.factor(window, transmitters, rx, block)? {
            None => f64::INFINITY,
            Some(chol) => downdate_sinr(
                &chol,
                &block[tx * l..(tx + 1) * l],
                self.gains[tx],
                &mut self.scratch,
            ),
        })
    }
}

fn check_dims(snapshot: &Snapshot, channels: &ChannelSet, params: &ModelParams) -> Result<()> {
    if channels.n_tx() != snapshot.n_tx()
        || channels.n_rx() != snapshot.n_rx()
        || channels.antennas() != params.antennas
    {
        return Err(Error::Domain(format!(
            "channel set {}x{}x{} does not match snapshot {}x{} with L={}",
            channels.n_tx(),
            channels.n_rx(),
            channels.antennas(),
            snapshot.n_tx(),
            snapshot.n_rx(),
            params.antennas
        )));
    }
    Ok(())
}

/// Optimum-combining SINR of transmitter `tx` at receiver `rx`.
pub fn optimum_combining_sinr(
    snapshot: &Snapshot,
    channels: &ChannelSet,
    params: &ModelParams,
    tx: usize,
    rx: usize,
) -> Result<f64> {
    check_dims(snapshot, channels, params)?;
    if tx >= snapshot.n_tx() || rx >= snapshot.n_rx() {
        return Err(Error::Domain(format!("pair ({tx}, {rx}) out of range")));
    }
    ReceiverWorkspace::new(params, &snapshot.window)?.single(
        &snapshot.window,
        &snapshot.transmitters,
        snapshot.receivers[rx],
        channels.receiver_block(rx),
        tx,
    )
}

/// SINR and capture flags for every (transmitter, receiver) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrTable {
    n_tx: usize,
    n_rx: usize,
    sinr: Vec<f64>,
    capture: Vec<bool>,
}

impl SinrTable {
    fn from_columns(
        n_tx: usize,
        n_rx: usize,
        beta: f64,
        columns: impl Iterator<Item = Result<Vec<f64>>>,
    ) -> Result<Self> {
        let mut sinr = vec![0.0; n_tx * n_rx];
        for (k, col) in columns.enumerate() {
            for (j, s) in col?.into_iter().enumerate() {
                sinr[j * n_rx + k] = s;
            }
        }
        let capture = sinr.iter().map(|&s| s >= beta).collect();
        Ok(Self {
            n_tx,
            n_rx,
            sinr,
            capture,
        })
    }

    /// Table from explicit SINR values, `sinr[j * n_rx + k]` for pair (j, k).
    pub fn from_values(n_tx: usize, n_rx: usize, sinr: Vec<f64>, beta: f64) -> Result<Self> {
        if sinr.len() != n_tx * n_rx {
            return Err(Error::Domain(format!(
                "{} SINR values for a {n_tx}x{n_rx} table",
                sinr.len()
            )));
        }
        if let Some(bad) = sinr.iter().find(|s| !(**s >= 0.0)) {
            return Err(Error::Domain(format!("SINR must be >= 0, got {bad}")));
        }
        let capture = sinr.iter().map(|&s| s >= beta).collect();
        Ok(Self {
            n_tx,
            n_rx,
            sinr,
            capture,
        })
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    pub fn sinr(&self, tx: usize, rx: usize) -> f64 {
        self.sinr[tx * self.n_rx + rx]
    }

    pub fn captured(&self, tx: usize, rx: usize) -> bool {
        self.capture[tx * self.n_rx + rx]
    }

    /// Capture flags of transmitter `tx` over all receivers.
    pub fn capture_row(&self, tx: usize) -> &[bool] {
        &self.capture[tx * self.n_rx..(tx + 1) * self.n_rx]
    }
}

/// Fills the full table from an explicit channel set, one covariance
/// factorization per receiver.
pub fn build_sinr_table(
    snapshot: &Snapshot,
    channels: &ChannelSet,
    params: &ModelParams,
) -> Result<SinrTable> {
    check_dims(snapshot, channels, params)?;
    let mut ws = ReceiverWorkspace::new(params, &snapshot.window)?;
    let n_tx = snapshot.n_tx();
    let columns = snapshot.receivers.iter().enumerate().map(|(k, &rx)| {
        let mut col = vec![0.0; n_tx];
        ws.column(
            &snapshot.window,
            &snapshot.transmitters,
            rx,
            channels.receiver_block(k),
            &mut col,
        )?;
        Ok(col)
    });
    SinrTable::from_columns(n_tx, snapshot.n_rx(), params.beta, columns)
}

/// Same table as `build_sinr_table(snapshot, &sample_channels(snapshot, L,
/// channel_seed), params)` without materializing the channel set.
pub fn simulate_sinr_table(
    snapshot: &Snapshot,
    params: &ModelParams,
    channel_seed: u64,
) -> Result<SinrTable> {
    let mut ws = ReceiverWorkspace::new(params, &snapshot.window)?;
    let n_tx = snapshot.n_tx();
    let mut block = Vec::with_capacity(n_tx * params.antennas);
    let columns = snapshot.receivers.iter().enumerate().map(|(k, &rx)| {
        fill_receiver_block(channel_seed, k, n_tx, params.antennas, &mut block);
        let mut col = vec![0.0; n_tx];
        ws.column(
            &snapshot.window,
            &snapshot.transmitters,
            rx,
            &block,
            &mut col,
        )?;
        Ok(col)
    });
    SinrTable::from_columns(n_tx, snapshot.n_rx(), params.beta, columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::explicit_sinr;
    use crate::simcore::{sample_channels, sample_snapshot};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn line_snapshot(tx: &[(f64, f64)], rx: &[(f64, f64)]) -> Snapshot {
        let pts = |v: &[(f64, f64)]| v.iter().map(|&(x, y)| Point::new(x, y)).collect::<Vec<_>>();
        let dirs = vec![Point::new(1.0, 0.0); tx.len()];
        Snapshot::new(SimWindow::guard(100.0, 0.5), pts(tx), pts(rx), dirs).unwrap()
    }

    #[test]
    fn scalar_noise_only() {
        let params = ModelParams {
            noise: 0.3,
            ..ModelParams::default()
        };
        let s = line_snapshot(&[(10.0, 10.0)], &[(12.0, 10.0)]);
        let h = c(0.6, -0.9);
        let ch = ChannelSet::from_vectors(1, &[vec![vec![h]]]);
        let sinr = optimum_combining_sinr(&s, &ch, &params, 0, 0).unwrap();
        let expected = 2f64.powi(-4) * h.norm_sqr() / 0.3;
        assert!((sinr / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_antennas_null_single_interferer() {
        let params = ModelParams {
            antennas: 2,
            ..ModelParams::default()
        };
        let s = line_snapshot(&[(10.0, 10.0), (11.0, 11.0)], &[(12.0, 10.0)]);
        let ch = ChannelSet::from_vectors(
            2,
            &[vec![
                vec![c(0.3, 0.1), c(-0.5, 0.8)],
                vec![c(1.1, -0.2), c(0.4, 0.4)],
            ]],
        );
        assert_eq!(
            optimum_combining_sinr(&s, &ch, &params, 0, 0).unwrap(),
            f64::INFINITY
        );
        let table = build_sinr_table(&s, &ch, &params).unwrap();
        assert!(table.sinr(0, 0).is_infinite() && table.sinr(1, 0).is_infinite());
    }

    #[test]
    fn noise_free_single_antenna_matches_ratio() {
        let s = line_snapshot(&[(10.0, 10.0), (20.0, 10.0), (10.0, 25.0)], &[(12.0, 10.0)]);
        let hs = [c(0.7, 0.2), c(-0.4, 1.0), c(0.9, -0.9)];
        let ch = ChannelSet::from_vectors(1, &[hs.iter().map(|&h| vec![h]).collect()]);
        let params = ModelParams::default();
        let p: Vec<f64> = s
            .transmitters
            .iter()
            .zip(hs.iter())
            .map(|(&t, h)| path_gain(s.window.distance_sq(t, s.receivers[0]), 4.0) * h.norm_sqr())
            .collect();
        let total: f64 = p.iter().sum();
        for j in 0..3 {
            let expected = p[j] / (total - p[j]);
            let got = optimum_combining_sinr(&s, &ch, &params, j, 0).unwrap();
            assert!(
                (got / expected - 1.0).abs() < 1e-9,
                "tx {j}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn table_matches_pairwise_and_streaming() {
        let params = ModelParams {
            lambda: 1e-3,
            p: 0.1,
            antennas: 2,
            beta: 1.0,
            ..ModelParams::default()
        };
        let w = SimWindow::torus(300.0);
        let s = sample_snapshot(&params, &w, 21).unwrap();
        let ch = sample_channels(&s, 2, 99);
        let table = build_sinr_table(&s, &ch, &params).unwrap();
        assert_eq!(table, simulate_sinr_table(&s, &params, 99).unwrap());
        for j in 0..s.n_tx() {
            for k in (0..s.n_rx()).step_by(7) {
                let a = table.sinr(j, k);
                let b = optimum_combining_sinr(&s, &ch, &params, j, k).unwrap();
                assert!(a == b || ((a - b) / b).abs() < 1e-9);
                assert_eq!(table.captured(j, k), a >= params.beta);
            }
        }
    }

    #[test]
    fn threshold_extremes() {
        let base = ModelParams {
            lambda: 1e-3,
            p: 0.1,
            ..ModelParams::default()
        };
        let w = SimWindow::torus(200.0);
        let s = sample_snapshot(&base, &w, 5).unwrap();
        let low = simulate_sinr_table(
            &s,
            &ModelParams {
                beta: 1e-300,
                ..base
            },
            1,
        )
        .unwrap();
        let high = simulate_sinr_table(
            &s,
            &ModelParams {
                beta: 1e300,
                ..base
            },
            1,
        )
        .unwrap();
        for j in 0..s.n_tx() {
            for k in 0..s.n_rx() {
                let v = low.sinr(j, k);
                assert!(v >= 0.0);
                if v.is_finite() && v > 0.0 {
                    assert!(low.captured(j, k));
                }
                assert_eq!(high.captured(j, k), high.sinr(j, k).is_infinite());
            }
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let s = line_snapshot(&[(1.0, 1.0)], &[(2.0, 2.0)]);
        let ch = ChannelSet::from_vectors(2, &[vec![vec![c(1.0, 0.0), c(0.0, 1.0)]]]);
        assert!(build_sinr_table(&s, &ch, &ModelParams::default()).is_err());
    }

    fn micro_instance() -> impl Strategy<
        Value = (
            usize,
            Vec<(f64, f64)>,
            (f64, f64),
            Vec<Vec<(f64, f64)>>,
            f64,
        ),
    > {
        (1usize..=4, 1usize..=5).prop_flat_map(|(l, n)| {
            (
                Just(l),
                prop::collection::vec((0.0..20.0f64, 0.0..20.0f64), n),
                (0.0..20.0f64, 0.0..20.0f64),
                prop::collection::vec(prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), l), n),
                1e-3..1.0f64,
            )
        })
    }

    proptest! {
        #[test]
        fn downdate_matches_explicit_inverse((l, tx, rx, h, noise) in micro_instance()) {
            let params = ModelParams { antennas: l, noise, alpha: 3.5, ..ModelParams::default() };
            let s = Snapshot::new(
                SimWindow::guard(20.0, 0.5),
                tx.iter().map(|&(x, y)| Point::new(x, y)).collect(),
                vec![Point::new(rx.0, rx.1)],
                vec![Point::new(1.0, 0.0); tx.len()],
            ).unwrap();
            let vecs: Vec<Vec<Complex64>> = h.iter().map(|v| v.iter().map(|&(a, b)| c(a, b)).collect()).collect();
            let ch = ChannelSet::from_vectors(l, &[vecs]);
            for j in 0..tx.len() {
                let fast = optimum_combining_sinr(&s, &ch, &params, j, 0).unwrap();
                let slow = explicit_sinr(&s, &ch, &params, j, 0).unwrap();
                prop_assert!(((fast - slow) / slow).abs() <= 1e-9, "{} vs {}", fast, slow);
            }
        }
    }
}
