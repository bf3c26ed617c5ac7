use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::snapshot::Snapshot;

/// Rayleigh channel vectors `h_jk ∈ ℂ^L` for every (transmitter, receiver)
/// pair, with i.i.d. `CN(0, 1)` entries.
///
/// Each receiver draws its block from its own ChaCha stream, so any subset of
/// receivers can be regenerated independently and in any order.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    antennas: usize,
    n_tx: usize,
    n_rx: usize,
    // receiver-major: [k][j][l]
    data: Vec<Complex64>,
}

impl ChannelSet {
    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    /// `h_jk`.
    pub fn vector(&self, tx: usize, rx: usize) -> &[Complex64] {
        let start = (rx * self.n_tx + tx) * self.antennas;
        &self.data[start..start + self.antennas]
    }

    /// All transmitters' channels to receiver `rx`, transmitter-major.
    pub fn receiver_block(&self, rx: usize) -> &[Complex64] {
        let len = self.n_tx * self.antennas;
        &self.data[rx * len..(rx + 1) * len]
    }

    /// Assembles a channel set from explicit vectors, `vectors[k][j]` being
    /// `h_jk`. Every vector must have `antennas` entries.
    pub fn from_vectors(antennas: usize, vectors: &[Vec<Vec<Complex64>>]) -> Self {
        let n_rx = vectors.len();
        let n_tx = vectors.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(n_rx * n_tx * antennas);
        for per_rx in vectors {
            assert_eq!(per_rx.len(), n_tx, "ragged channel matrix");
            for h in per_rx {
                assert_eq!(h.len(), antennas, "channel vector length");
                data.extend_from_slice(h);
            }
        }
        Self {
            antennas,
            n_tx,
            n_rx,
            data,
        }
    }
}

#[inline]
pub(crate) fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Fills `out` with receiver `rx`'s channels from `n_tx` transmitters.
pub(crate) fn fill_receiver_block(
    seed: u64,
    rx: usize,
    n_tx: usize,
    antennas: usize,
    out: &mut Vec<Complex64>,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rx as u64);
    out.clear();
    out.extend((0..n_tx * antennas).map(|_| complex_normal(&mut rng)));
}

/// Draws the full channel set of `snapshot` for `antennas` receive antennas.
pub fn sample_channels(snapshot: &Snapshot, antennas: usize, seed: u64) -> ChannelSet {
    let n_tx = snapshot.n_tx();
    let n_rx = snapshot.n_rx();
    let mut data = Vec::with_capacity(n_tx * n_rx * antennas);
    let mut block = Vec::new();
    for rx in 0..n_rx {
        fill_receiver_block(seed, rx, n_tx, antennas, &mut block);
        data.extend_from_slice(&block);
    }
    ChannelSet {
        antennas,
        n_tx,
        n_rx,
        data,
    }
}
