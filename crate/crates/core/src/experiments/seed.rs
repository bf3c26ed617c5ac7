//! Seed derivation for parallel, order-independent trials.
//!
//! `derive_seed(master, path)` starts from `splitmix64(master)` and folds in
//! each path element `x` as `s ← splitmix64(s ^ splitmix64(x + K))` with
//! `K = 0x9E3779B97F4A7C15`. Trials use the path
//! `[point, trial, attempt, stream]`.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// The splitmix64 output function applied to `x + K`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |s, &x| splitmix64(s ^ splitmix64(x)))
}

/// Stream tags within one trial.
pub(crate) const SNAPSHOT_STREAM: u64 = 0;
pub(crate) const CHANNEL_STREAM: u64 = 1;
