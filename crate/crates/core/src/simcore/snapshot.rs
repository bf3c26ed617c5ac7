use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::window::{Point, SimWindow};
use crate::analytic::ModelParams;
use crate::error::{Error, Result};

/// One slot of the network: Aloha-thinned transmitter and receiver sets plus
/// each transmitter's destination direction (destinations sit at infinity).
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub window: SimWindow,
    pub transmitters: Vec<Point>,
    pub receivers: Vec<Point>,
    /// Unit vector toward each transmitter's destination.
    pub dest_direction: Vec<Point>,
}

impl Snapshot {
    /// Snapshot with given positions; checks only that directions match.
    pub fn new(
        window: SimWindow,
        transmitters: Vec<Point>,
        receivers: Vec<Point>,
        dest_direction: Vec<Point>,
    ) -> Result<Self> {
        if transmitters.len() != dest_direction.len() {
            return Err(Error::Domain(format!(
                "{} transmitters but {} destination directions",
                transmitters.len(),
                dest_direction.len()
            )));
        }
        Ok(Self {
            window,
            transmitters,
            receivers,
            dest_direction,
        })
    }

    pub fn n_tx(&self) -> usize {
        self.transmitters.len()
    }

    pub fn n_rx(&self) -> usize {
        self.receivers.len()
    }

    /// Indices of transmitters whose progress is measured.
    pub fn eligible_transmitters(&self) -> impl Iterator<Item = usize> + '_ {
        self.transmitters
            .iter()
            .enumerate()
            .filter(|(_, p)| self.window.is_eligible(**p))
            .map(|(i, _)| i)
    }
}

fn poisson_count<R: Rng>(rng: &mut R, mean: f64) -> Result<usize> {
    if mean <= 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(mean).map_err(|e| Error::Numerical(format!("poisson({mean}): {e}")))?;
    Ok(dist.sample(rng) as usize)
}

fn uniform_point<R: Rng>(rng: &mut R, side: f64) -> Point {
    Point::new(rng.random::<f64>() * side, rng.random::<f64>() * side)
}

/// Draws one snapshot: Poisson counts with means `λp·side²` and
/// `λ(1−p)·side²`, uniform positions, uniform destination directions.
pub fn sample_snapshot(params: &ModelParams, window: &SimWindow, seed: u64) -> Result<Snapshot> {
    params.validate()?;
    window.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let area = window.area();
    let n_tx = poisson_count(&mut rng, params.lambda_t() * area)?;
    let n_rx = poisson_count(&mut rng, params.lambda_r() * area)?;
    let transmitters = (0..n_tx)
        .map(|_| uniform_point(&mut rng, window.side))
        .collect();
    let receivers = (0..n_rx)
        .map(|_| uniform_point(&mut rng, window.side))
        .collect();
    let dest_direction = (0..n_tx)
        .map(|_| {
            let angle = rng.random::<f64>() * TAU;
            Point::new(angle.cos(), angle.sin())
        })
        .collect();
    Ok(Snapshot {
        window: *window,
        transmitters,
        receivers,
        dest_direction,
    })
}
