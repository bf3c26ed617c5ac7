//! Relay selection on a realized snapshot.
//!
//! Progress toward a destination at infinity is `z = r·cosθ`, the projection
//! of the transmitter-to-receiver displacement on the destination direction.

use crate::analytic::{poisson_below, ModelParams};
use crate::error::Result;
use crate::simcore::{SinrTable, Snapshot};

/// Outcome for one transmitter. `progress` is 0 when no relay is chosen or
/// the chosen relay did not capture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayDecision {
    pub tx_index: usize,
    pub relay_index: Option<usize>,
    pub progress: f64,
}

/// `(r², z)` of receiver `rx` seen from transmitter `tx`.
#[inline]
fn geometry(snapshot: &Snapshot, tx: usize, rx: usize) -> (f64, f64) {
    let (dx, dy) = snapshot
        .window
        .displacement(snapshot.transmitters[tx], snapshot.receivers[rx]);
    let dir = snapshot.dest_direction[tx];
    (dx * dx + dy * dy, dx * dir.x + dy * dir.y)
}

/// Progress `r·cosθ` made by handing the packet of `tx` to `rx`.
pub fn progress_toward(snapshot: &Snapshot, tx: usize, rx: usize) -> f64 {
    geometry(snapshot, tx, rx).1
}

/// Nearest receiver in the forward half-plane (`cosθ ≥ 0`).
pub fn select_nfp(snapshot: &Snapshot, tx: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for rx in 0..snapshot.n_rx() {
        let (r2, z) = geometry(snapshot, tx, rx);
        if z >= 0.0 && best.is_none_or(|(_, b)| r2 < b) {
            best = Some((rx, r2));
        }
    }
    best.map(|(rx, _)| rx)
}

pub fn nfp_decision(snapshot: &Snapshot, table: &SinrTable, tx: usize) -> RelayDecision {
    let relay = select_nfp(snapshot, tx);
    let progress = match relay {
        Some(rx) if table.captured(tx, rx) => progress_toward(snapshot, tx, rx),
        _ => 0.0,
    };
    RelayDecision {
        tx_index: tx,
        relay_index: relay,
        progress,
    }
}

/// Realized NFP progress: `r·cosθ` of the NFP relay if it captured, else 0.
pub fn nfp_progress(snapshot: &Snapshot, table: &SinrTable, tx: usize) -> f64 {
    nfp_decision(snapshot, table, tx).progress
}

/// Capturing receiver with the largest progress, if that progress is
/// positive. Otherwise the packet stays put.
pub fn select_msr(snapshot: &Snapshot, table: &SinrTable, tx: usize) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (rx, &cap) in table.capture_row(tx).iter().enumerate() {
        if !cap {
            continue;
        }
        let z = progress_toward(snapshot, tx, rx);
        if z > 0.0 && best.is_none_or(|(_, b)| z > b) {
            best = Some((rx, z));
        }
    }
    best
}

pub fn msr_decision(snapshot: &Snapshot, table: &SinrTable, tx: usize) -> RelayDecision {
    let chosen = select_msr(snapshot, table, tx);
    RelayDecision {
        tx_index: tx,
        relay_index: chosen.map(|c| c.0),
        progress: chosen.map_or(0.0, |c| c.1),
    }
}

/// Forward receiver maximizing expected progress `P_s(r)·r·cosθ`, chosen
/// from positions alone. Returns the receiver and its expected progress.
pub fn modified_msr_select(
    snapshot: &Snapshot,
    params: &ModelParams,
    tx: usize,
) -> Result<Option<(usize, f64)>> {
    let consts = params.derived()?;
    let offset = params.noise * params.beta;
    let mut best: Option<(usize, f64)> = None;
    for rx in 0..snapshot.n_rx() {
        let (r2, z) = geometry(snapshot, tx, rx);
        if z <= 0.0 {
            continue;
        }
        let value = poisson_below(consts.gamma_rate * r2 + offset, params.antennas) * z;
        if best.is_none_or(|(_, b)| value > b) {
            best = Some((rx, value));
        }
    }
    Ok(best)
}

/// Realized progress of the modified rule: the selected relay's `r·cosθ`
/// if it captured, else 0.
pub fn modified_msr_decision(
    snapshot: &Snapshot,
    table: &SinrTable,
    params: &ModelParams,
    tx: usize,
) -> Result<RelayDecision> {
    let relay = modified_msr_select(snapshot, params, tx)?.map(|c| c.0);
    let progress = match relay {
        Some(rx) if table.captured(tx, rx) => progress_toward(snapshot, tx, rx),
        _ => 0.0,
    };
    Ok(RelayDecision {
        tx_index: tx,
        relay_index: relay,
        progress,
    })
}
