//! Monte Carlo realization of the network: point sampling, Rayleigh channels
//! and optimum-combining SINR in a finite square.

mod channel;
pub(crate) mod linalg;
mod sinr;
mod snapshot;
mod window;

pub(crate) use channel::complex_normal;
pub use channel::{sample_channels, ChannelSet};
pub(crate) use sinr::downdate_sinr;
pub use sinr::{
    build_sinr_table, optimum_combining_sinr, path_gain, simulate_sinr_table, SinrTable,
    DOWNDATE_TOLERANCE,
};
pub use snapshot::{sample_snapshot, Snapshot};
pub use window::{Boundary, Point, SimWindow};
