//! Progress of opportunistic relaying in Poisson ad hoc networks with
//! multi-antenna receivers and slotted Aloha: closed forms, bounds, and a
//! Monte Carlo simulator to check them against.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod analytic;
pub mod error;
pub mod experiments;
pub mod numerics;
pub mod oracles;
pub mod routing;
pub mod simcore;
pub mod validation;

pub use error::{Error, Result};
