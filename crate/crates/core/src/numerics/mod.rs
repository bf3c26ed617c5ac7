//! Special functions, quadrature and root finding used by the analytic
//! formulas. Nothing here knows about networks.

pub mod quadrature;
pub mod roots;
pub mod special;

pub use quadrature::{integrate, integrate_from, integrate_semi_infinite, QuadratureSpec};
pub use roots::bracketed_root;
pub use special::{
    erfc, gamma_fn, half_integer_gamma_ladder, regularized_upper_gamma, upper_incomplete_gamma,
};
