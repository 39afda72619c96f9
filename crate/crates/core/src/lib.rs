//! Exact computations in the three-dimensional Sklyanin algebra, its elliptic
//! point scheme, and the blowup subalgebras cut out by divisors on the curve.

pub mod bridge;
pub mod error;
pub mod exactla;
pub mod hesse;
pub mod ncgraded;
pub mod paperchecks;

pub use error::{Error, Result};
