//! Exact arithmetic for patching on the Berkovich projective line over `Q_p`.

pub mod berkovich;
pub mod error;
pub mod exponent;
pub mod finite_field;
pub mod magnitude;
pub mod padic;
pub mod patching;
pub mod poly;
pub mod quadratic;
pub mod series;

pub use error::{Error, Result};
pub use exponent::{Exponent, ValueVector, Q};
