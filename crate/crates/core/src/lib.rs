//! Exact and high-precision machinery for certifying congruence primes of
//! hermitian Ikeda lifts over imaginary quadratic fields.

pub mod certify;
pub mod error;
pub mod exact;
pub mod heckechar;
pub mod ikeda;
pub mod lseries;
pub mod qexp;

pub use error::{Error, Result};
