//! Non-archimedean dynamics of cubic polynomials over the field of Puiseux
//! series, with a floating-point bridge to the complex cubic family.

pub mod balls;
pub mod bridge;
pub mod coeff;
pub mod dynamics;
pub mod error;
pub mod parameter;
pub mod puiseux;

pub use error::{Error, Result, Rule};
