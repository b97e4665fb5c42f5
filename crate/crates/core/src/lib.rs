//! Special values of zeta integrals and zeta series attached to polynomials
//! positive on the positive orthant.

pub mod bernoulli;
pub mod cli;
pub mod cubical;
pub mod error;
pub mod expand;
pub mod mpoly;
pub mod series;
pub mod values;

pub use error::{Error, Result};
