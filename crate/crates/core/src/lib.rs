//! Creative telescoping for bivariate hypergeometric terms.

pub mod arith;
pub mod cli;
pub mod engine;
pub mod error;
pub mod ore;
pub mod reduction;
pub mod term;
pub mod verify;

pub use error::{Error, Result};
