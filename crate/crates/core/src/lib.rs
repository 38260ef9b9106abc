//! Partition functions of 3-body Ising models on 2-colexes, estimated through
//! the color-code expectation value and stabilizer sampling.

pub mod colex;
pub mod error;
pub mod estimator;
pub mod gf2;
pub mod ising;
mod numeric;
pub mod qsim;
pub mod sampling;
pub mod stabilizer;

pub use error::{Error, Result};
