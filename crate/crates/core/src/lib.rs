//! Numerical verification of additive-twist identities for Dirichlet series
//! with Euler products.

pub mod arith;
pub mod catalog;
pub mod characters;
pub mod error;
pub mod invariants;
pub mod local;
pub mod real;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use real::{DoubleDouble, PrecisionMode, Real};
pub use series::CoeffSeries;
