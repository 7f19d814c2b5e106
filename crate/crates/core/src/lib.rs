//! Numerical verification of the minimality identity for unit Killing
//! vector fields.

pub mod catalog;
pub mod error;
pub mod exprlang;
pub mod frame;
pub mod geometry;
pub mod minimality;
pub mod tolerances;

pub use error::{Error, Result};
pub use tolerances::Tolerances;
