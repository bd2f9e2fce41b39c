//! C² quintic Hermite interpolatory subdivision on the Powell–Sabin 12-split.

pub mod bb_core;
pub mod error;
pub mod hermite;
pub mod linalg;
pub mod macro_solver;
pub mod scalar;
pub mod smoothness;
pub mod splits;
pub mod surface_io;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
