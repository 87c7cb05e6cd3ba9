//! Exclusion regions for the complex roots of polynomials whose coefficients
//! in a fixed basis are nonnegative.

pub mod basis;
pub mod determinant;
pub mod error;
pub mod galedual;
pub mod grid;
pub mod manifest;
pub mod numeric;
pub mod randstudy;
pub mod rootfind;
pub mod rootlocus;
pub mod symbolic;
pub mod verify;

pub use basis::{BasisContext, BasisKind};
pub use error::{Error, Result};
pub use symbolic::{BivarPoly, Rational};
