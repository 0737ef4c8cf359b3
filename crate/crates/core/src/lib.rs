//! Polar and planar 6-complex numbers: arithmetic, canonical decomposition,
//! cosexponential functions, elementary functions, polynomial factorization and
//! contour integration.

pub mod algebra;
pub mod calculus;
pub mod canonical;
pub mod cli;
pub mod cosexp;
pub mod elementary;
pub mod error;
pub mod polyfactor;

pub use algebra::{HexaNumber, Matrix6, Variant};
pub use error::{Component, HexaError, Result};
