use std::fmt;

use crate::algebra::Variant;

/// A single canonical coordinate (or coordinate pair) of a 6-complex number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    /// `v+`, polar only.
    Plus,
    /// `v-`, polar only.
    Minus,
    /// The pair `(v_k, ~v_k)`, identified by its radius `rho_k`.
    Pair(usize),
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Plus => write!(f, "v+"),
            Component::Minus => write!(f, "v-"),
            Component::Pair(k) => write!(f, "rho{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum HexaError {
    #[error("component x{index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("cannot combine a {left} number with a {right} number")]
    VariantMismatch { left: Variant, right: Variant },

    #[error("zero divisor: canonical component {component} vanishes")]
    ZeroDivisor { component: Component },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("root finding did not converge (worst residual {worst_residual:e})")]
    NonConvergence { worst_residual: f64 },

    #[error("degenerate path: {0}")]
    DegeneratePath(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, HexaError>;
