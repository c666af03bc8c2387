//! Error type shared by every module in the crate.

use thiserror::Error;

/// Failure modes of state construction and the numerical operations.
///
/// Magnitudes attached to ill-conditioning and pole errors are lowered to
/// `f64` so the payload stays scalar-type independent.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two objects were combined whose basis labels disagree.
    #[error("basis mismatch: expected {expected}, found {found}")]
    BasisMismatch { expected: String, found: String },

    /// Two grid-sampled objects live on different grids.
    #[error("grid mismatch between operands")]
    GridMismatch,

    /// An argument lies outside the operation's domain.
    #[error("domain error: {what}")]
    Domain { what: String },

    /// A wavepacket reaches the grid boundary, where the periodic spectral
    /// translation would wrap it around.
    #[error("boundary error: {what}")]
    Boundary { what: String },

    /// A post-selection denominator is too small for a meaningful ratio.
    #[error(
        "ill-conditioned {what}: |amplitude| = {magnitude:.3e} below threshold {threshold:.3e}"
    )]
    IllConditioned {
        what: String,
        magnitude: f64,
        threshold: f64,
    },

    /// A closed-form denominator vanished; the weak value diverges.
    #[error("pole in {what}: |denominator| = {magnitude:.3e}")]
    Pole { what: String, magnitude: f64 },
}

impl Error {
    pub(crate) fn domain(what: impl Into<String>) -> Self {
        Error::Domain { what: what.into() }
    }

    pub(crate) fn boundary(what: impl Into<String>) -> Self {
        Error::Boundary { what: what.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
