use thiserror::Error;

use crate::greens::Dyad;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Result not representable as an unscaled f64 value.
    #[error("range error: {0}")]
    Range(String),

    #[error("outgoing wave evaluated at the origin")]
    Singularity,

    #[error("coincident points: {0}")]
    CoincidentPoints(String),

    /// A point lies on or inside a body where the Green's function is not defined.
    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("multipole sum not converged at l_cap = {l_cap} (last block ratio {last_ratio:.3e})")]
    NonConvergence {
        l_cap: usize,
        last_ratio: f64,
        partial: Box<Dyad>,
    },

    /// Raw cavity element evaluated at a zero of the regular function.
    #[error("cavity resonance at l = {l}, kR = {kr}")]
    Resonance { l: usize, kr: f64 },

    #[error("quadrature tolerance not met: estimate {estimate:.6e}, error {error:.3e}")]
    Accuracy { estimate: f64, error: f64 },

    #[error("unsupported query: {0}")]
    Unsupported(String),

    /// The interior argument of a Mie element is too large; use the mirror form.
    #[error("interior argument |n k R| = {0:.3e} too large; use the mirror limit")]
    UseMirror(f64),

    #[error("polarizability pole: |eps + 2| = {0:.3e}")]
    PolarizabilityPole(f64),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
