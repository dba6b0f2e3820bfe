//! Heat radiation of a point particle and heat transfer between two point
//! particles embedded in a sphere, plate, mirror-cavity or vacuum environment.
//!
//! The crate is organized bottom-up:
//!
//! * [`specfun`]: spherical Bessel/Hankel functions, harmonics, vector waves;
//! * [`materials`]: permittivity models, polarizability, Planck weight;
//! * [`greens`]: dyadic Green's functions and the traces the transport formulas consume;
//! * [`quadrature`]: adaptive Gauss–Kronrod integration;
//! * [`transport`]: spectral kernels, frequency integrals, closed-form references.

pub mod constants;
pub mod error;
pub mod greens;
pub mod materials;
pub mod quadrature;
pub mod specfun;
pub mod transport;

pub use error::{Error, Result};
