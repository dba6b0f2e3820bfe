//! Special functions and vector wave functions used by the Green's-function engine.

mod bessel;
mod harmonics;
mod scaled;
mod waves;

pub use bessel::{
    riccati_deriv, sph_bessel_j, sph_bessel_j_scaled, sph_bessel_j_table, sph_bessel_y_table, sph_hankel1,
    sph_hankel1_scaled, sph_hankel1_table, RiccatiKind, MAX_ORDER,
};
pub(crate) use bessel::{riccati_h0, riccati_j0, riccati_table};
pub use harmonics::{sph_harmonic, HarmonicValue, LegendreRow, LegendreRows};
pub use scaled::Scaled;
pub use waves::{
    kz_branch, plane_wave, spherical_wave, AngularBlock, ComplexVec3, PairAngularSums, PlaneWaveKind,
    Polarization, Regularity, WaveIndex,
};
