//! Physical constants shared by every computation (CODATA 2018, exact or
//! recommended values).

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 2.997_924_58e8;

/// Identifier of the constants table, written into output metadata.
pub const CONSTANTS_VERSION: &str = "CODATA-2018";

/// Thermal wavelength ħc/(k_B T) in meters.
pub fn thermal_wavelength(temperature: f64) -> f64 {
    HBAR * C / (K_B * temperature)
}

/// Angular frequency 2π k_B T/ħ around which thermal emission is concentrated.
pub fn thermal_frequency(temperature: f64) -> f64 {
    2.0 * std::f64::consts::PI * K_B * temperature / HBAR
}
