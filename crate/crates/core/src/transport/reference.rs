//! Closed-form spectral integrands used as references: vacuum HR and HT and
//! HR above a perfect mirror. These bypass the Green's-function machinery.

use std::f64::consts::PI;

use super::{finish, integrate_spectrum, material_windows, QuadratureConfig, TransferResult};
use crate::constants::C;
use crate::error::{Error, Result};
use crate::materials::{planck_weight, ParticleSpec};

/// Vacuum HR, `(4ħ/πc³) ∫ dω ω⁴ n(ω) Im α`.
pub fn hr_vacuum(particle: &ParticleSpec, quad: &QuadratureConfig) -> Result<TransferResult> {
    quad.validate()?;
    particle.validate()?;
    let kernel = |omega: f64| {
        let theta = planck_weight(omega, particle.temperature)?;
        Ok(4.0 / (PI * C * C * C) * omega.powi(3) * theta * particle.polarizability(omega)?.im)
    };
    let windows = material_windows(&[particle], None);
    let q = integrate_spectrum(kernel, particle.temperature, quad, &windows, 0.0)?;
    Ok(finish(&q, particle.volume(), 0))
}

/// Vacuum HT,
/// `(4ħ/πc⁴) ∫ dω ω⁵ n Im α₁ Im α₂ [1/d² + c²/(ω²d⁴) + 3c⁴/(ω⁴d⁶)]`.
pub fn ht_vacuum(p1: &ParticleSpec, p2: &ParticleSpec, quad: &QuadratureConfig) -> Result<TransferResult> {
    quad.validate()?;
    p1.validate()?;
    p2.validate()?;
    let d = (p1.pos() - p2.pos()).norm();
    if d == 0.0 {
        return Err(Error::CoincidentPoints("the two particles share a position".into()));
    }
    let kernel = |omega: f64| {
        let theta = planck_weight(omega, p1.temperature)?;
        let im = p1.polarizability(omega)?.im * p2.polarizability(omega)?.im;
        let s = C / (omega * d);
        let bracket = (1.0 + s * s + 3.0 * s.powi(4)) / (d * d);
        Ok(4.0 / (PI * C.powi(4)) * omega.powi(4) * theta * im * bracket)
    };
    let windows = material_windows(&[p1, p2], None);
    let q = integrate_spectrum(kernel, p1.temperature, quad, &windows, 0.0)?;
    Ok(finish(&q, p1.volume() * p2.volume(), 0))
}

/// HR at height `z` above a perfect mirror:
/// `H_vac - (ħ/πd³) ∫ dω ω n Im α [-sin 2kd + 2kd cos 2kd + 2k²d² sin 2kd]`.
pub fn hr_mirror_plate(particle: &ParticleSpec, quad: &QuadratureConfig) -> Result<TransferResult> {
    quad.validate()?;
    particle.validate()?;
    let d = particle.position[2];
    if !(d > 0.0) {
        return Err(Error::Geometry(format!("particle z = {d:e} m is not above the plate")));
    }
    let kernel = |omega: f64| {
        let theta = planck_weight(omega, particle.temperature)?;
        let im_a = particle.polarizability(omega)?.im;
        let vac = 4.0 / (PI * C * C * C) * omega.powi(3) * theta * im_a;
        let kd = omega / C * d;
        let (s, c) = (2.0 * kd).sin_cos();
        let bracket = -s + 2.0 * kd * c + 2.0 * kd * kd * s;
        Ok(vac - theta * im_a * bracket / (PI * d * d * d))
    };
    let windows = material_windows(&[particle], None);
    let q = integrate_spectrum(kernel, particle.temperature, quad, &windows, 0.0)?;
    Ok(finish(&q, particle.volume(), 0))
}
