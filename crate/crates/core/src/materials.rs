//! Permittivity models, dipole polarizability, Planck statistics and the
//! point-particle validity diagnostics.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{thermal_frequency, thermal_wavelength, HBAR, K_B};
use crate::error::{Error, Result};

/// Frequency-dependent dielectric function ε(ω).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum DielectricModel {
    Vacuum,
    Constant {
        eps: Complex64,
    },
    /// Phonon-polariton (Lorentz) model
    /// `ε∞ (ω² - ω_LO² + iωγ) / (ω² - ω_TO² + iωγ)`.
    SicLorentz {
        eps_inf: f64,
        omega_lo: f64,
        omega_to: f64,
        gamma: f64,
    },
    /// Free-electron model `1 - ω_p² / (ω (ω + i ω_τ))`.
    Drude {
        omega_p: f64,
        omega_tau: f64,
    },
    /// Perfect reflector; has no finite ε.
    Mirror,
}

impl DielectricModel {
    /// Standard silicon carbide parameters.
    pub const fn sic() -> Self {
        DielectricModel::SicLorentz {
            eps_inf: 6.7,
            omega_lo: 1.82e14,
            omega_to: 1.48e14,
            gamma: 8.93e11,
        }
    }

    /// Drude gold.
    pub const fn gold() -> Self {
        DielectricModel::Drude {
            omega_p: 1.37e16,
            omega_tau: 4.06e13,
        }
    }

    pub fn is_mirror(&self) -> bool {
        matches!(self, DielectricModel::Mirror)
    }

    /// Angular-frequency windows (rad/s) where ε has sharp structure.
    pub fn resonance_window(&self) -> Option<(f64, f64)> {
        match *self {
            DielectricModel::SicLorentz { omega_lo, omega_to, .. } => {
                Some((omega_to.min(omega_lo), omega_to.max(omega_lo)))
            }
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DielectricModel::SicLorentz {
                eps_inf,
                omega_lo,
                omega_to,
                gamma,
            } => {
                if !(gamma > 0.0 && eps_inf > 0.0 && omega_lo > 0.0 && omega_to > 0.0) {
                    return Err(Error::Invalid("Lorentz model needs positive parameters".into()));
                }
            }
            DielectricModel::Drude { omega_p, omega_tau } => {
                if !(omega_tau > 0.0 && omega_p >= 0.0) {
                    return Err(Error::Invalid("Drude model needs ω_τ > 0 and ω_p >= 0".into()));
                }
            }
            DielectricModel::Constant { eps } => {
                if eps.im < 0.0 || !eps.re.is_finite() || !eps.im.is_finite() {
                    return Err(Error::Invalid("constant ε must be finite with Im ε >= 0".into()));
                }
            }
            DielectricModel::Vacuum | DielectricModel::Mirror => {}
        }
        Ok(())
    }
}

/// ε(ω) for a finite-permittivity model.
pub fn permittivity(model: &DielectricModel, omega: f64) -> Result<Complex64> {
    if !(omega > 0.0) {
        return Err(Error::domain(format!("ω must be positive, got {omega}")));
    }
    let w = Complex64::new(omega, 0.0);
    let i = Complex64::new(0.0, 1.0);
    Ok(match *model {
        DielectricModel::Vacuum => Complex64::new(1.0, 0.0),
        DielectricModel::Constant { eps } => eps,
        DielectricModel::SicLorentz {
            eps_inf,
            omega_lo,
            omega_to,
            gamma,
        } => eps_inf * (w * w - omega_lo * omega_lo + i * w * gamma) / (w * w - omega_to * omega_to + i * w * gamma),
        DielectricModel::Drude { omega_p, omega_tau } => 1.0 - omega_p * omega_p / (w * (w + i * omega_tau)),
        DielectricModel::Mirror => {
            return Err(Error::Unsupported("a mirror has no finite permittivity".into()));
        }
    })
}

/// Electric dipole polarizability `R³ (ε - 1)/(ε + 2)` of a small sphere, in m³.
pub fn polarizability(eps: Complex64, radius: f64) -> Result<Complex64> {
    let den = eps + 2.0;
    if den.norm() < 1e-12 {
        return Err(Error::PolarizabilityPole(den.norm()));
    }
    Ok((eps - 1.0) / den * radius.powi(3))
}

/// Mean energy `ħω / (e^{ħω/k_BT} - 1)` of a thermal mode, in J.
pub fn planck_weight(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) || !(temperature > 0.0) {
        return Err(Error::domain("Planck weight needs ω > 0 and T > 0"));
    }
    let e = HBAR * omega;
    Ok(e / (e / (K_B * temperature)).exp_m1())
}

/// A small spherical particle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticleSpec {
    pub material: DielectricModel,
    /// Radius in meters.
    pub radius: f64,
    /// Position in meters.
    pub position: [f64; 3],
    /// Temperature in kelvin.
    pub temperature: f64,
}

impl ParticleSpec {
    pub fn new(material: DielectricModel, radius: f64, position: [f64; 3], temperature: f64) -> Self {
        ParticleSpec {
            material,
            radius,
            position,
            temperature,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.material.is_mirror() {
            return Err(Error::Invalid("mirror particles do not emit or absorb; use a finite ε".into()));
        }
        self.material.validate()?;
        if !(self.radius > 0.0) {
            return Err(Error::Invalid("particle radius must be positive".into()));
        }
        if !(self.temperature > 0.0) {
            return Err(Error::Invalid("particle temperature must be positive".into()));
        }
        if self.position.iter().any(|c| !c.is_finite()) {
            return Err(Error::Invalid("particle position must be finite".into()));
        }
        Ok(())
    }

    pub fn pos(&self) -> Vector3<f64> {
        Vector3::from(self.position)
    }

    pub fn volume(&self) -> f64 {
        4.0 / 3.0 * std::f64::consts::PI * self.radius.powi(3)
    }

    pub fn with_temperature(&self, temperature: f64) -> Self {
        ParticleSpec { temperature, ..*self }
    }

    pub fn with_position(&self, position: [f64; 3]) -> Self {
        ParticleSpec { position, ..*self }
    }

    pub fn polarizability(&self, omega: f64) -> Result<Complex64> {
        polarizability(permittivity(&self.material, omega)?, self.radius)
    }
}

/// Ratio at or above which a check warns.
pub const VALIDITY_WARN: f64 = 0.1;
/// Ratio at or above which a check fails.
pub const VALIDITY_FAIL: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Warn,
    Fail,
}

impl Verdict {
    pub fn from_ratio(ratio: f64) -> Self {
        // ratios formed from decimal inputs land a few ulps either side of the thresholds
        let slack = 1.0 - 1e-12;
        if !(ratio < VALIDITY_FAIL * slack) {
            Verdict::Fail
        } else if ratio >= VALIDITY_WARN * slack {
            Verdict::Warn
        } else {
            Verdict::Pass
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityCheck {
    pub name: String,
    pub ratio: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub thermal_wavelength: f64,
    pub checks: Vec<ValidityCheck>,
    pub verdict: Verdict,
}

/// Dipole-limit diagnostics: `R/λ_T`, `R 2π|√ε(ω_T)| / λ_T` and `R / distance`
/// for every supplied distance to another object.
pub fn dipole_validity(particle: &ParticleSpec, distances: &[f64]) -> ValidityReport {
    let t = particle.temperature;
    let lambda = thermal_wavelength(t);
    let r = particle.radius;
    let mut checks = vec![ValidityCheck {
        name: "radius/thermal_wavelength".into(),
        ratio: r / lambda,
        verdict: Verdict::from_ratio(r / lambda),
    }];
    if let Ok(eps) = permittivity(&particle.material, thermal_frequency(t)) {
        let ratio = r * 2.0 * std::f64::consts::PI * eps.sqrt().norm() / lambda;
        checks.push(ValidityCheck {
            name: "radius/internal_wavelength".into(),
            ratio,
            verdict: Verdict::from_ratio(ratio),
        });
    }
    for (i, d) in distances.iter().enumerate() {
        let ratio = if *d > 0.0 { r / d } else { f64::INFINITY };
        checks.push(ValidityCheck {
            name: format!("radius/distance[{i}]"),
            ratio,
            verdict: Verdict::from_ratio(ratio),
        });
    }
    let verdict = checks.iter().map(|c| c.verdict).max().unwrap_or(Verdict::Pass);
    ValidityReport {
        thermal_wavelength: lambda,
        checks,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sic_static_limit() {
        let e = permittivity(&DielectricModel::sic(), 1e6).unwrap();
        let expect = 6.7 * 1.82e14f64.powi(2) / 1.48e14f64.powi(2);
        assert!((e.re - expect).abs() / expect < 1e-8);
        assert!((expect - 10.1317).abs() < 1e-3);
    }

    #[test]
    fn drude_without_plasma_is_vacuum() {
        let m = DielectricModel::Drude {
            omega_p: 0.0,
            omega_tau: 1e13,
        };
        assert_eq!(permittivity(&m, 3e14).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn gold_at_1e14() {
        // independent evaluation: 1 - wp^2 / (w^2 + w^2 wt^2/w^2 ...) expanded by hand
        let (wp, wt, w) = (1.37e16f64, 4.06e13f64, 1e14f64);
        let den = w * w + wt * wt;
        let expect = Complex64::new(1.0 - wp * wp / den, wp * wp * wt / (w * den));
        let e = permittivity(&DielectricModel::gold(), w).unwrap();
        assert!((e - expect).norm() / expect.norm() < 1e-13);
        assert!((e.re - (-16112.0)).abs() < 0.01, "{e}");
    }

    #[test]
    fn mirror_and_domain_errors() {
        assert!(matches!(permittivity(&DielectricModel::Mirror, 1e14), Err(Error::Unsupported(_))));
        assert!(matches!(permittivity(&DielectricModel::sic(), 0.0), Err(Error::Domain(_))));
        assert!(matches!(polarizability(Complex64::new(-2.0, 0.0), 1.0), Err(Error::PolarizabilityPole(_))));
    }

    #[test]
    fn polarizability_limits() {
        assert_eq!(polarizability(Complex64::new(1.0, 0.0), 1e-8).unwrap(), Complex64::new(0.0, 0.0));
        let a = polarizability(Complex64::new(1e8, 0.0), 2.0).unwrap();
        assert!((a.re - 8.0).abs() / 8.0 < 1e-7);
        // (2 + i)/(5 + i) = (2 + i)(5 - i)/26 = (11 + 3i)/26
        let r = 1e-8;
        let a = polarizability(Complex64::new(3.0, 1.0), r).unwrap();
        assert!((a.im - 3.0 / 26.0 * r.powi(3)).abs() < 1e-16 * r.powi(3));
        assert!((a.re - 11.0 / 26.0 * r.powi(3)).abs() < 1e-16 * r.powi(3));
    }

    #[test]
    fn planck_limits() {
        let t = 300.0;
        let w = 40.0 * K_B * t / HBAR;
        let n = planck_weight(w, t).unwrap() / (HBAR * w);
        assert!((n - 1.0 / (40f64.exp() - 1.0)).abs() / n < 1e-12);
        assert!((n - 4.248354255291589e-18).abs() / n < 1e-9);
        let small = planck_weight(1e-3 * K_B * t / HBAR * 1e-6, t).unwrap();
        assert!((small - K_B * t).abs() / (K_B * t) < 1e-8);
        let wt = thermal_frequency(t);
        let v = planck_weight(wt, t).unwrap();
        let expect = HBAR * wt / ((2.0 * std::f64::consts::PI).exp() - 1.0);
        assert!((v - expect).abs() / expect < 1e-12);
    }

    #[test]
    fn validity_examples() {
        let mut p = ParticleSpec::new(DielectricModel::Vacuum, 1e-9, [0.0; 3], 300.0);
        let rep = dipole_validity(&p, &[]);
        assert!((rep.thermal_wavelength - 7.63e-6).abs() < 0.01e-6);
        assert!(rep.checks.iter().all(|c| c.ratio < 1e-3));
        assert_eq!(rep.verdict, Verdict::Pass);

        p.radius = rep.thermal_wavelength;
        assert_eq!(dipole_validity(&p, &[]).verdict, Verdict::Fail);

        let p = ParticleSpec::new(DielectricModel::sic(), 1e-8, [0.0; 3], 300.0);
        let rep = dipole_validity(&p, &[1e-7]);
        let gap = rep.checks.last().unwrap();
        assert_eq!(gap.verdict, Verdict::Warn);
        assert_eq!(rep.verdict, Verdict::Warn);
    }

    #[test]
    fn mirror_particle_rejected() {
        let p = ParticleSpec::new(DielectricModel::Mirror, 1e-9, [0.0; 3], 300.0);
        assert!(p.validate().is_err());
    }
}
