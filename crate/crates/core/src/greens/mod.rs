//! Dyadic Green's functions of the supported environments.
//!
//! Two kinds of query are served:
//!
//! * the full 3×3 tensor `G(r, r')` at separated points (vacuum, sphere,
//!   point-sphere), consumed by the heat-transfer kernel;
//! * the coincident trace `Σ_i Im G_ii(r, r)` (all environments), consumed by
//!   the heat-radiation kernel. The real part of `G` diverges at coincident
//!   points and is never formed.
//!
//! [`PreparedGf`] binds an environment to a point pair and keeps whatever can
//! be reused across frequencies (angular sums of the sphere expansion).

mod cavity;
mod free;
pub(crate) mod mie;
mod plate;
mod sphere;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::C;
use crate::error::{Error, Result};
use crate::materials::{permittivity, polarizability, DielectricModel};
use crate::specfun::MAX_ORDER;

pub use cavity::{cavity_t_mirror, im_g_cavity_trace, CAVITY_REL_TOL};
pub use free::{g0, g_pp, im_g0_trace, im_trace_pp};
pub use mie::{mie_t, mie_t_mirror, SphereMedium, MAX_INTERIOR_ARGUMENT};
pub use plate::{fresnel, im_g_trace_plate, im_g_trace_plate_mirror};
pub use sphere::SphereScene;

/// A 3×3 complex Cartesian dyad.
pub type Dyad = Matrix3<Complex64>;

/// Value of a Green's function at a point pair, with truncation diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct GreensTensor {
    /// Cartesian components, m⁻¹.
    pub matrix: Dyad,
    /// Highest multipole order summed (0 for closed forms).
    pub l_max: usize,
    /// Estimated Frobenius norm of the omitted tail.
    pub tail_estimate: f64,
}

impl GreensTensor {
    pub(crate) fn exact(matrix: Dyad) -> Self {
        GreensTensor {
            matrix,
            l_max: 0,
            tail_estimate: 0.0,
        }
    }

    /// `Σ_ij |G_ij|²`.
    pub fn abs_sq_sum(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `Σ_i Im G_ii(r, r)` with truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImTrace {
    /// m⁻¹.
    pub value: f64,
    pub l_max: usize,
    pub tail_estimate: f64,
}

impl ImTrace {
    pub(crate) fn exact(value: f64) -> Self {
        ImTrace {
            value,
            l_max: 0,
            tail_estimate: 0.0,
        }
    }
}

/// Truncation policy for multipole sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LPolicy {
    /// Stop after three consecutive orders each contribute less than
    /// `rel_tol` of the running norm; fail at `l_cap`.
    Adaptive { rel_tol: f64, l_cap: usize },
    /// Sum exactly orders `1..=n`.
    Fixed(usize),
}

impl Default for LPolicy {
    fn default() -> Self {
        LPolicy::Adaptive {
            rel_tol: 1e-8,
            l_cap: MAX_ORDER,
        }
    }
}

impl LPolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            LPolicy::Adaptive { rel_tol, l_cap } => {
                if !(rel_tol > 0.0 && rel_tol < 1.0) {
                    return Err(Error::Invalid(format!("l-sum rel_tol must lie in (0, 1), got {rel_tol}")));
                }
                if l_cap == 0 || l_cap > crate::specfun::MAX_ORDER {
                    return Err(Error::Invalid(format!(
                        "l_cap must lie in 1..={}",
                        crate::specfun::MAX_ORDER
                    )));
                }
            }
            LPolicy::Fixed(n) => {
                if n > crate::specfun::MAX_ORDER {
                    return Err(Error::Invalid(format!("fixed l_max above {}", crate::specfun::MAX_ORDER)));
                }
            }
        }
        Ok(())
    }
}

fn default_mu() -> f64 {
    1.0
}

/// Geometry surrounding the point particles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Environment {
    Vacuum,
    /// Homogeneous sphere; `material` may be [`DielectricModel::Mirror`].
    Sphere {
        radius: f64,
        material: DielectricModel,
        #[serde(default = "default_mu")]
        mu: f64,
        center: [f64; 3],
    },
    /// Half space `z <= 0`; evaluation points need `z > 0`.
    Plate {
        material: DielectricModel,
        #[serde(default = "default_mu")]
        mu: f64,
    },
    /// Spherical hole of radius `radius` in a perfect reflector.
    MirrorCavity { radius: f64, center: [f64; 3] },
    /// Sphere replaced by a dipole scatterer at its center.
    PointSphere {
        radius: f64,
        material: DielectricModel,
        center: [f64; 3],
    },
}

/// Relative margin by which evaluation points must clear a boundary.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

impl Environment {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Environment::Vacuum => Ok(()),
            Environment::Sphere {
                radius, material, mu, ..
            } => {
                positive_radius(radius)?;
                material.validate()?;
                if matches!(material, DielectricModel::Vacuum) {
                    return Err(Error::Invalid("a vacuum sphere is the vacuum environment".into()));
                }
                if !(mu > 0.0) {
                    return Err(Error::Invalid("sphere permeability must be positive".into()));
                }
                Ok(())
            }
            Environment::Plate { material, mu } => {
                material.validate()?;
                if !(mu > 0.0) {
                    return Err(Error::Invalid("plate permeability must be positive".into()));
                }
                Ok(())
            }
            Environment::MirrorCavity { radius, .. } => positive_radius(radius),
            Environment::PointSphere { radius, material, .. } => {
                positive_radius(radius)?;
                if material.is_mirror() {
                    return Err(Error::Invalid("point-sphere approximation needs a finite permittivity".into()));
                }
                material.validate()
            }
        }
    }

    /// Checks that `r` lies in the region where the Green's function is defined.
    pub fn check_point(&self, r: &Vector3<f64>) -> Result<()> {
        match *self {
            Environment::Vacuum => Ok(()),
            Environment::Sphere { radius, center, .. } => {
                let d = (r - Vector3::from(center)).norm();
                if d <= radius * (1.0 + BOUNDARY_MARGIN) {
                    return Err(Error::Geometry(format!(
                        "point at distance {d:e} m from the center is not outside the sphere of radius {radius:e} m"
                    )));
                }
                Ok(())
            }
            Environment::PointSphere { center, .. } => {
                if *r == Vector3::from(center) {
                    return Err(Error::CoincidentPoints("point on the point-sphere scatterer".into()));
                }
                Ok(())
            }
            Environment::Plate { .. } => {
                if !(r.z > 0.0) {
                    return Err(Error::Geometry(format!("point z = {:e} m is not above the plate", r.z)));
                }
                Ok(())
            }
            Environment::MirrorCavity { radius, center } => {
                let d = (r - Vector3::from(center)).norm();
                if d >= radius * (1.0 - BOUNDARY_MARGIN) {
                    return Err(Error::Geometry(format!(
                        "point at distance {d:e} m from the center is not inside the cavity of radius {radius:e} m"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Distance from `r` to the nearest body surface (`None` in vacuum).
    pub fn distance_to_surface(&self, r: &Vector3<f64>) -> Option<f64> {
        match *self {
            Environment::Vacuum => None,
            Environment::Sphere { radius, center, .. } | Environment::PointSphere { radius, center, .. } => {
                Some((r - Vector3::from(center)).norm() - radius)
            }
            Environment::Plate { .. } => Some(r.z),
            Environment::MirrorCavity { radius, center } => Some(radius - (r - Vector3::from(center)).norm()),
        }
    }

    /// Angular-frequency window with sharp material structure, if any.
    pub fn resonance_window(&self) -> Option<(f64, f64)> {
        match self {
            Environment::Sphere { material, .. }
            | Environment::Plate { material, .. }
            | Environment::PointSphere { material, .. } => material.resonance_window(),
            _ => None,
        }
    }
}

fn positive_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Invalid(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

fn medium(material: &DielectricModel, mu: f64, omega: f64) -> Result<SphereMedium> {
    if material.is_mirror() {
        Ok(SphereMedium::Mirror)
    } else {
        Ok(SphereMedium::Dielectric {
            eps: permittivity(material, omega)?,
            mu,
        })
    }
}

/// An environment bound to a point pair `(r, r')`; `r == r'` selects the
/// coincident-trace queries.
#[derive(Debug)]
pub struct PreparedGf {
    env: Environment,
    r: Vector3<f64>,
    rp: Vector3<f64>,
    policy: LPolicy,
    sphere: Option<SphereScene>,
}

impl PreparedGf {
    pub fn new(env: &Environment, r: Vector3<f64>, rp: Vector3<f64>, policy: LPolicy) -> Result<Self> {
        env.validate()?;
        policy.validate()?;
        env.check_point(&r)?;
        env.check_point(&rp)?;
        let sphere = match *env {
            Environment::Sphere { radius, center, .. } => Some(SphereScene::new(radius, center, r, rp)?),
            _ => None,
        };
        Ok(PreparedGf {
            env: *env,
            r,
            rp,
            policy,
            sphere,
        })
    }

    pub fn environment(&self) -> &Environment {
        &self.env
    }

    pub fn is_coincident(&self) -> bool {
        self.r == self.rp
    }

    /// `G(r, r')` at wavenumber `k = ω/c` for separated points.
    pub fn tensor(&self, k: f64) -> Result<GreensTensor> {
        if self.is_coincident() {
            return Err(Error::CoincidentPoints("the full tensor needs separated points".into()));
        }
        let omega = k * C;
        match self.env {
            Environment::Vacuum => Ok(GreensTensor::exact(g0(&self.r, &self.rp, k)?)),
            Environment::Sphere { material, mu, .. } => {
                let scene = self.sphere.as_ref().expect("sphere scene prepared");
                scene.tensor(k, medium(&material, mu, omega)?, self.policy)
            }
            Environment::PointSphere {
                radius,
                material,
                center,
            } => {
                let alpha = polarizability(permittivity(&material, omega)?, radius)?;
                Ok(GreensTensor::exact(g_pp(&self.r, &self.rp, k, &Vector3::from(center), alpha)?))
            }
            Environment::Plate { .. } => Err(Error::Unsupported(
                "plate Green's function between distinct points is not implemented".into(),
            )),
            Environment::MirrorCavity { .. } => Err(Error::Unsupported(
                "cavity Green's function between distinct points is not implemented".into(),
            )),
        }
    }

    /// Cumulative multipole sums `G₀ + Σ_{l<=L}` for `L = 0..=l_max` (sphere only).
    pub fn partial_tensors(&self, k: f64, l_max: usize) -> Result<Vec<Dyad>> {
        match self.env {
            Environment::Sphere { material, mu, .. } => {
                let scene = self.sphere.as_ref().expect("sphere scene prepared");
                scene.partial_tensors(k, medium(&material, mu, k * C)?, l_max)
            }
            _ => Err(Error::Unsupported("multipole partial sums exist only for the sphere".into())),
        }
    }

    /// `Σ_i Im G_ii(r, r)` for coincident points.
    pub fn im_trace(&self, k: f64) -> Result<ImTrace> {
        if !self.is_coincident() {
            return Err(Error::Invalid("the coincident trace needs r == r'".into()));
        }
        let omega = k * C;
        match self.env {
            Environment::Vacuum => Ok(ImTrace::exact(im_g0_trace(k))),
            Environment::Sphere { material, mu, .. } => {
                let scene = self.sphere.as_ref().expect("sphere scene prepared");
                scene.im_trace(k, medium(&material, mu, omega)?, self.policy)
            }
            Environment::PointSphere {
                radius,
                material,
                center,
            } => {
                let alpha = polarizability(permittivity(&material, omega)?, radius)?;
                Ok(ImTrace::exact(im_trace_pp(&self.r, k, &Vector3::from(center), alpha)?))
            }
            Environment::Plate { material, mu } => {
                let d = self.r.z;
                if material.is_mirror() {
                    Ok(ImTrace::exact(im_g_trace_plate_mirror(d, k)?))
                } else {
                    Ok(ImTrace::exact(im_g_trace_plate(d, k, permittivity(&material, omega)?, mu)?))
                }
            }
            Environment::MirrorCavity { radius, center } => {
                let policy = match self.policy {
                    LPolicy::Adaptive { l_cap, .. } => LPolicy::Adaptive {
                        rel_tol: CAVITY_REL_TOL,
                        l_cap,
                    },
                    p => p,
                };
                im_g_cavity_trace(&(self.r - Vector3::from(center)), k, radius, policy)
            }
        }
    }
}

/// `acc += c * m` for a real matrix `m`.
pub(crate) fn add_scaled(acc: &mut Dyad, m: &Matrix3<f64>, c: Complex64) {
    for (a, v) in acc.iter_mut().zip(m.iter()) {
        *a += c * *v;
    }
}

/// Frobenius norm of a dyad.
pub(crate) fn frobenius(d: &Dyad) -> f64 {
    d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Neumaier-compensated running sum of dyads.
#[derive(Debug, Clone)]
pub(crate) struct DyadSum {
    sum: Dyad,
    comp: Dyad,
}

impl DyadSum {
    pub fn new(start: Dyad) -> Self {
        DyadSum {
            sum: start,
            comp: Dyad::zeros(),
        }
    }

    pub fn add(&mut self, x: &Dyad) {
        for i in 0..9 {
            let s = self.sum[i];
            let v = x[i];
            let t = s + v;
            let c = |s: f64, v: f64, t: f64| {
                if s.abs() >= v.abs() {
                    (s - t) + v
                } else {
                    (v - t) + s
                }
            };
            self.comp[i] += Complex64::new(c(s.re, v.re, t.re), c(s.im, v.im, t.im));
            self.sum[i] = t;
        }
    }

    pub fn value(&self) -> Dyad {
        self.sum + self.comp
    }
}
