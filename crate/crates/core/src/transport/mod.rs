//! Spectral kernels and frequency integrals for heat radiation (HR) of one
//! point particle and heat transfer (HT) between two.
//!
//! * HR: `H = (8ħ/c²) ∫ dω ω³ n(ω) Im α₁ Σ_i Im G_ii(r₁, r₁)`;
//! * HT: `H = (32πħ/c⁴) ∫ dω ω⁵ n(ω) Im α₁ Im α₂ Σ_ij |G_ij(r₂, r₁)|²`,
//!
//! with `n = 1/(e^{ħω/k_BT₁} - 1)` and `G` the Green's function of the
//! environment without the particles. Integrals run over
//! `x = ħω/(k_B T₁)` with adaptive Gauss–Kronrod panels.

mod reference;
mod study;

use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR, K_B};
use crate::error::{Error, Result};
use crate::greens::{Environment, LPolicy, PreparedGf};
use crate::materials::{planck_weight, ParticleSpec};
use crate::quadrature::{integrate, QuadOptions, QuadResult};

pub use reference::{hr_mirror_plate, hr_vacuum, ht_vacuum};
pub use study::{
    convergence_study, hr_isolated_sphere, net_ht, total_absorption, ConvergencePoint, IsolatedSpherePartials,
};

fn default_x_min() -> f64 {
    1e-4
}
fn default_x_max() -> f64 {
    40.0
}
fn default_rel_tol() -> f64 {
    1e-6
}
fn default_window_panels() -> usize {
    16
}
fn default_max_panels() -> usize {
    4000
}
fn default_true() -> bool {
    true
}

/// Frequency-integration policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Lower end of `x = ħω/(k_B T₁)`.
    #[serde(default = "default_x_min")]
    pub x_min: f64,
    /// Upper end of `x`.
    #[serde(default = "default_x_max")]
    pub x_max: f64,
    /// Relative tolerance of the frequency integral.
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    /// Extra angular-frequency windows (rad/s) split into forced panels.
    #[serde(default)]
    pub windows: Vec<[f64; 2]>,
    /// Initial panels per window; material resonance windows are added automatically.
    #[serde(default = "default_window_panels")]
    pub window_panels: usize,
    #[serde(default = "default_max_panels")]
    pub max_panels: usize,
    #[serde(default)]
    pub l_policy: LPolicy,
    /// Evaluate frequency samples on the rayon pool.
    #[serde(default = "default_true")]
    pub parallel: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            x_min: default_x_min(),
            x_max: default_x_max(),
            rel_tol: default_rel_tol(),
            windows: Vec::new(),
            window_panels: default_window_panels(),
            max_panels: default_max_panels(),
            l_policy: LPolicy::default(),
            parallel: true,
        }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min > 0.0 && self.x_min < self.x_max && self.x_max.is_finite()) {
            return Err(Error::Invalid(format!(
                "need 0 < x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::Invalid(format!("rel_tol must lie in (0, 1e-2], got {}", self.rel_tol)));
        }
        if self.windows.iter().any(|w| !(w[0] > 0.0 && w[0] < w[1])) {
            return Err(Error::Invalid("refinement windows need 0 < lo < hi".into()));
        }
        if self.window_panels == 0 || self.max_panels == 0 {
            return Err(Error::Invalid("panel counts must be positive".into()));
        }
        self.l_policy.validate()
    }

    /// Breakpoints in `x` at temperature `t` for the given extra windows.
    fn breakpoints(&self, t: f64, extra: &[(f64, f64)]) -> Vec<f64> {
        let scale = HBAR / (K_B * t);
        let mut cuts = Vec::new();
        let windows = self.windows.iter().map(|w| (w[0], w[1])).chain(extra.iter().copied());
        for (lo, hi) in windows {
            let (a, b) = (lo * scale, hi * scale);
            let n = self.window_panels;
            cuts.extend((0..=n).map(|i| a + (b - a) * i as f64 / n as f64));
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts
    }

    fn options(&self, abs_tol: f64) -> QuadOptions {
        QuadOptions {
            rel_tol: self.rel_tol,
            abs_tol,
            max_panels: self.max_panels,
            parallel: self.parallel,
        }
    }
}

/// Integrated HR or HT with diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferResult {
    /// W.
    pub power: f64,
    /// `power / V₁` (HR, W m⁻³) or `power / (V₁ V₂)` (HT, W m⁻⁶).
    pub normalized: f64,
    /// Estimated absolute quadrature error, W.
    pub error: f64,
    /// Largest multipole order used at any frequency (0 for closed forms).
    pub max_l: usize,
    pub evaluations: usize,
    pub panels: usize,
}

/// Relative floor of the absolute tolerance, against the vacuum reference.
/// Null results (mirror cavity) then converge instead of chasing round-off.
const ABS_TOL_FLOOR: f64 = 1e-6;

/// Angular frequency of `x` at temperature `t`.
pub fn omega_of(x: f64, t: f64) -> f64 {
    x * K_B * t / HBAR
}

fn material_windows(particles: &[&ParticleSpec], env: Option<&Environment>) -> Vec<(f64, f64)> {
    let mut w: Vec<(f64, f64)> = particles.iter().filter_map(|p| p.material.resonance_window()).collect();
    if let Some(e) = env.and_then(|e| e.resonance_window()) {
        w.push(e);
    }
    w.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    w.dedup();
    w
}

/// Integrates `kernel(ω)` (W per rad/s) at temperature `t`.
pub(crate) fn integrate_spectrum<F>(
    kernel: F,
    t: f64,
    quad: &QuadratureConfig,
    windows: &[(f64, f64)],
    abs_tol: f64,
) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let jac = K_B * t / HBAR;
    let cuts = quad.breakpoints(t, windows);
    let f = |x: f64| kernel(omega_of(x, t)).map(|v| v * jac);
    integrate(f, quad.x_min, quad.x_max, &cuts, &quad.options(abs_tol))
}

/// `(8/c²) ω² Θ(ω, T) Im α · trace`, the HR spectral density for a given trace.
fn hr_density(omega: f64, particle: &ParticleSpec, trace: f64) -> Result<f64> {
    let theta = planck_weight(omega, particle.temperature)?;
    let im_a = particle.polarizability(omega)?.im;
    Ok(8.0 / (C * C) * omega * omega * theta * im_a * trace)
}

/// `(32π/c⁴) ω⁴ Θ(ω, T₁) Im α₁ Im α₂ · Σ|G|²`.
fn ht_density(omega: f64, p1: &ParticleSpec, p2: &ParticleSpec, abs_sq: f64) -> Result<f64> {
    let theta = planck_weight(omega, p1.temperature)?;
    let im = p1.polarizability(omega)?.im * p2.polarizability(omega)?.im;
    let w2 = omega * omega;
    Ok(32.0 * std::f64::consts::PI / (C * C * C * C) * w2 * w2 * theta * im * abs_sq)
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain(format!("ω must be positive, got {omega}")));
    }
    Ok(())
}

/// HR spectral density (W per rad/s) of `particle` in `env` at `omega`.
pub fn hr_kernel(omega: f64, particle: &ParticleSpec, env: &Environment) -> Result<f64> {
    check_omega(omega)?;
    particle.validate()?;
    let gf = PreparedGf::new(env, particle.pos(), particle.pos(), LPolicy::default())?;
    hr_density(omega, particle, gf.im_trace(omega / C)?.value)
}

/// Orders the pair so that `Σ|G(r₂, r₁)|²`, symmetric by reciprocity, is
/// evaluated identically for either particle order.
fn canonical_pair(r1: Vector3<f64>, r2: Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let key = |v: &Vector3<f64>| [v.x, v.y, v.z];
    let (k1, k2) = (key(&r1), key(&r2));
    let ord = k1
        .iter()
        .zip(&k2)
        .map(|(a, b)| a.total_cmp(b))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal);
    if ord.is_gt() {
        (r2, r1)
    } else {
        (r1, r2)
    }
}

fn prepare_pair(p1: &ParticleSpec, p2: &ParticleSpec, env: &Environment, policy: LPolicy) -> Result<PreparedGf> {
    p1.validate()?;
    p2.validate()?;
    if p1.pos() == p2.pos() {
        return Err(Error::CoincidentPoints("the two particles share a position".into()));
    }
    let (a, b) = canonical_pair(p2.pos(), p1.pos());
    PreparedGf::new(env, a, b, policy)
}

/// HT spectral density (W per rad/s) from `p1` to `p2` in `env` at `omega`.
pub fn ht_kernel(omega: f64, p1: &ParticleSpec, p2: &ParticleSpec, env: &Environment) -> Result<f64> {
    check_omega(omega)?;
    let gf = prepare_pair(p1, p2, env, LPolicy::default())?;
    ht_density(omega, p1, p2, gf.tensor(omega / C)?.abs_sq_sum())
}

fn finish(q: &QuadResult, volume: f64, max_l: usize) -> TransferResult {
    TransferResult {
        power: q.value,
        normalized: q.value / volume,
        error: q.error,
        max_l,
        evaluations: q.evaluations,
        panels: q.panels.len(),
    }
}

/// Heat radiated by `particle` (at its own temperature) in `env`.
pub fn hr(particle: &ParticleSpec, env: &Environment, quad: &QuadratureConfig) -> Result<TransferResult> {
    quad.validate()?;
    particle.validate()?;
    let gf = PreparedGf::new(env, particle.pos(), particle.pos(), quad.l_policy)?;
    let reference = hr_vacuum(particle, quad)?.power;
    let max_l = AtomicUsize::new(0);
    let kernel = |omega: f64| {
        let tr = gf.im_trace(omega / C)?;
        max_l.fetch_max(tr.l_max, Ordering::Relaxed);
        hr_density(omega, particle, tr.value)
    };
    let windows = material_windows(&[particle], Some(env));
    let q = integrate_spectrum(
        kernel,
        particle.temperature,
        quad,
        &windows,
        ABS_TOL_FLOOR * quad.rel_tol * reference.abs(),
    )?;
    Ok(finish(&q, particle.volume(), max_l.into_inner()))
}

/// HT integral plus the panels it converged on.
pub(crate) fn ht_with_panels(
    p1: &ParticleSpec,
    p2: &ParticleSpec,
    env: &Environment,
    quad: &QuadratureConfig,
) -> Result<(TransferResult, QuadResult)> {
    quad.validate()?;
    let gf = prepare_pair(p1, p2, env, quad.l_policy)?;
    let reference = ht_vacuum(p1, p2, quad)?.power;
    let max_l = AtomicUsize::new(0);
    let kernel = |omega: f64| {
        let g = gf.tensor(omega / C)?;
        max_l.fetch_max(g.l_max, Ordering::Relaxed);
        ht_density(omega, p1, p2, g.abs_sq_sum())
    };
    let windows = material_windows(&[p1, p2], Some(env));
    let q = integrate_spectrum(
        kernel,
        p1.temperature,
        quad,
        &windows,
        ABS_TOL_FLOOR * quad.rel_tol * reference.abs(),
    )?;
    let r = finish(&q, p1.volume() * p2.volume(), max_l.into_inner());
    Ok((r, q))
}

/// Heat emitted by `p1` (at its temperature) and absorbed by `p2` in `env`.
pub fn ht(p1: &ParticleSpec, p2: &ParticleSpec, env: &Environment, quad: &QuadratureConfig) -> Result<TransferResult> {
    Ok(ht_with_panels(p1, p2, env, quad)?.0)
}
