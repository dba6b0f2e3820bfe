//! Derived quantities: net transfer, total absorption, multipole truncation
//! studies and the isolated-sphere emission series.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{canonical_pair, hr, ht, ht_density, ht_with_panels, integrate_spectrum, omega_of, QuadratureConfig};
use super::{TransferResult, ABS_TOL_FLOOR};
use crate::constants::{C, HBAR, K_B};
use crate::error::{Error, Result};
use crate::greens::{Environment, PreparedGf, SphereMedium};
use crate::materials::{permittivity, planck_weight, DielectricModel, ParticleSpec};
use crate::greens::mie::sphere_elements;

/// `H₁⁽²⁾(T₁) - H₁⁽²⁾(T₂)`: emission of `p1` absorbed by `p2`, minus the same
/// quantity with `p1` held at `p2`'s temperature.
pub fn net_ht(p1: &ParticleSpec, p2: &ParticleSpec, env: &Environment, quad: &QuadratureConfig) -> Result<f64> {
    let forward = ht(p1, p2, env, quad)?;
    let reverse = ht(&p1.with_temperature(p2.temperature), p2, env, quad)?;
    Ok(forward.power - reverse.power)
}

/// `Σ_α [H_α⁽¹⁾(T_α) - H_α⁽¹⁾(T_env)]` over `particles`.
pub fn total_absorption(
    particles: &[ParticleSpec],
    env: &Environment,
    t_env: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    if !(t_env > 0.0) {
        return Err(Error::Invalid("environment temperature must be positive".into()));
    }
    let mut sum = 0.0;
    for p in particles {
        let own = hr(p, env, quad)?.power;
        let ambient = hr(&p.with_temperature(t_env), env, quad)?.power;
        sum += own - ambient;
    }
    Ok(sum)
}

/// One truncation order of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub l_max: usize,
    /// HT with the multipole sum truncated at `l_max`, W.
    pub power: f64,
    /// Converged value on the same frequency nodes, W.
    pub converged: f64,
    /// `power / converged`.
    pub normalized: f64,
}

/// HT from `p1` to `p2` near a sphere with the multipole sum truncated at
/// each order of `l_grid`. The frequency nodes are those of the adaptive
/// run; the reference uses the largest of `l_grid` and the adaptive orders.
pub fn convergence_study(
    p1: &ParticleSpec,
    p2: &ParticleSpec,
    env: &Environment,
    l_grid: &[usize],
    quad: &QuadratureConfig,
) -> Result<(Vec<ConvergencePoint>, TransferResult)> {
    if !matches!(env, Environment::Sphere { .. }) {
        return Err(Error::Unsupported("convergence studies need a sphere environment".into()));
    }
    if l_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("l_max grid must be strictly increasing".into()));
    }
    let (full, q) = ht_with_panels(p1, p2, env, quad)?;
    let top = l_grid.last().copied().unwrap_or(0).max(full.max_l);
    let (a, b) = canonical_pair(p2.pos(), p1.pos());
    let gf = PreparedGf::new(env, a, b, quad.l_policy)?;
    let t = p1.temperature;
    let jac = K_B * t / HBAR;
    let nodes = q.nodes();
    let rows: Vec<Vec<f64>> = nodes
        .par_iter()
        .map(|&(x, w)| {
            let omega = omega_of(x, t);
            let partials = gf.partial_tensors(omega / C, top)?;
            let unit = ht_density(omega, p1, p2, 1.0)? * jac * w;
            let mut out: Vec<f64> = l_grid
                .iter()
                .map(|&l| unit * partials[l].iter().map(|z| z.norm_sqr()).sum::<f64>())
                .collect();
            out.push(unit * partials[top].iter().map(|z| z.norm_sqr()).sum::<f64>());
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let column = |j: usize| neumaier(rows.iter().map(|r| r[j]));
    let reference = column(l_grid.len());
    let points = l_grid
        .iter()
        .enumerate()
        .map(|(j, &l)| {
            let power = column(j);
            ConvergencePoint {
                l_max: l,
                power,
                converged: reference,
                normalized: power / reference,
            }
        })
        .collect();
    Ok((points, full))
}

fn neumaier(values: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = s + v;
        c += if s.abs() >= v.abs() { (s - t) + v } else { (v - t) + s };
        s = t;
    }
    s + c
}

/// Emission of an isolated sphere truncated at each order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolatedSpherePartials {
    /// `partial[i]` is the emission with orders `1..=i+1`, W.
    pub partial: Vec<f64>,
    /// Adaptive (converged) emission.
    pub total: TransferResult,
}

/// Per-order emission weights `-(2l+1) Σ_P [Re T_l^P + |T_l^P|²]`, `l = 0..=lmax`.
fn emission_terms(lmax: usize, x: f64, medium: SphereMedium) -> Result<Vec<f64>> {
    let t = sphere_elements(lmax, x, medium)?;
    Ok(t.iter()
        .enumerate()
        .map(|(l, (tm, tn))| {
            if l == 0 {
                return 0.0;
            }
            let term = |s: &crate::specfun::Scaled| {
                let v = s.value_lossy();
                v.re + v.norm_sqr()
            };
            -((2 * l + 1) as f64) * (term(tm) + term(tn))
        })
        .collect())
}

/// Emission weight summed to convergence; returns the sum and the order used.
fn emission_sum(x: f64, medium: SphereMedium, l_cap: usize) -> Result<(f64, usize)> {
    let mut size = ((x + 4.0 * x.cbrt() + 10.0).ceil() as usize).min(l_cap);
    loop {
        let terms = emission_terms(size, x, medium)?;
        let scale: f64 = terms.iter().map(|v| v.abs()).sum();
        let mut sum = 0.0;
        let mut quiet = 0;
        for (l, v) in terms.iter().enumerate().skip(1) {
            sum += v;
            quiet = if v.abs() <= 1e-15 * scale { quiet + 1 } else { 0 };
            if quiet >= 3 {
                return Ok((sum, l));
            }
        }
        if size >= l_cap {
            return Err(Error::NonConvergence {
                l_cap,
                last_ratio: terms[size].abs() / scale.max(f64::MIN_POSITIVE),
                partial: Box::default(),
            });
        }
        size = (2 * size).min(l_cap);
    }
}

/// Thermal emission `-(2ħ/π) ∫dω ω n Σ_{l,P} (2l+1)[Re T_l^P + |T_l^P|²]` of an
/// isolated sphere, with the partial sums over `l = 1..=l_max` evaluated on
/// the nodes of the converged integral.
pub fn hr_isolated_sphere(
    radius: f64,
    material: &DielectricModel,
    temperature: f64,
    l_max: usize,
    quad: &QuadratureConfig,
) -> Result<IsolatedSpherePartials> {
    quad.validate()?;
    material.validate()?;
    if !(radius > 0.0) || !(temperature > 0.0) || l_max == 0 {
        return Err(Error::Invalid("isolated sphere needs R > 0, T > 0 and l_max >= 1".into()));
    }
    let medium = |omega: f64| -> Result<SphereMedium> {
        Ok(if material.is_mirror() {
            SphereMedium::Mirror
        } else {
            SphereMedium::Dielectric {
                eps: permittivity(material, omega)?,
                mu: 1.0,
            }
        })
    };
    let l_cap = match quad.l_policy {
        crate::greens::LPolicy::Adaptive { l_cap, .. } => l_cap,
        crate::greens::LPolicy::Fixed(n) => n,
    };
    let max_l = AtomicUsize::new(0);
    let kernel = |omega: f64| {
        let (s, l) = emission_sum(omega * radius / C, medium(omega)?, l_cap)?;
        max_l.fetch_max(l, Ordering::Relaxed);
        Ok(2.0 / PI * planck_weight(omega, temperature)? * s)
    };
    // black body through the geometric surface sets the absolute scale
    let sigma = PI * PI * K_B.powi(4) / (60.0 * HBAR.powi(3) * C * C);
    let scale = sigma * temperature.powi(4) * 4.0 * PI * radius * radius;
    let windows: Vec<(f64, f64)> = material.resonance_window().into_iter().collect();
    let q = integrate_spectrum(kernel, temperature, quad, &windows, ABS_TOL_FLOOR * quad.rel_tol * scale)?;
    let jac = K_B * temperature / HBAR;
    let rows: Vec<Vec<f64>> = q
        .nodes()
        .par_iter()
        .map(|&(x, w)| {
            let omega = omega_of(x, temperature);
            let terms = emission_terms(l_max, omega * radius / C, medium(omega)?)?;
            let unit = 2.0 / PI * planck_weight(omega, temperature)? * jac * w;
            let mut acc = 0.0;
            Ok(terms[1..]
                .iter()
                .map(|v| {
                    acc += v;
                    unit * acc
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let partial = (0..l_max).map(|j| neumaier(rows.iter().map(|r| r[j]))).collect();
    let volume = 4.0 / 3.0 * PI * radius.powi(3);
    let total = TransferResult {
        power: q.value,
        normalized: q.value / volume,
        error: q.error,
        max_l: max_l.into_inner(),
        evaluations: q.evaluations,
        panels: q.panels.len(),
    };
    Ok(IsolatedSpherePartials { partial, total })
}
