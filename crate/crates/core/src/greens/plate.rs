//! Coincident-point trace above a half space `z <= 0`.
//!
//! With `u = k_z/k` on the propagating sector and `t = κ/k` on the
//! evanescent one, the reflected part of `Σ_i G_ii(r, r)` at height `d` is
//!
//! `(ik/4π) ∫₀¹ du e^{2ikdu} [r^M + r^N (1 - 2u²)]
//!   + (k/4π) ∫₀^∞ dt e^{-2kdt} [r^M + r^N (1 + 2t²)]`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::im_g0_trace;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};

/// The evanescent sector is cut where `e^{-2κd}` drops below this.
const EVANESCENT_CUTOFF: f64 = 1e-16;
const PLATE_REL_TOL: f64 = 1e-11;

/// `f(a) = sin a/a + 2 cos a/a² - 2 sin a/a³ = ∫₀¹ u² cos(au) du`.
fn u2_cos_moment(a: f64) -> f64 {
    if a < 0.5 {
        // Σ (-1)^n a^{2n} / ((2n)! (2n+3))
        let mut term = 1.0;
        let mut sum = 1.0 / 3.0;
        for n in 1..30 {
            term *= -a * a / ((2 * n - 1) as f64 * (2 * n) as f64);
            let add = term / (2 * n + 3) as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        return sum;
    }
    let (s, c) = a.sin_cos();
    s / a + 2.0 * c / (a * a) - 2.0 * s / (a * a * a)
}

/// Closed form of `Σ_i Im G_ii(r, r)` at height `d` above a perfect mirror.
pub fn im_g_trace_plate_mirror(d: f64, k: f64) -> Result<f64> {
    if !(d > 0.0) || !(k > 0.0) {
        return Err(Error::domain("plate trace needs d > 0 and k > 0"));
    }
    let base = im_g0_trace(k);
    Ok(base * (1.0 - u2_cos_moment(2.0 * k * d)))
}

/// `√w` on the branch with `Im >= 0`.
fn sqrt_upper(w: Complex64) -> Complex64 {
    let s = w.sqrt();
    if s.im < 0.0 {
        -s
    } else {
        s
    }
}

/// Fresnel coefficients `(r^M, r^N)` for normalized `k_z/k`, with
/// `k_{z1}/k = √(εμ - 1 + (k_z/k)²)`.
pub fn fresnel(kz_over_k: Complex64, eps: Complex64, mu: f64) -> (Complex64, Complex64) {
    let q = sqrt_upper(eps * mu - 1.0 + kz_over_k * kz_over_k);
    let rm = (kz_over_k * mu - q) / (kz_over_k * mu + q);
    let rn = (eps * kz_over_k - q) / (eps * kz_over_k + q);
    (rm, rn)
}

/// `Σ_i Im G_ii(r, r)` at height `d` above a plate with permittivity `eps`
/// and permeability `mu`, by quadrature over the parallel wavevector.
pub fn im_g_trace_plate(d: f64, k: f64, eps: Complex64, mu: f64) -> Result<f64> {
    if !(d > 0.0) || !(k > 0.0) {
        return Err(Error::domain("plate trace needs d > 0 and k > 0"));
    }
    if eps.im < 0.0 {
        return Err(Error::domain("plate permittivity must be passive"));
    }
    let scale = k / (4.0 * PI);
    let opts = QuadOptions {
        rel_tol: PLATE_REL_TOL,
        abs_tol: 1e-3 * PLATE_REL_TOL * scale,
        max_panels: 4000,
        parallel: false,
    };
    let em = (eps * mu).re;
    let a = 2.0 * k * d;

    let prop = |u: f64| {
        let (rm, rn) = fresnel(Complex64::new(u, 0.0), eps, mu);
        let e = Complex64::from_polar(1.0, a * u);
        Ok(scale * (e * (rm + rn * (1.0 - 2.0 * u * u))).re)
    };
    let mut cuts = vec![];
    if em < 1.0 && em > 0.0 {
        cuts.push((1.0 - em).sqrt());
    }
    // one panel per half oscillation keeps the initial rule meaningful
    let waves = (a / PI).ceil().min(1000.0) as usize;
    cuts.extend((1..waves).map(|i| i as f64 / waves as f64));
    let p = integrate(prop, 0.0, 1.0, &cuts, &opts)?;

    let t_max = -EVANESCENT_CUTOFF.ln() / a;
    let evan = |t: f64| {
        let (rm, rn) = fresnel(Complex64::new(0.0, t), eps, mu);
        Ok(scale * (-a * t).exp() * (rm + rn * (1.0 + 2.0 * t * t)).im)
    };
    let mut cuts = vec![1.0 / a, 4.0 / a];
    if em > 1.0 {
        cuts.push((em - 1.0).sqrt());
    }
    let e = integrate(evan, 0.0, t_max, &cuts, &opts)?;
    Ok(im_g0_trace(k) + p.value + e.value)
}
