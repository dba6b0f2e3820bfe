//! Free-space Green's dyad and the dipole-scatterer correction.

use nalgebra::Vector3;
use num_complex::Complex64;
use std::f64::consts::PI;

use super::Dyad;
use crate::error::{Error, Result};

/// `A(s)` and `B(s)` in `G₀ = [A 𝟙 + B d̂⊗d̂] / (4π k² d³)`, `s = kd`.
///
/// The imaginary parts are `O(s³)` and `O(s⁵)` while the real parts are
/// `O(1)`; below `s = 0.5` they come from their Taylor series so that
/// `Im G₀` keeps full relative accuracy at small separation.
fn g0_coefficients(s: f64) -> (Complex64, Complex64) {
    let e = Complex64::from_polar(1.0, s);
    let a = e * Complex64::new(s * s - 1.0, s);
    let b = e * Complex64::new(3.0 - s * s, -3.0 * s);
    if s >= 0.5 {
        return (a, b);
    }
    // Im A = Σ_n (-1)^{n+1} 4n² s^{2n+1}/(2n+1)!,  Im B = Σ_n (-1)^n 4n(n-1) s^{2n+1}/(2n+1)!
    let mut im_a = 0.0;
    let mut im_b = 0.0;
    let mut pow = s; // s^{2n+1}/(2n+1)!
    for n in 1..20 {
        let nf = n as f64;
        pow *= s * s / ((2.0 * nf) * (2.0 * nf + 1.0));
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        im_a += -sign * 4.0 * nf * nf * pow;
        im_b += sign * 4.0 * nf * (nf - 1.0) * pow;
        if pow < 1e-18 * im_a.abs().max(1e-300) {
            break;
        }
    }
    (Complex64::new(a.re, im_a), Complex64::new(b.re, im_b))
}

/// Free Green's dyad `G₀(r, r')` at separated points, without the contact term.
pub fn g0(r: &Vector3<f64>, rp: &Vector3<f64>, k: f64) -> Result<Dyad> {
    if !(k > 0.0) {
        return Err(Error::domain("wavenumber must be positive"));
    }
    let dv = r - rp;
    let d = dv.norm();
    if d == 0.0 {
        return Err(Error::CoincidentPoints("G0 at r = r'".into()));
    }
    let (a, b) = g0_coefficients(k * d);
    let u = dv / d;
    let pref = 1.0 / (4.0 * PI * k * k * d * d * d);
    Ok(Dyad::from_fn(|i, j| {
        let diag = if i == j { a } else { Complex64::new(0.0, 0.0) };
        (diag + b * (u[i] * u[j])) * pref
    }))
}

/// `Σ_i Im G₀_ii(r, r) = k / 2π`.
pub fn im_g0_trace(k: f64) -> f64 {
    k / (2.0 * PI)
}

/// Green's dyad with a dipole scatterer of polarizability `alpha` (m³) at `r0`:
/// `G₀(r, r') + 4π k² α G₀(r, r₀) G₀(r₀, r')`.
pub fn g_pp(r: &Vector3<f64>, rp: &Vector3<f64>, k: f64, r0: &Vector3<f64>, alpha: Complex64) -> Result<Dyad> {
    if r == rp || r == r0 || rp == r0 {
        return Err(Error::CoincidentPoints("g_pp needs pairwise distinct points".into()));
    }
    let direct = g0(r, rp, k)?;
    let scat = g0(r, r0, k)? * g0(r0, rp, k)?;
    Ok(direct + scat * (alpha * 4.0 * PI * k * k))
}

/// `Σ_i Im G_ii(r, r)` with a dipole scatterer at `r0`.
pub fn im_trace_pp(r: &Vector3<f64>, k: f64, r0: &Vector3<f64>, alpha: Complex64) -> Result<f64> {
    if r == r0 {
        return Err(Error::CoincidentPoints("evaluation point on the scatterer".into()));
    }
    let scat = g0(r, r0, k)? * g0(r0, r, k)? * (alpha * 4.0 * PI * k * k);
    Ok(im_g0_trace(k) + scat.trace().im)
}
