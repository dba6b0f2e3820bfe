//! Spherical cavity in a perfect mirror.
//!
//! Inside the cavity `Im G(r, r) = Im G₀(r, r) + Σ_{P,l} Re T_l^P D_l^P(r)`,
//! with `D_l^P = Σ_m E^reg_{Plm}(r) ⊗ E^reg_{Pl-m}(r)` real. For mirror walls
//! `Re T_l^P = -1` identically, so the series is resonance-free and the
//! trace reduces to `k/2π - Σ_{P,l} tr D_l^P`.

use nalgebra::Vector3;

use super::mie::RadialTables;
pub use super::mie::cavity_t_mirror;
use super::{im_g0_trace, ImTrace, LPolicy};
use crate::error::{Error, Result};
use crate::specfun::PairAngularSums;

/// Default block tolerance for the cavity series, relative to `k/2π`. The
/// result is a cancellation to zero, so the series is summed to round-off.
pub const CAVITY_REL_TOL: f64 = 1e-15;

/// `Re T` of every mirror-wall element.
const MIRROR_RE_T: f64 = -1.0;

/// Traces `tr D_l^M + tr D_l^N` for `l = 1..=lmax` at offset `r` from the center.
fn regular_traces(r: &Vector3<f64>, k: f64, lmax: usize, ang: &PairAngularSums) -> Result<Vec<f64>> {
    let x = k * r.norm();
    let mut out = vec![0.0; lmax + 1];
    if x == 0.0 {
        // only the N, l = 1 wave is nonzero at the center, with radial factors 2/3
        let blk = ang.block(1);
        let w = 2.0 / 3.0;
        out[1] = k / 2.0 * w * w * (blk.rr + blk.rz + blk.zr + blk.zz).trace();
        return Ok(out);
    }
    let (j, dj) = RadialTables::regular(lmax, x)?;
    for l in 1..=lmax {
        let ll = (l * (l + 1)) as f64;
        let jl = j[l].value_lossy().re;
        let a = ll * jl / x;
        let b = dj[l].value_lossy().re / x;
        let blk = ang.block(l);
        let tr = jl * jl * blk.xx.trace()
            + a * a * blk.rr.trace()
            + a * b * (blk.rz.trace() + blk.zr.trace())
            + b * b * blk.zz.trace();
        out[l] = k / ll * tr;
    }
    Ok(out)
}

/// `Σ_i Im G_ii(r, r)` inside a mirror cavity of radius `radius`; `r` is the
/// offset from the cavity center.
pub fn im_g_cavity_trace(r: &Vector3<f64>, k: f64, radius: f64, policy: LPolicy) -> Result<ImTrace> {
    if !(k > 0.0) || !(radius > 0.0) {
        return Err(Error::domain("cavity trace needs k > 0 and R > 0"));
    }
    if r.norm() >= radius {
        return Err(Error::Geometry(format!(
            "point at {:e} m from the center is outside the cavity of radius {radius:e} m",
            r.norm()
        )));
    }
    let base = im_g0_trace(k);
    let (rel_tol, l_cap, fixed) = match policy {
        LPolicy::Adaptive { rel_tol, l_cap } => (rel_tol, l_cap, None),
        LPolicy::Fixed(n) => (0.0, n, Some(n)),
    };
    let mut size = fixed.unwrap_or(((k * r.norm() * std::f64::consts::E / 2.0) as usize + 20).min(l_cap));
    let mut ang = PairAngularSums::new(r, r);
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut l = 1usize;
    let mut quiet = 0;
    let mut last = f64::INFINITY;
    loop {
        ang.ensure(size);
        let tr = regular_traces(r, k, size, &ang)?;
        while l <= size {
            let v = MIRROR_RE_T * tr[l];
            let t = sum + v;
            comp += if f64::abs(sum) >= v.abs() { (sum - t) + v } else { (v - t) + sum };
            sum = t;
            last = v.abs();
            if fixed.is_none() {
                quiet = if last <= rel_tol * base { quiet + 1 } else { 0 };
                if quiet >= 3 {
                    return Ok(ImTrace {
                        value: base + (sum + comp),
                        l_max: l,
                        tail_estimate: last,
                    });
                }
            }
            l += 1;
        }
        if let Some(n) = fixed {
            return Ok(ImTrace {
                value: base + (sum + comp),
                l_max: n,
                tail_estimate: last,
            });
        }
        if size >= l_cap {
            return Err(Error::NonConvergence {
                l_cap,
                last_ratio: last / base,
                partial: Box::new(super::Dyad::zeros()),
            });
        }
        size = (2 * size).min(l_cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adaptive() -> LPolicy {
        LPolicy::Adaptive {
            rel_tol: CAVITY_REL_TOL,
            l_cap: 5000,
        }
    }

    #[test]
    fn null_trace_inside_cavity() {
        let k = 1.0;
        for kr in [0.0, 0.5, 3.0, 10.0] {
            let r = Vector3::new(0.3, -0.4, 0.866).normalize() * (kr / k);
            let t = im_g_cavity_trace(&r, k, 20.0, adaptive()).unwrap();
            assert!(t.value.abs() < 1e-10 * im_g0_trace(k), "kr={kr}: {}", t.value);
        }
    }

    #[test]
    fn fixed_truncation() {
        let k = 1.0;
        let r = Vector3::new(0.0, 0.0, 3.0);
        let t = im_g_cavity_trace(&r, k, 5.0, LPolicy::Fixed(45)).unwrap();
        assert!(t.value.abs() < 1e-10 * im_g0_trace(k));
        let t1 = im_g_cavity_trace(&r, k, 5.0, LPolicy::Fixed(1)).unwrap();
        assert!(t1.value > 0.1 * im_g0_trace(k));
    }

    #[test]
    fn outside_point_rejected() {
        let r = Vector3::new(0.0, 0.0, 6.0);
        assert!(matches!(
            im_g_cavity_trace(&r, 1.0, 5.0, adaptive()),
            Err(Error::Geometry(_))
        ));
    }
}
