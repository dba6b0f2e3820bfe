//! Green's function outside a sphere as `G₀` plus the outgoing-wave series
//! `i Σ_{P,l,m} T_l^P E^out_{Plm}(r) ⊗ E^out_{Pl-m}(r')`.
//!
//! The `m`-sum of each order is a fixed real angular block per point pair
//! ([`PairAngularSums`]), so a frequency costs one pass over `l`. Every
//! radial product `T_l h_l(kr) h_l(kr')` is formed in [`Scaled`] arithmetic.

use nalgebra::Vector3;
use num_complex::Complex64;
use parking_lot::{RwLock, RwLockReadGuard};

use super::mie::{sphere_elements, RadialTables, SphereMedium};
use super::{add_scaled, frobenius, g0, im_g0_trace, DyadSum, Dyad, GreensTensor, ImTrace, LPolicy, BOUNDARY_MARGIN};
use crate::error::{Error, Result};
use crate::specfun::{PairAngularSums, Scaled};

/// Consecutive sub-tolerance orders required before the sum stops.
const QUIET_BLOCKS: usize = 3;

/// A sphere bound to a point pair; reusable across frequencies and threads.
#[derive(Debug)]
pub struct SphereScene {
    radius: f64,
    a: Vector3<f64>,
    b: Vector3<f64>,
    angular: RwLock<PairAngularSums>,
}

/// Result of one series evaluation.
struct Series {
    sum: Dyad,
    l_max: usize,
    tail: f64,
    partials: Vec<Dyad>,
}

impl SphereScene {
    /// `r` and `rp` are absolute positions; both must lie outside the sphere.
    pub fn new(radius: f64, center: [f64; 3], r: Vector3<f64>, rp: Vector3<f64>) -> Result<Self> {
        let c = Vector3::from(center);
        let (a, b) = (r - c, rp - c);
        for p in [&a, &b] {
            if p.norm() <= radius * (1.0 + BOUNDARY_MARGIN) {
                return Err(Error::Geometry(format!(
                    "point at distance {:e} m from the center is not outside the sphere of radius {radius:e} m",
                    p.norm()
                )));
            }
        }
        Ok(SphereScene {
            radius,
            a,
            b,
            angular: RwLock::new(PairAngularSums::new(&a, &b)),
        })
    }

    fn is_coincident(&self) -> bool {
        self.a == self.b
    }

    fn angular(&self, l: usize) -> RwLockReadGuard<'_, PairAngularSums> {
        {
            let g = self.angular.read();
            if g.len() >= l {
                return g;
            }
        }
        self.angular.write().ensure(l);
        self.angular.read()
    }

    /// First table size: enough orders for `(R²/(|r||r'|))^l` to fall below
    /// the tolerance, plus the oscillatory range `l <~ k r`.
    fn initial_table_size(&self, k: f64, rel_tol: f64, l_cap: usize) -> usize {
        let rho = self.radius * self.radius / (self.a.norm() * self.b.norm());
        let decay = (rel_tol * 0.1).ln() / rho.ln();
        let x = k * self.a.norm().max(self.b.norm());
        let guess = (decay + x + 10.0).ceil();
        (guess as usize).clamp(8, l_cap.max(1))
    }

    /// Scattered contribution of order `l`, given element and radial tables.
    fn block(
        &self,
        l: usize,
        k: f64,
        t: &[(Scaled, Scaled)],
        ra: &RadialTables,
        rb: &RadialTables,
        xa: f64,
        xb: f64,
        ang: &PairAngularSums,
    ) -> Result<Dyad> {
        let ll = (l * (l + 1)) as f64;
        let (tm, tn) = t[l];
        let (ha, hb, dha, dhb) = (ra.h[l], rb.h[l], ra.dh[l], rb.dh[l]);
        let inv = 1.0 / (xa * xb);
        let value = |s: Scaled| -> Result<Complex64> {
            let v = s.value_lossy();
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::Range(format!("scattered term l={l} overflows")))
            }
        };
        let m = value(tm * ha * hb)?;
        let nhh = tn * ha * hb;
        let rr = value(nhh * (ll * ll * inv))?;
        let rz = value(tn * ha * dhb * (ll * inv))?;
        let zr = value(tn * dha * hb * (ll * inv))?;
        let zz = value(tn * dha * dhb * inv)?;
        let blk = ang.block(l);
        let mut out = Dyad::zeros();
        add_scaled(&mut out, &blk.xx, m);
        add_scaled(&mut out, &blk.rr, rr);
        add_scaled(&mut out, &blk.rz, rz);
        add_scaled(&mut out, &blk.zr, zr);
        add_scaled(&mut out, &blk.zz, zz);
        Ok(out * Complex64::new(0.0, k / ll))
    }

    /// Sums the series from `start`. `measure` is applied to blocks and to the
    /// running total; `floor` is added to the running measure.
    fn series(
        &self,
        k: f64,
        medium: SphereMedium,
        policy: LPolicy,
        start: Dyad,
        floor: f64,
        measure: impl Fn(&Dyad) -> f64,
        keep_partials: bool,
    ) -> Result<Series> {
        if !(k > 0.0) {
            return Err(Error::domain("wavenumber must be positive"));
        }
        let (rel_tol, l_cap, fixed) = match policy {
            LPolicy::Adaptive { rel_tol, l_cap } => (rel_tol, l_cap, None),
            LPolicy::Fixed(n) => (0.0, n, Some(n)),
        };
        let xa = k * self.a.norm();
        let xb = k * self.b.norm();
        let xr = k * self.radius;
        let mut acc = DyadSum::new(start);
        let mut partials = Vec::new();
        if keep_partials {
            partials.push(start);
        }
        if l_cap == 0 {
            return Ok(Series {
                sum: start,
                l_max: 0,
                tail: 0.0,
                partials,
            });
        }
        let mut size = match fixed {
            Some(n) => n,
            None => self.initial_table_size(k, rel_tol, l_cap),
        };
        let mut l = 1usize;
        let mut quiet = 0usize;
        let mut last_norm = f64::INFINITY;
        loop {
            let t = sphere_elements(size, xr, medium)?;
            let ra = RadialTables::new(size, xa)?;
            let rb = if self.is_coincident() {
                ra.clone()
            } else {
                RadialTables::new(size, xb)?
            };
            let ang = self.angular(size);
            while l <= size {
                let blk = self.block(l, k, &t, &ra, &rb, xa, xb, &ang)?;
                acc.add(&blk);
                if keep_partials {
                    partials.push(acc.value());
                }
                let bn = measure(&blk);
                let prev_norm = last_norm;
                last_norm = bn;
                if fixed.is_none() {
                    let reference = measure(&acc.value()) + floor;
                    if bn <= rel_tol * reference {
                        quiet += 1;
                    } else {
                        quiet = 0;
                    }
                    if quiet >= QUIET_BLOCKS {
                        let q = if prev_norm > 0.0 { last_norm / prev_norm } else { 0.0 };
                        let tail = if q < 1.0 { last_norm * q / (1.0 - q) } else { last_norm * QUIET_BLOCKS as f64 };
                        return Ok(Series {
                            sum: acc.value(),
                            l_max: l,
                            tail,
                            partials,
                        });
                    }
                }
                l += 1;
            }
            drop(ang);
            if let Some(n) = fixed {
                return Ok(Series {
                    sum: acc.value(),
                    l_max: n,
                    tail: last_norm,
                    partials,
                });
            }
            if size >= l_cap {
                let reference = measure(&acc.value()) + floor;
                return Err(Error::NonConvergence {
                    l_cap,
                    last_ratio: last_norm / reference,
                    partial: Box::new(acc.value()),
                });
            }
            size = (2 * size).min(l_cap);
        }
    }

    /// `G(r, r')` for separated points.
    pub fn tensor(&self, k: f64, medium: SphereMedium, policy: LPolicy) -> Result<GreensTensor> {
        if self.is_coincident() {
            return Err(Error::CoincidentPoints("the full tensor needs separated points".into()));
        }
        let start = g0(&self.a, &self.b, k)?;
        let s = self.series(k, medium, policy, start, 0.0, frobenius, false)?;
        Ok(GreensTensor {
            matrix: s.sum,
            l_max: s.l_max,
            tail_estimate: s.tail,
        })
    }

    /// `G₀ + Σ_{l<=L}` for every `L = 0..=l_max` (index `L`).
    pub fn partial_tensors(&self, k: f64, medium: SphereMedium, l_max: usize) -> Result<Vec<Dyad>> {
        if self.is_coincident() {
            return Err(Error::CoincidentPoints("the full tensor needs separated points".into()));
        }
        let start = g0(&self.a, &self.b, k)?;
        Ok(self
            .series(k, medium, LPolicy::Fixed(l_max), start, 0.0, frobenius, true)?
            .partials)
    }

    /// `Σ_i Im G_ii(r, r)` at the coincident point.
    pub fn im_trace(&self, k: f64, medium: SphereMedium, policy: LPolicy) -> Result<ImTrace> {
        if !self.is_coincident() {
            return Err(Error::Invalid("the coincident trace needs r == r'".into()));
        }
        let im_norm = |d: &Dyad| d.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
        let base = im_g0_trace(k);
        let s = self.series(k, medium, policy, Dyad::zeros(), base, im_norm, false)?;
        Ok(ImTrace {
            value: base + s.sum.trace().im,
            l_max: s.l_max,
            tail_estimate: s.tail,
        })
    }
}
