//! Vector spherical and plane waves.
//!
//! Spherical waves `E_{Plm}` carry the prefactor `sqrt((-1)^m k) / sqrt(l(l+1))`,
//! with the square root of `(-1)^m` taken as the principal root (`i` for odd
//! `m`). In every dyad `E_{Plm}(r) ⊗ E_{Pl-m}(r')` the two prefactors and the
//! symmetry `Y_l^{-m} = (-1)^m conj(Y_l^m)` combine to the real factor
//! `k / (l(l+1))`, which is what [`PairAngularSums`] exploits.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::bessel::{riccati_h0, riccati_j0, riccati_table, sph_bessel_j_table, sph_hankel1_table};
use super::harmonics::{LegendreRow, LegendreRows};
use crate::error::{Error, Result};

pub type ComplexVec3 = Vector3<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    /// Magnetic (transverse electric) waves.
    M,
    /// Electric (transverse magnetic) waves.
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularity {
    Regular,
    Outgoing,
}

/// `(P, l, m)` label of a spherical wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WaveIndex {
    pol: Polarization,
    l: usize,
    m: i64,
}

impl WaveIndex {
    pub fn new(pol: Polarization, l: usize, m: i64) -> Result<Self> {
        if l == 0 {
            return Err(Error::domain("multipole order l must be >= 1"));
        }
        if m.unsigned_abs() as usize > l {
            return Err(Error::domain(format!("|m| = {} exceeds l = {l}", m.abs())));
        }
        Ok(WaveIndex { pol, l, m })
    }

    pub fn pol(&self) -> Polarization {
        self.pol
    }
    pub fn l(&self) -> usize {
        self.l
    }
    pub fn m(&self) -> i64 {
        self.m
    }
}

/// Spherical coordinates and the local unit vectors of a point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SphericalFrame {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub r_hat: Vector3<f64>,
    pub theta_hat: Vector3<f64>,
    pub phi_hat: Vector3<f64>,
}

impl SphericalFrame {
    pub fn new(p: &Vector3<f64>) -> Self {
        let r = p.norm();
        let rho = (p.x * p.x + p.y * p.y).sqrt();
        let theta = if r == 0.0 { 0.0 } else { rho.atan2(p.z) };
        let phi = if rho == 0.0 { 0.0 } else { p.y.atan2(p.x) };
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        SphericalFrame {
            r,
            theta,
            phi,
            r_hat: Vector3::new(st * cp, st * sp, ct),
            theta_hat: Vector3::new(ct * cp, ct * sp, -st),
            phi_hat: Vector3::new(-sp, cp, 0.0),
        }
    }
}

fn cvec(v: &Vector3<f64>, a: Complex64) -> ComplexVec3 {
    ComplexVec3::new(a * v.x, a * v.y, a * v.z)
}

/// Evaluates `E^{reg|out}_{Plm}(r)` in Cartesian components (`r` relative to the origin of the expansion).
pub fn spherical_wave(idx: WaveIndex, reg: Regularity, k: f64, r: &Vector3<f64>) -> Result<ComplexVec3> {
    if !(k > 0.0) {
        return Err(Error::domain("wavenumber must be positive"));
    }
    let frame = SphericalFrame::new(r);
    let l = idx.l;
    let x = k * frame.r;
    if frame.r == 0.0 && reg == Regularity::Outgoing {
        return Err(Error::Singularity);
    }
    // radial factor f_l(x), and the N-wave radial/tangential weights
    let (f, radial, tangential) = if x == 0.0 {
        let v = if l == 1 && idx.pol == Polarization::N { 2.0 / 3.0 } else { 0.0 };
        (Complex64::new(0.0, 0.0), Complex64::new(v, 0.0), Complex64::new(v, 0.0))
    } else {
        let z = Complex64::new(x, 0.0);
        let (table, zf_m1) = match reg {
            Regularity::Regular => (sph_bessel_j_table(l, z)?, riccati_j0(z)),
            Regularity::Outgoing => (sph_hankel1_table(l, x)?, riccati_h0(x)),
        };
        let ric = riccati_table(&table, z, zf_m1);
        let f = table[l]
            .value()
            .ok_or_else(|| Error::Range(format!("radial function l={l} at x={x}")))?;
        let d = ric[l]
            .value()
            .ok_or_else(|| Error::Range(format!("Riccati derivative l={l} at x={x}")))?;
        (f, f * ((l * (l + 1)) as f64 / x), d / x)
    };

    let row = LegendreRows::new(frame.theta).nth(l).expect("infinite");
    let h = row.harmonic(idx.m, frame.phi);
    let i = Complex64::new(0.0, 1.0);
    let sign = if idx.m.rem_euclid(2) == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        i
    };
    let pref = sign * (k.sqrt() / ((l * (l + 1)) as f64).sqrt());
    let v = match idx.pol {
        Polarization::M => {
            cvec(&frame.theta_hat, i * h.m_over_sin) - cvec(&frame.phi_hat, h.dy_dtheta)
        }
        Polarization::N => {
            cvec(&frame.r_hat, radial * h.y)
                + cvec(&frame.theta_hat, tangential * h.dy_dtheta)
                + cvec(&frame.phi_hat, tangential * i * h.m_over_sin)
        }
    };
    let v = match idx.pol {
        Polarization::M => v * f,
        Polarization::N => v,
    };
    Ok(v * pref)
}

/// Plane-wave polarizations: `M` and the two `N` branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneWaveKind {
    M,
    NPlus,
    NMinus,
}

/// `k_z = sqrt(k² - k⊥²)` on the branch with non-negative imaginary part.
pub fn kz_branch(k: f64, kperp: f64) -> Complex64 {
    let d = k * k - kperp * kperp;
    if d >= 0.0 {
        Complex64::new(d.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-d).sqrt())
    }
}

/// Plane waves `M_{k⊥}` and `N^±_{k⊥}` at `(x⊥, z)`, with phase `e^{i(k⊥·x⊥ + k_z z)}`.
///
/// The `N^±` polarization vector is transverse to `(k⊥, ∓k_z)`.
pub fn plane_wave(kind: PlaneWaveKind, kperp: [f64; 2], k: f64, xperp: [f64; 2], z: f64) -> Result<ComplexVec3> {
    let kp = (kperp[0] * kperp[0] + kperp[1] * kperp[1]).sqrt();
    if kp == 0.0 {
        return Err(Error::domain("plane waves need |k⊥| > 0"));
    }
    if !(k > 0.0) {
        return Err(Error::domain("wavenumber must be positive"));
    }
    let kz = kz_branch(k, kp);
    let i = Complex64::new(0.0, 1.0);
    let phase = (i * (kperp[0] * xperp[0] + kperp[1] * xperp[1]) + i * kz * z).exp();
    let (kx, ky) = (kperp[0], kperp[1]);
    let v = match kind {
        PlaneWaveKind::M => ComplexVec3::new(Complex64::from(ky), Complex64::from(-kx), Complex64::from(0.0)) * Complex64::from(1.0 / kp),
        PlaneWaveKind::NPlus | PlaneWaveKind::NMinus => {
            let s = if kind == PlaneWaveKind::NPlus { 1.0 } else { -1.0 };
            ComplexVec3::new(kz * (s * kx), kz * (s * ky), Complex64::from(kp * kp)) * Complex64::from(1.0 / (k * kp))
        }
    };
    Ok(v * phase)
}

/// Real 3×3 angular sums for one multipole order `l`, over `m = -l..=l`:
///
/// * `xx = Σ X_m(a) ⊗ X_m(b)^*`, with `X = θ̂ (im/sinθ) Y - φ̂ ∂_θ Y` (M waves),
/// * `rr`, `rz`, `zr`, `zz` from `R = r̂ Y` and `Z = θ̂ ∂_θ Y + φ̂ (im/sinθ) Y` (N waves).
///
/// The `m` and `-m` terms are complex conjugates, so every sum is real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularBlock {
    pub xx: Matrix3<f64>,
    pub rr: Matrix3<f64>,
    pub rz: Matrix3<f64>,
    pub zr: Matrix3<f64>,
    pub zz: Matrix3<f64>,
}

fn outer_re(a: &ComplexVec3, b: &ComplexVec3) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| (a[i] * b[j].conj()).re)
}

fn angular_vectors(row: &LegendreRow, m: usize, f: &SphericalFrame) -> (ComplexVec3, ComplexVec3, ComplexVec3) {
    let e = Complex64::from_polar(1.0, m as f64 * f.phi);
    let i = Complex64::new(0.0, 1.0);
    let p = e * row.p[m];
    let dt = e * row.dtheta[m];
    let mos = e * row.m_over_sin[m] * i;
    let x = cvec(&f.theta_hat, mos) - cvec(&f.phi_hat, dt);
    let r = cvec(&f.r_hat, p);
    let z = cvec(&f.theta_hat, dt) + cvec(&f.phi_hat, mos);
    (x, r, z)
}

/// Lazily generated [`AngularBlock`]s for a fixed pair of directions.
#[derive(Debug, Clone)]
pub struct PairAngularSums {
    fa: SphericalFrame,
    fb: SphericalFrame,
    rows_a: LegendreRows,
    rows_b: Option<LegendreRows>,
    blocks: Vec<AngularBlock>,
}

impl PairAngularSums {
    /// `a` and `b` are positions relative to the expansion origin; only their directions matter.
    pub fn new(a: &Vector3<f64>, b: &Vector3<f64>) -> Self {
        let fa = SphericalFrame::new(a);
        let fb = SphericalFrame::new(b);
        let same = a == b;
        let mut rows_a = LegendreRows::new(fa.theta);
        rows_a.next_row(); // l = 0 carries no vector waves
        let rows_b = if same {
            None
        } else {
            let mut r = LegendreRows::new(fb.theta);
            r.next_row();
            Some(r)
        };
        PairAngularSums {
            fa,
            fb,
            rows_a,
            rows_b,
            blocks: Vec::new(),
        }
    }

    /// Number of orders generated so far (orders `1..=len`).
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Extends the table to include order `l`.
    pub fn ensure(&mut self, l: usize) {
        while self.blocks.len() < l {
            let row_a = self.rows_a.next_row();
            let row_b = match self.rows_b.as_mut() {
                Some(r) => Some(r.next_row()),
                None => None,
            };
            let row_b_ref = row_b.as_ref().unwrap_or(&row_a);
            let ll = row_a.l;
            let mut blk = AngularBlock {
                xx: Matrix3::zeros(),
                rr: Matrix3::zeros(),
                rz: Matrix3::zeros(),
                zr: Matrix3::zeros(),
                zz: Matrix3::zeros(),
            };
            for m in 0..=ll {
                let w = if m == 0 { 1.0 } else { 2.0 };
                let (xa, ra, za) = angular_vectors(&row_a, m, &self.fa);
                let (xb, rb, zb) = angular_vectors(row_b_ref, m, &self.fb);
                blk.xx += outer_re(&xa, &xb) * w;
                blk.rr += outer_re(&ra, &rb) * w;
                blk.rz += outer_re(&ra, &zb) * w;
                blk.zr += outer_re(&za, &rb) * w;
                blk.zz += outer_re(&za, &zb) * w;
            }
            self.blocks.push(blk);
        }
    }

    /// Block of order `l >= 1`; call [`ensure`](Self::ensure) first.
    pub fn block(&self, l: usize) -> &AngularBlock {
        &self.blocks[l - 1]
    }
}
