//! Scattering-matrix elements `T_l^P` of a homogeneous sphere, of a perfect
//! mirror sphere, and of a spherical cavity in a perfect mirror.
//!
//! Elements are formed from [`Scaled`] Bessel tables, so numerator and
//! denominator may individually leave the f64 range; only the ratio needs to
//! be representable.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{
    riccati_h0, riccati_j0, riccati_table, sph_bessel_j_table, sph_bessel_y_table, Polarization, Scaled, MAX_ORDER,
};

/// Largest `|√(εμ) k R|` accepted for a finite-permittivity sphere.
pub const MAX_INTERIOR_ARGUMENT: f64 = 1e6;

/// Sphere material as seen by the scattering elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphereMedium {
    Mirror,
    Dielectric { eps: Complex64, mu: f64 },
}

/// `j_l`, `h_l` and their Riccati derivatives at a real argument, orders `0..=lmax`.
#[derive(Debug, Clone)]
pub(crate) struct RadialTables {
    pub j: Vec<Scaled>,
    pub dj: Vec<Scaled>,
    pub h: Vec<Scaled>,
    pub dh: Vec<Scaled>,
}

impl RadialTables {
    pub fn new(lmax: usize, x: f64) -> Result<Self> {
        let z = Complex64::new(x, 0.0);
        let j = sph_bessel_j_table(lmax, z)?;
        let y = sph_bessel_y_table(lmax, x)?;
        let i = Complex64::new(0.0, 1.0);
        let h: Vec<Scaled> = j.iter().zip(&y).map(|(j, y)| j.re() + *y * i).collect();
        let dj = riccati_table(&j, z, riccati_j0(z));
        let dh = riccati_table(&h, z, riccati_h0(x));
        Ok(RadialTables { j, dj, h, dh })
    }

    /// Regular functions only.
    pub fn regular(lmax: usize, x: f64) -> Result<(Vec<Scaled>, Vec<Scaled>)> {
        let z = Complex64::new(x, 0.0);
        let j = sph_bessel_j_table(lmax, z)?;
        let dj = riccati_table(&j, z, riccati_j0(z));
        Ok((j, dj))
    }
}

/// `(T_l^M, T_l^N)` for `l = 0..=lmax` (index 0 unused) of a sphere with `x = kR`.
pub(crate) fn sphere_elements(lmax: usize, x: f64, medium: SphereMedium) -> Result<Vec<(Scaled, Scaled)>> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("kR must be positive, got {x}")));
    }
    let out = RadialTables::new(lmax, x)?;
    let mut t = vec![(Scaled::ZERO, Scaled::ZERO); lmax + 1];
    match medium {
        SphereMedium::Mirror => {
            for l in 1..=lmax {
                t[l] = (-(out.j[l] / out.h[l]), -(out.dj[l] / out.dh[l]));
            }
        }
        SphereMedium::Dielectric { eps, mu } => {
            let n = (eps * mu).sqrt();
            let zi = n * x;
            if zi.norm() > MAX_INTERIOR_ARGUMENT || !zi.re.is_finite() || !zi.im.is_finite() {
                return Err(Error::UseMirror(zi.norm()));
            }
            let ji = sph_bessel_j_table(lmax, zi)?;
            let dji = riccati_table(&ji, zi, riccati_j0(zi));
            let mu_c = Complex64::new(mu, 0.0);
            for l in 1..=lmax {
                let elem = |w: Complex64| {
                    let a = ji[l] * w;
                    let num = a * out.dj[l] - out.j[l] * dji[l];
                    let den = a * out.dh[l] - out.h[l] * dji[l];
                    -(num / den)
                };
                t[l] = (elem(mu_c), elem(eps));
            }
        }
    }
    Ok(t)
}

fn check_args(l: usize, x: f64) -> Result<()> {
    if l == 0 || l > MAX_ORDER {
        return Err(Error::domain(format!("element order must lie in 1..={MAX_ORDER}, got {l}")));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("kR must be positive, got {x}")));
    }
    Ok(())
}

fn pick(t: (Scaled, Scaled), pol: Polarization, l: usize, x: f64) -> Result<Complex64> {
    let v = match pol {
        Polarization::M => t.0,
        Polarization::N => t.1,
    };
    v.value()
        .ok_or_else(|| Error::Range(format!("element l={l} at kR={x} overflows")))
}

/// `T_l^P` of a sphere with permittivity `eps` and permeability `mu`, radius `radius`, at wavenumber `k`.
pub fn mie_t(l: usize, pol: Polarization, k: f64, radius: f64, eps: Complex64, mu: f64) -> Result<Complex64> {
    let x = k * radius;
    check_args(l, x)?;
    let t = sphere_elements(l, x, SphereMedium::Dielectric { eps, mu })?;
    pick(t[l], pol, l, x)
}

/// Perfect-mirror sphere: `T^M = -j_l/h_l`, `T^N = -(x j_l)'/(x h_l)'` at `x = kR`.
pub fn mie_t_mirror(l: usize, pol: Polarization, x: f64) -> Result<Complex64> {
    check_args(l, x)?;
    let t = sphere_elements(l, x, SphereMedium::Mirror)?;
    pick(t[l], pol, l, x)
}

/// Cavity in a perfect mirror: `T^M = -h_l/j_l`, `T^N = -(x h_l)'/(x j_l)'` at `x = kR`.
pub fn cavity_t_mirror(l: usize, pol: Polarization, x: f64) -> Result<Complex64> {
    check_args(l, x)?;
    let r = RadialTables::new(l, x)?;
    let (num, den) = match pol {
        Polarization::M => (r.h[l], r.j[l]),
        Polarization::N => (r.dh[l], r.dj[l]),
    };
    // poles sit at zeros of the regular function, all of which lie above x = l
    let near_zero = x > l as f64 && den.ln_abs() - num.ln_abs() < -13.0 * std::f64::consts::LN_10;
    if den.is_zero() || near_zero {
        return Err(Error::Resonance { l, kr: x });
    }
    (-(num / den))
        .value()
        .ok_or_else(|| Error::Range(format!("cavity element l={l} at kR={x} overflows")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_sphere_dipole_element() {
        let x = 1e-3;
        for eps in [c(3.0, 0.0), c(3.0, 1.0)] {
            let t = mie_t(1, Polarization::N, x, 1.0, eps, 1.0).unwrap();
            let expect = c(0.0, 2.0 / 3.0) * (eps - 1.0) / (eps + 2.0) * x.powi(3);
            assert!((t - expect).norm() / expect.norm() < 1e-5);
            let tm = mie_t(1, Polarization::M, x, 1.0, eps, 1.0).unwrap();
            assert!(tm.norm() < 1e-3 * expect.norm());
        }
    }

    #[test]
    fn mirror_small_argument() {
        let x = 1e-3;
        let t = mie_t_mirror(1, Polarization::M, x).unwrap();
        let expect = c(0.0, -x.powi(3) / 3.0);
        assert!((t - expect).norm() / expect.norm() < 1e-5);
    }

    #[test]
    fn lossless_unitarity() {
        for l in [1usize, 3, 10, 25] {
            for x in [0.3, 2.0, 15.0] {
                for pol in [Polarization::M, Polarization::N] {
                    let t = mie_t(l, pol, x, 1.0, c(4.5, 0.0), 1.0).unwrap();
                    assert!(((c(1.0, 0.0) + 2.0 * t).norm() - 1.0).abs() < 1e-10, "l={l} x={x}");
                    let tm = mie_t_mirror(l, pol, x).unwrap();
                    assert!((tm.re + tm.norm_sqr()).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn vacuum_sphere_is_transparent() {
        let t = mie_t(4, Polarization::N, 2.0, 1.0, c(1.0, 0.0), 1.0).unwrap();
        assert!(t.norm() < 1e-15);
    }

    #[test]
    fn cavity_real_part() {
        for l in [1usize, 7, 30] {
            for x in [0.5, 3.3, 21.0] {
                for pol in [Polarization::M, Polarization::N] {
                    let t = cavity_t_mirror(l, pol, x).unwrap();
                    assert!((t.re + 1.0).abs() < 1e-10, "l={l} x={x} {t}");
                }
            }
        }
        // first zero of j_1
        assert!(matches!(
            cavity_t_mirror(1, Polarization::M, 4.493409457909064),
            Err(Error::Resonance { .. })
        ));
    }

    #[test]
    fn huge_permittivity_redirects_to_mirror() {
        let r = mie_t(1, Polarization::N, 1.0, 1.0, c(1e14, 0.0), 1.0);
        assert!(matches!(r, Err(Error::UseMirror(_))));
    }
}
