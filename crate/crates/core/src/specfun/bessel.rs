//! Spherical Bessel and Hankel functions of integer order.
//!
//! * `j_l(z)` for complex `z`: Miller downward recurrence on the ratios
//!   `j_l / j_{l-1}`, normalized against whichever of `j_0`, `j_1` is larger.
//! * `y_l(x)` for real `x > 0`: upward recurrence from the closed forms.
//! * `h_l(x) = j_l(x) + i y_l(x)` is assembled from the two, so that
//!   `Re h_l` is the accurately computed `j_l` even where `|y_l| >> |j_l|`.
//!
//! Every table is returned in [`Scaled`] form; the plain-valued wrappers
//! report a range error when the value leaves f64.

use num_complex::Complex64;

use super::scaled::Scaled;
use crate::error::{Error, Result};

/// Largest order accepted by the public evaluators.
pub const MAX_ORDER: usize = 10_000;

/// Which function a Riccati derivative `d/dx [x f_l(x)]` refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiccatiKind {
    J,
    H,
}

fn check_order(l: usize) -> Result<()> {
    if l > MAX_ORDER {
        return Err(Error::domain(format!("order {l} above cap {MAX_ORDER}")));
    }
    Ok(())
}

/// `sin z` and `cos z`, scaled so that large imaginary parts do not overflow.
fn sin_cos_scaled(z: Complex64) -> (Scaled, Scaled) {
    if z.im.abs() < 300.0 {
        return (Scaled::from(z.sin()), Scaled::from(z.cos()));
    }
    // e^{±iz} = e^{∓y} e^{±ix}; factor out e^{|y|}
    let s = z.im.abs();
    let ep = Complex64::from_polar((-z.im - s).exp(), z.re);
    let em = Complex64::from_polar((z.im - s).exp(), -z.re);
    let two_i = Complex64::new(0.0, 2.0);
    let sin = (ep - em) / two_i;
    let cos = (ep + em) * 0.5;
    (Scaled::from_ln_scale(sin, s), Scaled::from_ln_scale(cos, s))
}

/// Power series of `j_l(z)`, accurate for `|z| <~ 1`.
pub(crate) fn j_series(l: usize, z: Complex64) -> Complex64 {
    let mut lead = Complex64::new(1.0, 0.0);
    for i in 1..=l {
        lead *= z / (2 * i + 1) as f64;
    }
    let w = -z * z * 0.5;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..60 {
        term *= w / (k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    lead * sum
}

fn j0_j1(z: Complex64) -> (Scaled, Scaled) {
    if z.norm() < 0.5 {
        return (Scaled::from(j_series(0, z)), Scaled::from(j_series(1, z)));
    }
    let (s, c) = sin_cos_scaled(z);
    let zi = Scaled::from(z.inv());
    let j0 = s * zi;
    let j1 = (j0 - c) * zi;
    (j0, j1)
}

/// Starting order for the downward recurrence: at least `lmax + |z| + 16`,
/// pushed further until a trial dominant solution started at `lmax` has
/// grown by 1e18, which bounds the start-up error at `lmax`.
fn miller_start(lmax: usize, z: Complex64) -> usize {
    let base = lmax + z.norm().ceil() as usize + 16;
    let mut p_prev = Complex64::new(0.0, 0.0);
    let mut p = Complex64::new(1.0, 0.0);
    let zi = z.inv();
    let limit = base + 4 * (z.norm().ceil() as usize) + 2000;
    let mut l = lmax + 1;
    while l < limit {
        let next = p * zi * (2 * l + 1) as f64 - p_prev;
        p_prev = p;
        p = next;
        l += 1;
        if p.norm() > 1e18 {
            break;
        }
    }
    base.max(l + 16)
}

/// Ratios `j_l / j_{l-1}` for `l = 1..=lmax` (index 0 unused).
fn j_ratios(lmax: usize, z: Complex64) -> Vec<Complex64> {
    let start = miller_start(lmax, z);
    let mut ratios = vec![Complex64::new(0.0, 0.0); lmax + 1];
    let mut r = Complex64::new(0.0, 0.0);
    for l in (1..=start).rev() {
        let mut den = Complex64::new((2 * l + 1) as f64, 0.0) - z * r;
        if den.norm() == 0.0 {
            den = Complex64::new(1e-300, 0.0);
        }
        r = z / den;
        if l <= lmax {
            ratios[l] = r;
        }
    }
    ratios
}

/// `j_0(z) ..= j_lmax(z)` for complex `z`.
pub fn sph_bessel_j_table(lmax: usize, z: Complex64) -> Result<Vec<Scaled>> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("non-finite argument"));
    }
    let mut out = vec![Scaled::ZERO; lmax + 1];
    if z.norm() == 0.0 {
        out[0] = Scaled::from_real(1.0);
        return Ok(out);
    }
    let (j0, j1) = j0_j1(z);
    out[0] = j0;
    if lmax == 0 {
        return Ok(out);
    }
    let ratios = j_ratios(lmax, z);
    if j0.ln_abs() >= j1.ln_abs() {
        let mut cur = j0;
        for l in 1..=lmax {
            cur = cur * ratios[l];
            out[l] = cur;
        }
    } else {
        out[1] = j1;
        let mut cur = j1;
        for l in 2..=lmax {
            cur = cur * ratios[l];
            out[l] = cur;
        }
    }
    Ok(out)
}

/// `y_0(x) ..= y_lmax(x)` for real `x > 0`, by upward recurrence.
pub fn sph_bessel_y_table(lmax: usize, x: f64) -> Result<Vec<Scaled>> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("y_l needs x > 0, got {x}")));
    }
    let (s, c) = x.sin_cos();
    let y0 = -c / x;
    let y1 = -c / (x * x) - s / x;
    let mut out = Vec::with_capacity(lmax + 1);
    out.push(Scaled::from_real(y0));
    if lmax == 0 {
        return Ok(out);
    }
    out.push(Scaled::from_real(y1));
    // shared exponent for the running pair
    let mut exp: i64 = 0;
    let (mut prev, mut cur) = (y0, y1);
    for l in 1..lmax {
        let next = (2 * l + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e250 {
            prev *= 2f64.powi(-800);
            cur *= 2f64.powi(-800);
            exp += 800;
        }
        out.push(Scaled::new(Complex64::new(cur, 0.0), exp));
    }
    Ok(out)
}

/// `h_0(x) ..= h_lmax(x)` (first kind) for real `x > 0`.
pub fn sph_hankel1_table(lmax: usize, x: f64) -> Result<Vec<Scaled>> {
    let y = sph_bessel_y_table(lmax, x)?;
    let j = sph_bessel_j_table(lmax, Complex64::new(x, 0.0))?;
    let i = Complex64::new(0.0, 1.0);
    Ok(j.into_iter().zip(y).map(|(j, y)| j.re() + y * i).collect())
}

/// Riccati derivatives `d/dz [z f_l(z)] = z f_{l-1} - l f_l` for `l = 0..=lmax`,
/// from a table of `f_l`. `z f_{-1}` is passed in (`cos z` for `j`, `e^{iz}` for `h`).
pub(crate) fn riccati_table(table: &[Scaled], z: Complex64, zf_minus1: Scaled) -> Vec<Scaled> {
    let mut out = Vec::with_capacity(table.len());
    out.push(zf_minus1);
    for l in 1..table.len() {
        out.push(table[l - 1] * z - table[l] * l as f64);
    }
    out
}

/// `cos z`, the `l = 0` Riccati derivative of `j`.
pub(crate) fn riccati_j0(z: Complex64) -> Scaled {
    sin_cos_scaled(z).1
}

/// `e^{ix}`, the `l = 0` Riccati derivative of `h` at real `x`.
pub(crate) fn riccati_h0(x: f64) -> Scaled {
    Scaled::from(Complex64::from_polar(1.0, x))
}

pub fn sph_bessel_j_scaled(l: usize, z: Complex64) -> Result<Scaled> {
    check_order(l)?;
    Ok(sph_bessel_j_table(l, z)?[l])
}

/// Spherical Bessel function `j_l(z)` of complex argument.
pub fn sph_bessel_j(l: usize, z: Complex64) -> Result<Complex64> {
    sph_bessel_j_scaled(l, z)?
        .value()
        .ok_or_else(|| Error::Range(format!("j_{l}({z}) overflows")))
}

pub fn sph_hankel1_scaled(l: usize, x: f64) -> Result<Scaled> {
    check_order(l)?;
    Ok(sph_hankel1_table(l, x)?[l])
}

/// Spherical Hankel function of the first kind `h_l(x)` for real `x > 0`.
pub fn sph_hankel1(l: usize, x: f64) -> Result<Complex64> {
    sph_hankel1_scaled(l, x)?
        .value()
        .ok_or_else(|| Error::Range(format!("h_{l}({x}) overflows; use the scaled form")))
}

/// `d/dx [x f_l(x)]` for `f = j_l` or `f = h_l` at real `x` (`x > 0` for `h`).
pub fn riccati_deriv(kind: RiccatiKind, l: usize, x: f64) -> Result<Complex64> {
    check_order(l)?;
    let v = match kind {
        RiccatiKind::J => {
            let z = Complex64::new(x, 0.0);
            let t = sph_bessel_j_table(l, z)?;
            riccati_table(&t, z, riccati_j0(z))[l]
        }
        RiccatiKind::H => {
            let t = sph_hankel1_table(l, x)?;
            riccati_table(&t, Complex64::new(x, 0.0), riccati_h0(x))[l]
        }
    };
    v.value()
        .ok_or_else(|| Error::Range(format!("Riccati derivative l={l} at {x} overflows")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_forms_low_order() {
        assert!((sph_bessel_j(0, c(1.0, 0.0)).unwrap() - c(1f64.sin(), 0.0)).norm() < 1e-15);
        let h0 = sph_hankel1(0, 1.0).unwrap();
        assert!((h0 - c(0.8414709848078965, -0.5403023058681398)).norm() < 1e-14);
        let h1 = sph_hankel1(1, 1.0).unwrap();
        let e = Complex64::from_polar(1.0, 1.0);
        let expect = -e * (c(1.0, 0.0) + c(0.0, 1.0)) / 1.0;
        assert!((h1 - expect).norm() < 1e-14);
        assert!((h1 - c(0.3011686789397568, -1.3817732906760363)).norm() < 1e-13);
    }

    #[test]
    fn small_argument_leading_term() {
        let j1 = sph_bessel_j(1, c(1e-3, 0.0)).unwrap();
        assert!((j1.re - 1e-3 / 3.0).abs() / (1e-3 / 3.0) < 1e-6);
        let j7 = sph_bessel_j(7, c(1e-3, 0.0)).unwrap();
        let dfact: f64 = (1..=7).map(|i| (2 * i + 1) as f64).product();
        assert!((j7.re - 1e-21 / dfact).abs() / (1e-21 / dfact) < 1e-6);
        assert_eq!(sph_bessel_j(3, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn riccati_closed_forms() {
        let x = 0.7;
        assert!((riccati_deriv(RiccatiKind::J, 0, x).unwrap().re - x.cos()).abs() < 1e-15);
        let d = riccati_deriv(RiccatiKind::J, 1, 1e-3).unwrap().re;
        assert!((d - 2e-3 / 3.0).abs() / (2e-3 / 3.0) < 1e-6);
        let h0 = riccati_deriv(RiccatiKind::H, 0, x).unwrap();
        assert!((h0 - Complex64::from_polar(1.0, x)).norm() < 1e-15);
    }

    #[test]
    fn order_cap_and_domain() {
        assert!(matches!(sph_bessel_j(MAX_ORDER + 1, c(1.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(sph_hankel1(2, 0.0), Err(Error::Domain(_))));
        assert!(matches!(sph_hankel1(2, -1.0), Err(Error::Domain(_))));
        assert!(matches!(sph_hankel1(400, 0.1), Err(Error::Range(_))));
        assert!(sph_hankel1_scaled(400, 0.1).unwrap().is_finite());
    }

    #[test]
    fn large_imaginary_argument_stays_finite() {
        let z = c(2000.0, 1500.0);
        let t = sph_bessel_j_table(50, z).unwrap();
        assert!(t.iter().all(|v| v.is_finite()));
        assert!(t[0].value().is_none());
        // j_{l-1} + j_{l+1} = (2l+1)/z j_l on scaled values
        for l in 1..49 {
            let lhs = t[l - 1] + t[l + 1];
            let rhs = t[l] * (c((2 * l + 1) as f64, 0.0) / z);
            let rel = ((lhs - rhs) / rhs).value().unwrap().norm();
            assert!(rel < 1e-10, "l={l} rel={rel}");
        }
    }
}
