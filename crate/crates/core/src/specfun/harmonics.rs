//! Orthonormal spherical harmonics with the Condon–Shortley phase,
//! `Y_l^m = sqrt((2l+1)/4π (l-m)!/(l+m)!) P_l^m(cos θ) e^{imφ}`, and the two
//! angular companions needed by vector waves: `dY/dθ` and `(m / sin θ) Y`.
//!
//! Columns of fixed `m >= 1` carry `P̄_l^m / sin θ` rather than `P̄_l^m`;
//! both obey the same three-term recurrence in `l`, and the quotient is a
//! polynomial in `cos θ` times `sin^{m-1} θ`, so nothing is ever divided by
//! `sin θ`. Each column keeps its own power-of-two exponent so that the
//! `sin^m θ` start values may underflow without losing the column.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::scaled::ldexp;
use crate::error::{Error, Result};

/// One harmonic and its angular companions at a direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicValue {
    pub y: Complex64,
    pub dy_dtheta: Complex64,
    /// `(m / sin θ) Y_l^m`, finite on the polar axis.
    pub m_over_sin: Complex64,
}

/// Real (φ-independent) parts of one row `l`, for `m = 0..=l`.
#[derive(Debug, Clone)]
pub struct LegendreRow {
    pub l: usize,
    /// `P̄_l^m(cos θ)`.
    pub p: Vec<f64>,
    /// `d P̄_l^m / dθ`.
    pub dtheta: Vec<f64>,
    /// `m P̄_l^m / sin θ`.
    pub m_over_sin: Vec<f64>,
}

#[derive(Debug, Clone)]
struct Column {
    m: usize,
    l: usize,
    prev: f64,
    cur: f64,
    exp: i64,
}

impl Column {
    fn value(&self) -> f64 {
        ldexp(self.cur, self.exp)
    }

    fn advance(&mut self, x: f64) {
        let l = (self.l + 1) as f64;
        let m = self.m as f64;
        let next = if self.l == self.m {
            (2.0 * m + 3.0).sqrt() * x * self.cur
        } else {
            let a = ((4.0 * l * l - 1.0) / (l * l - m * m)).sqrt();
            let b = (((l - 1.0) * (l - 1.0) - m * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0)).sqrt();
            a * (x * self.cur - b * self.prev)
        };
        self.prev = self.cur;
        self.cur = next;
        self.l += 1;
        if self.cur.abs() > 1e200 {
            self.prev = ldexp(self.prev, -600);
            self.cur = ldexp(self.cur, -600);
            self.exp += 600;
        }
    }
}

/// Mantissa/exponent of the diagonal start value of column `m`
/// (`P̄_0^0` for `m = 0`, `P̄_m^m / sin θ` otherwise).
fn diagonal(m: usize, s: f64) -> (f64, i64) {
    if m == 0 {
        return (1.0 / (4.0 * PI).sqrt(), 0);
    }
    let mut mant = -(3.0 / (8.0 * PI)).sqrt();
    let mut exp = 0i64;
    for k in 2..=m {
        mant *= -((2 * k + 1) as f64 / (2 * k) as f64).sqrt() * s;
        if mant == 0.0 {
            return (0.0, 0);
        }
        if mant.abs() < 1e-200 {
            mant = ldexp(mant, 600);
            exp -= 600;
        }
    }
    (mant, exp)
}

/// Generates the rows `l = 0, 1, 2, ...` of normalized associated Legendre
/// values and their pole-safe companions at a fixed polar angle.
#[derive(Debug, Clone)]
pub struct LegendreRows {
    x: f64,
    s: f64,
    cols: Vec<Column>,
    diag: (f64, i64),
    next_l: usize,
}

impl LegendreRows {
    pub fn new(theta: f64) -> Self {
        let (s, x) = theta.sin_cos();
        LegendreRows {
            x,
            s: s.abs(),
            cols: Vec::new(),
            diag: (0.0, 0),
            next_l: 0,
        }
    }

    fn start_column(&mut self, m: usize) {
        if m <= 1 {
            self.diag = diagonal(m, self.s);
        } else {
            let (mut mant, mut exp) = self.diag;
            mant *= -((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * self.s;
            if mant != 0.0 && mant.abs() < 1e-200 {
                mant = ldexp(mant, 600);
                exp -= 600;
            }
            if mant == 0.0 {
                exp = 0;
            }
            self.diag = (mant, exp);
        }
        self.cols.push(Column {
            m,
            l: m,
            prev: 0.0,
            cur: self.diag.0,
            exp: self.diag.1,
        });
    }

    pub fn next_row(&mut self) -> LegendreRow {
        let l = self.next_l;
        for col in self.cols.iter_mut() {
            col.advance(self.x);
        }
        self.start_column(l);
        self.next_l += 1;

        let mut p = vec![0.0; l + 1];
        let mut mos = vec![0.0; l + 1];
        for (m, col) in self.cols.iter().enumerate() {
            let v = col.value();
            if m == 0 {
                p[0] = v;
            } else {
                p[m] = self.s * v;
                mos[m] = m as f64 * v;
            }
        }
        let lf = l as f64;
        let mut dtheta = vec![0.0; l + 1];
        for m in 0..=l {
            let mf = m as f64;
            let up = if m < l { p[m + 1] } else { 0.0 };
            let down = if m == 0 { -p.get(1).copied().unwrap_or(0.0) } else { p[m - 1] };
            dtheta[m] = 0.5
                * (((lf + mf + 1.0) * (lf - mf)).sqrt() * up
                    - ((lf + mf) * (lf - mf + 1.0)).sqrt() * down);
        }
        LegendreRow {
            l,
            p,
            dtheta,
            m_over_sin: mos,
        }
    }
}

impl Iterator for LegendreRows {
    type Item = LegendreRow;
    fn next(&mut self) -> Option<LegendreRow> {
        Some(self.next_row())
    }
}

impl LegendreRow {
    /// Complex harmonic companions for signed `m` at azimuth `phi`.
    pub fn harmonic(&self, m: i64, phi: f64) -> HarmonicValue {
        let ma = m.unsigned_abs() as usize;
        let e = Complex64::from_polar(1.0, ma as f64 * phi);
        let pos = HarmonicValue {
            y: e * self.p[ma],
            dy_dtheta: e * self.dtheta[ma],
            m_over_sin: e * self.m_over_sin[ma],
        };
        if m >= 0 {
            return pos;
        }
        let sign = if ma % 2 == 0 { 1.0 } else { -1.0 };
        HarmonicValue {
            y: pos.y.conj() * sign,
            dy_dtheta: pos.dy_dtheta.conj() * sign,
            m_over_sin: -pos.m_over_sin.conj() * sign,
        }
    }
}

/// `Y_l^m(θ, φ)` together with `dY/dθ` and `(m/sin θ) Y`.
pub fn sph_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> Result<HarmonicValue> {
    if m.unsigned_abs() as usize > l {
        return Err(Error::domain(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::domain(format!("theta = {theta} outside [0, π]")));
    }
    let row = LegendreRows::new(theta).nth(l).expect("row generator is infinite");
    Ok(row.harmonic(m, phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_values() {
        let y00 = sph_harmonic(0, 0, 0.3, 1.1).unwrap();
        assert!((y00.y.re - 0.28209479177387814).abs() < 1e-15);
        let y10 = sph_harmonic(1, 0, 0.0, 0.0).unwrap();
        assert!((y10.y.re - 0.4886025119029199).abs() < 1e-15);
        // Y_1^1 = -sqrt(3/8π) sin θ e^{iφ}
        let (t, p) = (0.8, 0.4);
        let y11 = sph_harmonic(1, 1, t, p).unwrap();
        let expect = Complex64::from_polar(1.0, p) * (-(3.0 / (8.0 * PI)).sqrt() * t.sin());
        assert!((y11.y - expect).norm() < 1e-15);
        let ym11 = sph_harmonic(1, -1, t, p).unwrap();
        assert!((ym11.y + expect.conj()).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(matches!(sph_harmonic(2, 3, 0.1, 0.0), Err(Error::Domain(_))));
        assert!(matches!(sph_harmonic(2, 1, -0.1, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn companions_match_finite_differences() {
        let (t, p) = (1.1, 0.3);
        let h = 1e-6;
        for l in [1usize, 4, 9] {
            for m in -(l as i64)..=(l as i64) {
                let v = sph_harmonic(l, m, t, p).unwrap();
                let fd = (sph_harmonic(l, m, t + h, p).unwrap().y
                    - sph_harmonic(l, m, t - h, p).unwrap().y)
                    / (2.0 * h);
                assert!((v.dy_dtheta - fd).norm() < 1e-8, "l={l} m={m}");
                let direct = v.y * (m as f64 / t.sin());
                assert!((v.m_over_sin - direct).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pole_limits() {
        // on the axis only m = ±1 companions survive
        for l in 1..30usize {
            let row = LegendreRows::new(0.0).nth(l).unwrap();
            let expect = -0.5 * ((l * (l + 1)) as f64).sqrt() * row.p[0];
            assert!((row.dtheta[1] - expect).abs() < 1e-12 * expect.abs().max(1.0));
            assert!((row.m_over_sin[1] - expect).abs() < 1e-12 * expect.abs().max(1.0));
            for m in 2..=l {
                assert_eq!(row.dtheta[m], 0.0);
                assert_eq!(row.m_over_sin[m], 0.0);
            }
        }
    }
}
