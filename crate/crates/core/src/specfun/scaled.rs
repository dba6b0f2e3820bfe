//! Complex numbers with an extended binary exponent.
//!
//! High-order Hankel functions at small argument and regular Bessel
//! functions at large order leave the f64 range long before the products
//! that the Green's functions need do. [`Scaled`] keeps a normalized
//! mantissa and an `i64` power of two so that such products and ratios can
//! be formed first and converted back at the end.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `mant * 2^exp`, with `max(|re|, |im|)` of the mantissa in `[1, 2)` or zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    mant: Complex64,
    exp: i64,
}

/// Multiply by `2^e` without intermediate overflow.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

fn ldexp_c(z: Complex64, e: i64) -> Complex64 {
    Complex64::new(ldexp(z.re, e), ldexp(z.im, e))
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mant: Complex64 { re: 0.0, im: 0.0 },
        exp: 0,
    };

    pub fn new(mant: Complex64, exp: i64) -> Self {
        let mut s = Scaled { mant, exp };
        s.normalize();
        s
    }

    pub fn from_real(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), 0)
    }

    /// `mant * e^{ln_scale}`.
    pub fn from_ln_scale(mant: Complex64, ln_scale: f64) -> Self {
        let e2 = (ln_scale / std::f64::consts::LN_2).floor();
        let rest = ln_scale - e2 * std::f64::consts::LN_2;
        Self::new(mant * rest.exp(), e2 as i64)
    }

    fn normalize(&mut self) {
        let m = self.mant.re.abs().max(self.mant.im.abs());
        if m == 0.0 || !m.is_finite() {
            if m == 0.0 {
                self.exp = 0;
            }
            return;
        }
        let e = m.log2().floor() as i64;
        self.mant = ldexp_c(self.mant, -e);
        self.exp += e;
        // log2 rounding can leave the mantissa just outside [1, 2)
        let m = self.mant.re.abs().max(self.mant.im.abs());
        if m >= 2.0 {
            self.mant *= 0.5;
            self.exp += 1;
        } else if m < 1.0 {
            self.mant *= 2.0;
            self.exp -= 1;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.re == 0.0 && self.mant.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.mant.re.is_finite() && self.mant.im.is_finite()
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mant.norm().ln() + self.exp as f64 * std::f64::consts::LN_2
    }

    /// Unscaled value, or `None` when it overflows f64. Underflow rounds to zero.
    pub fn value(&self) -> Option<Complex64> {
        let v = ldexp_c(self.mant, self.exp);
        if v.re.is_finite() && v.im.is_finite() {
            Some(v)
        } else {
            None
        }
    }

    /// Unscaled value with underflow flushed to zero and overflow to infinity.
    pub fn value_lossy(&self) -> Complex64 {
        ldexp_c(self.mant, self.exp)
    }

    pub fn conj(&self) -> Self {
        Scaled {
            mant: self.mant.conj(),
            exp: self.exp,
        }
    }

    pub fn re(&self) -> Self {
        Self::new(Complex64::new(self.mant.re, 0.0), self.exp)
    }

    pub fn im(&self) -> Self {
        Self::new(Complex64::new(self.mant.im, 0.0), self.exp)
    }

    pub fn scale(&self, f: Complex64) -> Self {
        Self::new(self.mant * f, self.exp)
    }

    fn aligned_sum(a: Scaled, b: Scaled, sign: f64) -> Scaled {
        if b.is_zero() {
            return a;
        }
        if a.is_zero() {
            return Scaled::new(b.mant * sign, b.exp);
        }
        let e = a.exp.max(b.exp);
        let ma = ldexp_c(a.mant, a.exp - e);
        let mb = ldexp_c(b.mant, b.exp - e);
        Scaled::new(ma + mb * sign, e)
    }
}

impl From<Complex64> for Scaled {
    fn from(z: Complex64) -> Self {
        Scaled::new(z, 0)
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        Scaled::new(self.mant * rhs.mant, self.exp + rhs.exp)
    }
}

impl Mul<Complex64> for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Complex64) -> Scaled {
        self.scale(rhs)
    }
}

impl Mul<f64> for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: f64) -> Scaled {
        Scaled::new(self.mant * rhs, self.exp)
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Scaled) -> Scaled {
        Scaled::new(self.mant / rhs.mant, self.exp - rhs.exp)
    }
}

impl Add for Scaled {
    type Output = Scaled;
    fn add(self, rhs: Scaled) -> Scaled {
        Scaled::aligned_sum(self, rhs, 1.0)
    }
}

impl Sub for Scaled {
    type Output = Scaled;
    fn sub(self, rhs: Scaled) -> Scaled {
        Scaled::aligned_sum(self, rhs, -1.0)
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}
