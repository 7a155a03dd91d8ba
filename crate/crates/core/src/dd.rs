//! Minimal double-double arithmetic (about 32 significant digits), enough to
//! carry large cancelling logarithms such as `C(36,18)^37` against
//! `2^{-666}` without losing the low digits.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.3190468138462996e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (hi, lo) = fast_two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            Dd::renorm(hi, self.lo.floor())
        } else {
            Dd::new(hi)
        }
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2 * k;
        // exp(r) = exp(r / 2^10)^(2^10)
        let s = r.ldexp(-10);
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for i in 1..=14 {
            term = term * s / i as f64;
            sum = sum + term;
        }
        for _ in 0..10 {
            sum = sum * sum;
        }
        sum.ldexp(k as i32)
    }

    /// Natural log by one Newton step on [`Dd::exp`] from the `f64` estimate.
    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::new(f64::NAN);
        }
        let y = Dd::new(self.hi.ln());
        y + self * (-y).exp() - Dd::ONE
    }

    pub fn ln_int(k: u64) -> Self {
        Dd::new(k as f64).ln()
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = fast_two_sum(s, e + t);
        Dd::renorm(s, e + f)
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    fn add(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        Dd::renorm(s, e + self.lo)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        Dd::renorm(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        Dd::renorm(p, e + self.lo * b)
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self - Dd::new(b) * q1;
        let q2 = r.hi / b;
        let r = r - Dd::new(b) * q2;
        let q3 = r.hi / b;
        Dd::renorm(q1, q2) + q3
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        Dd::renorm(q1, q2) + q3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference splits computed with 50-digit arithmetic
    fn close(got: Dd, hi: f64, lo: f64, rel: f64) {
        let err = ((got.hi - hi) + (got.lo - lo)).abs() / hi.abs();
        assert!(err < rel, "{got:?} vs {hi} + {lo}: {err:e}");
    }

    #[test]
    fn logs() {
        close(
            Dd::new(1234.5).ln(),
            7.118421308785234,
            -1.865350488379875e-16,
            1e-30,
        );
        close(
            Dd::new(10.0).ln(),
            std::f64::consts::LN_10,
            -2.1707562233822494e-16,
            1e-30,
        );
        close(Dd::new(2.0).ln(), LN2.hi, LN2.lo, 1e-31);
        assert_eq!(Dd::ONE.ln().to_f64(), 0.0);
    }

    #[test]
    fn exps() {
        close(
            Dd::new(-3.75).exp(),
            0.023517745856009107,
            1.2666758876675962e-18,
            1e-29,
        );
        close(
            Dd::new(10.25).exp(),
            28282.541920334977,
            1.6137346351068288e-12,
            1e-29,
        );
        assert_eq!(Dd::ZERO.exp(), Dd::ONE);
    }

    #[test]
    fn arithmetic() {
        let third = Dd::ONE / 3.0;
        let back = third * 3.0;
        assert!((back - Dd::ONE).to_f64().abs() < 1e-31);
        let x = Dd::new(1e16) + 1.0 - Dd::new(1e16);
        assert_eq!(x.to_f64(), 1.0);
        assert_eq!(Dd::new(2.5).floor().to_f64(), 2.0);
    }
}
