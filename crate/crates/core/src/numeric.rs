//! Small numeric helpers shared by the pipelines: compensated summation,
//! logarithms of big integers and decimal mantissa/exponent splitting.

use num_bigint::BigUint;
use serde::Serialize;

use crate::dd::Dd;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = KahanSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<KahanSum>().value()
}

/// Natural log of a positive big integer, accurate to double precision.
/// Returns `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (x.iter_u64_digits().next().unwrap_or(0) as f64).ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    let top = top.iter_u64_digits().next().unwrap_or(0) as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Value rendered as `mantissa × 10^exponent` with `1 ≤ mantissa < 10`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scientific {
    pub mantissa: f64,
    pub exponent: i64,
}

impl Scientific {
    /// Splits `exp(log_value)` into a decimal mantissa and exponent. The
    /// division by ln 10 runs in double-double so that large exponents do not
    /// eat into the mantissa's significant digits.
    pub fn from_ln(log_value: Dd) -> Self {
        let ln10 = Dd::new(10.0).ln();
        let log10 = log_value / ln10;
        let mut exponent = log10.hi.floor();
        let mut frac = log10 - Dd::new(exponent);
        // hi/lo splitting can leave frac a hair below 0 or at 1
        if frac.to_f64() < 0.0 {
            exponent -= 1.0;
            frac = frac + 1.0;
        } else if frac.to_f64() >= 1.0 {
            exponent += 1.0;
            frac = frac + (-1.0);
        }
        Self {
            mantissa: (frac * ln10).exp().to_f64(),
            exponent: exponent as i64,
        }
    }

    pub fn from_ln_f64(log_value: f64) -> Self {
        Self::from_ln(Dd::new(log_value))
    }

    /// Mantissa rounded to `digits` significant digits, as text.
    pub fn mantissa_string(&self, digits: usize) -> String {
        format!("{:.*}", digits.saturating_sub(1), self.mantissa)
    }
}
