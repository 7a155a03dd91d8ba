//! Asymptotic expansion of the number `RG(n, d)` of labelled `d`-regular
//! graphs on `n` vertices:
//!
//! `ln RG(n,d) = ln sqrt2 + C(n,2) ln(lambda^lambda (1-lambda)^(1-lambda))
//!   + n ln C(n-1, d) + sum_{j<=k} p_j(Lambda) / (Lambda^j n^(j-1)) + O(Lambda^{-k-1} n^{-k})`
//!
//! with `lambda = d/(n-1)` and `Lambda = lambda(1-lambda)`.

use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, Scientific};

/// Largest `k` with proven polynomials.
pub const PROVEN_ORDER: usize = 7;
/// Largest `k` including the conjectured `p_8`, `p_9`.
pub const CONJECTURAL_ORDER: usize = 9;

/// `xi(N) = ln Gamma(N+1) - N ln N + N - (1/2) ln(2 pi N)`.
pub fn stirling_xi(big_n: f64) -> Result<f64> {
    if !(big_n > 0.0) || !big_n.is_finite() {
        return Err(Error::domain(format!(
            "xi(N) needs finite N > 0, got {big_n}"
        )));
    }
    // xi(N) = xi(N+1) + (N + 1/2) ln(1 + 1/N) - 1
    let mut shift = 0.0;
    let mut x = big_n;
    while x < 12.0 {
        shift += (x + 0.5) * (1.0 / x).ln_1p() - 1.0;
        x += 1.0;
    }
    Ok(shift + xi_series(x))
}

/// Bernoulli series `sum B_2k / (2k (2k-1) x^(2k-1))`, accurate for `x >= 12`.
fn xi_series(x: f64) -> f64 {
    const B: [(f64, f64); 8] = [
        (1.0, 6.0),
        (-1.0, 30.0),
        (1.0, 42.0),
        (-1.0, 30.0),
        (5.0, 66.0),
        (-691.0, 2730.0),
        (7.0, 6.0),
        (-3617.0, 510.0),
    ];
    let inv2 = 1.0 / (x * x);
    let mut pow = 1.0 / x;
    let mut terms = Vec::with_capacity(B.len());
    for (k, &(num, den)) in B.iter().enumerate() {
        let k2 = 2.0 * (k + 1) as f64;
        terms.push(num / den / (k2 * (k2 - 1.0)) * pow);
        pow *= inv2;
    }
    terms.iter().rev().sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Corrections {
    pub eps1: f64,
    pub eps2: f64,
}

/// Stirling-type corrections linking the general estimate on `K_n` to the
/// regular expansion:
/// `eps1 = ln(1 - 1/n) + (n-1) ln(1 - 2/n)` and
/// `eps2 = n xi(n-1) - n xi(d) - n xi(n-1-d) - (n/2) ln(1 - 1/n)`.
pub fn corrections(n: usize, d: usize) -> Result<Corrections> {
    if n < 3 || d < 1 || d + 2 > n {
        return Err(Error::domain(format!(
            "corrections need 1 <= d <= n-2 and n >= 3, got n={n}, d={d}"
        )));
    }
    let nf = n as f64;
    let eps1 = (-1.0 / nf).ln_1p() + (nf - 1.0) * (-2.0 / nf).ln_1p();
    let eps2 = nf * stirling_xi(nf - 1.0)?
        - nf * stirling_xi(d as f64)?
        - nf * stirling_xi((n - 1 - d) as f64)?
        - 0.5 * nf * (-1.0 / nf).ln_1p();
    Ok(Corrections { eps1, eps2 })
}

/// Evaluates `p_j(x)`. `p_8` and `p_9` are conjectural and need
/// `allow_conjectural`.
pub fn p_poly(j: usize, x: f64, allow_conjectural: bool) -> Result<f64> {
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x3 * x;
    let x5 = x4 * x;
    let v = match j {
        1 => x / 4.0,
        2 => -x2 / 4.0,
        3 => (2.0 - 23.0 * x) * x2 / 24.0,
        4 => (22.0 - 129.0 * x) * x3 / 24.0,
        5 => -(3.0 - 115.0 * x + 483.0 * x2) * x3 / 12.0,
        6 => -(375.0 - 6615.0 * x + 22097.0 * x2) * x4 / 60.0,
        7 => (1046.0 - 87318.0 * x + 1002900.0 * x2 - 2791541.0 * x3) * x4 / 720.0,
        8 | 9 if !allow_conjectural => {
            return Err(Error::domain(format!(
                "p_{j} is conjectural; pass allow_conjectural to use it"
            )))
        }
        8 => (104594.0 - 3726282.0 * x + 31805060.0 * x2 - 75882319.0 * x3) * x5 / 1680.0,
        9 => {
            -(2235.0 - 329800.0 * x + 7204710.0 * x2 - 48922725.0 * x3 + 102061471.0 * x4) * x5
                / 180.0
        }
        _ => {
            return Err(Error::domain(format!(
                "p_j is defined for 1 <= j <= 9, got {j}"
            )))
        }
    };
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionCorrections {
    pub eps1: f64,
    pub eps2: f64,
    pub base_log: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularExpansionResult {
    pub log_value: f64,
    /// `p_j(Lambda) / (Lambda^j n^(j-1))` for `j = 1..=k`.
    pub terms: Vec<f64>,
    pub corrections: ExpansionCorrections,
    pub k: usize,
    pub conjectural: bool,
    #[serde(skip)]
    pub log_value_dd: Dd,
}

impl RegularExpansionResult {
    pub fn scientific(&self) -> Scientific {
        Scientific::from_ln(self.log_value_dd)
    }
}

/// `ln sqrt2 + C(n,2) ln(lambda^lambda (1-lambda)^(1-lambda)) + n ln C(n-1,d)`
/// in double-double.
pub fn base_log(n: usize, d: usize) -> Dd {
    let m = n - 1 - d;
    let half_n = 0.5 * n as f64;
    let xlogx = |k: usize| {
        if k == 0 {
            Dd::ZERO
        } else {
            Dd::ln_int(k as u64) * k as f64
        }
    };
    let entropy = (xlogx(d) + xlogx(m) - xlogx(n - 1)) * half_n;
    let mut binom = Dd::ZERO;
    for i in 1..=d.min(m) {
        binom = binom + Dd::ln_int((n - 1 - d.min(m) + i) as u64) - Dd::ln_int(i as u64);
    }
    Dd::ln_int(2) * 0.5 + entropy + binom * n as f64
}

pub fn rg_log_expansion(
    n: usize,
    d: usize,
    k: usize,
    allow_conjectural: bool,
) -> Result<RegularExpansionResult> {
    let max_k = if allow_conjectural {
        CONJECTURAL_ORDER
    } else {
        PROVEN_ORDER
    };
    if k < 1 || k > max_k {
        let hint = if !allow_conjectural && k <= CONJECTURAL_ORDER {
            " (orders up to 9 need the conjectural terms enabled)"
        } else {
            ""
        };
        return Err(Error::domain(format!(
            "k must lie in 1..={max_k}, got {k}{hint}"
        )));
    }
    if n < 3 || d < 1 || d + 2 > n {
        return Err(Error::domain(format!(
            "need 1 <= d <= n-2, got n={n}, d={d}"
        )));
    }
    if (n * d) % 2 == 1 {
        return Err(Error::domain(format!(
            "n*d = {} is odd, so RG({n},{d}) = 0 and has no logarithm",
            n * d
        )));
    }
    let nf = n as f64;
    let lambda = d as f64 / (nf - 1.0);
    let big = lambda * (1.0 - lambda);
    let terms = (1..=k)
        .map(|j| {
            Ok(p_poly(j, big, allow_conjectural)? / (big.powi(j as i32) * nf.powi(j as i32 - 1)))
        })
        .collect::<Result<Vec<f64>>>()?;
    let base = base_log(n, d);
    let total = base + compensated_sum(terms.iter().copied());
    let corr = corrections(n, d)?;
    Ok(RegularExpansionResult {
        log_value: total.to_f64(),
        terms,
        corrections: ExpansionCorrections {
            eps1: corr.eps1,
            eps2: corr.eps2,
            base_log: base.to_f64(),
        },
        k,
        conjectural: k > PROVEN_ORDER,
        log_value_dd: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_factorial(n: u64) -> f64 {
        (1..=n).map(|i| (i as f64).ln()).sum()
    }

    #[test]
    fn xi_against_factorials() {
        for n in [1u64, 2, 3, 5, 10, 11, 12, 13, 20, 30] {
            let nf = n as f64;
            let want =
                ln_factorial(n) - nf * nf.ln() + nf - 0.5 * (2.0 * std::f64::consts::PI * nf).ln();
            assert!((stirling_xi(nf).unwrap() - want).abs() < 2e-14, "n={n}");
        }
        let xi1 = 1.0 - 0.5 * (2.0 * std::f64::consts::PI).ln();
        assert!((stirling_xi(1.0).unwrap() - xi1).abs() < 1e-15);
        let big = 1e6;
        assert!((stirling_xi(big).unwrap() * 12.0 * big - 1.0).abs() < 1e-11);
        assert!(stirling_xi(0.0).is_err());
        assert!(stirling_xi(-1.0).is_err());
    }

    #[test]
    fn xi_at_half_integer() {
        // Gamma(3/2) = sqrt(pi)/2
        let x: f64 = 0.5;
        let want = (std::f64::consts::PI.sqrt() / 2.0).ln() - x * x.ln() + x
            - 0.5 * (2.0 * std::f64::consts::PI * x).ln();
        assert!((stirling_xi(x).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn eps1_formula() {
        let c = corrections(37, 18).unwrap();
        let want = (36.0f64 / 37.0).ln() + 36.0 * (35.0f64 / 37.0).ln();
        assert!((c.eps1 - want).abs() < 1e-13);
    }

    #[test]
    fn eps2_leading_behaviour() {
        let mut last = f64::INFINITY;
        for n in [101usize, 401, 1601, 6401] {
            let d = (n - 1) / 2;
            let big = 0.25;
            let gap = (corrections(n, d).unwrap().eps2 + (1.0 - 7.0 * big) / (12.0 * big)).abs();
            assert!(gap < last);
            last = gap;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn polynomials() {
        assert_eq!(p_poly(1, 0.25, false).unwrap(), 0.0625);
        assert_eq!(p_poly(2, 1.0, false).unwrap(), -0.25);
        assert!(p_poly(8, 0.2, false).is_err());
        assert!(p_poly(8, 0.2, true).is_ok());
        assert!(p_poly(10, 0.2, true).is_err());
        assert!(p_poly(0, 0.2, true).is_err());
        // degree check: p_j(x)/x^j tends to the leading coefficient
        for j in 1..=9 {
            let big = 1e4;
            let ratio_a = p_poly(j, big, true).unwrap() / big.powi(j as i32);
            let ratio_b = p_poly(j, 2.0 * big, true).unwrap() / (2.0 * big).powi(j as i32);
            assert!(ratio_a != 0.0);
            assert!((ratio_a / ratio_b - 1.0).abs() < 1e-2, "j={j}");
        }
    }

    #[test]
    fn symmetric_under_complement() {
        for (n, d) in [(37usize, 10usize), (20, 3), (12, 4)] {
            let a = rg_log_expansion(n, d, 7, false).unwrap().log_value;
            let b = rg_log_expansion(n, n - 1 - d, 7, false).unwrap().log_value;
            assert!((a - b).abs() < 1e-10 * a.abs());
        }
    }

    #[test]
    fn table_row_k7() {
        let r = rg_log_expansion(37, 18, 7, false).unwrap();
        let s = r.scientific();
        assert_eq!(s.exponent, 168);
        assert_eq!(s.mantissa_string(11), "1.6237815979");
        assert!(!r.conjectural);
        assert!(rg_log_expansion(37, 18, 9, true).unwrap().conjectural);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(rg_log_expansion(37, 18, 8, false).is_err());
        assert!(rg_log_expansion(37, 18, 0, false).is_err());
        assert!(rg_log_expansion(7, 3, 3, false).is_err());
        assert!(rg_log_expansion(10, 0, 3, false).is_err());
        assert!(rg_log_expansion(10, 9, 3, false).is_err());
    }
}
