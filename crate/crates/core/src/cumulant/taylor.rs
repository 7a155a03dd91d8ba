//! Taylor coefficients of `f(z) = ln(1 + lambda (e^{iz} - 1))`.
//!
//! Writing `c_l = i^l b_l`, the real numbers `b_l` are the Taylor
//! coefficients of `ln(1 + lambda (e^s - 1))`, i.e. `b_l = k_l / l!` where
//! `k_l` is the `l`-th cumulant of a Bernoulli(lambda) variable. These obey
//! `k_{l+1} = Lambda dk_l/dlambda`. Each `k_l` is kept exactly as
//! `P_l(Lambda) + (1 - 2 lambda) Q_l(Lambda)` with rational coefficients, so
//! odd orders `l >= 3` (where `P_l = 0`) vanish exactly at `lambda = 1/2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

type Poly = Vec<BigRational>;

fn derivative(p: &Poly) -> Poly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

fn add_into(acc: &mut Poly, p: &Poly, shift: usize, scale: &BigRational) {
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, BigRational::zero());
    }
    for (i, c) in p.iter().enumerate() {
        acc[i + shift] += c * scale;
    }
}

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn eval_exact(p: &Poly, x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn eval_f64(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Exact polynomial representation of `b_1..b_{l_max}`, reusable across
/// many values of lambda.
#[derive(Debug, Clone)]
pub struct TaylorPolynomials {
    /// `(P_l, Q_l)` already divided by `l!`.
    exact: Vec<(Poly, Poly)>,
    float: Vec<(Vec<f64>, Vec<f64>)>,
}

impl TaylorPolynomials {
    pub fn new(l_max: usize) -> Self {
        let half = BigRational::new(1.into(), 2.into());
        let one = BigRational::from_integer(1.into());
        let mut p: Poly = vec![half.clone()];
        let mut q: Poly = vec![-half];
        let mut exact = Vec::with_capacity(l_max);
        let mut factorial = BigInt::from(1);
        for l in 1..=l_max {
            factorial *= BigInt::from(l);
            let f = BigRational::from_integer(factorial.clone());
            exact.push((
                p.iter().map(|c| c / &f).collect::<Poly>(),
                q.iter().map(|c| c / &f).collect::<Poly>(),
            ));
            // k' = Lambda [ (1 - 4 Lambda) Q' - 2 Q ] + t Lambda P'
            let dq = derivative(&q);
            let mut new_p: Poly = Vec::new();
            add_into(&mut new_p, &dq, 1, &one);
            add_into(&mut new_p, &dq, 2, &BigRational::from_integer((-4).into()));
            add_into(&mut new_p, &q, 1, &BigRational::from_integer((-2).into()));
            let mut new_q: Poly = Vec::new();
            add_into(&mut new_q, &derivative(&p), 1, &one);
            p = trim(new_p);
            q = trim(new_q);
        }
        let float = exact
            .iter()
            .map(|(p, q)| {
                let conv = |v: &Poly| v.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
                (conv(p), conv(q))
            })
            .collect();
        TaylorPolynomials { exact, float }
    }

    pub fn l_max(&self) -> usize {
        self.exact.len()
    }

    /// Exact `b_l` at a rational lambda.
    pub fn b_exact(&self, l: usize, lambda: &BigRational) -> BigRational {
        let one = BigRational::from_integer(1.into());
        let big = lambda * (&one - lambda);
        let t = &one - lambda - lambda;
        let (p, q) = &self.exact[l - 1];
        eval_exact(p, &big) + t * eval_exact(q, &big)
    }

    pub fn eval(&self, lambda: f64) -> Result<TaylorCoefficients> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::domain(format!(
                "lambda = {lambda} must lie strictly between 0 and 1"
            )));
        }
        let big = lambda * (1.0 - lambda);
        let t = 1.0 - 2.0 * lambda;
        let b = self
            .float
            .iter()
            .map(|(p, q)| {
                let odd = eval_f64(q, big);
                // keep exact zeros exact
                if odd == 0.0 || t == 0.0 {
                    eval_f64(p, big)
                } else {
                    eval_f64(p, big) + t * odd
                }
            })
            .collect();
        Ok(TaylorCoefficients { b })
    }
}

/// `b_1..b_lmax` with `c_l = i^l b_l`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorCoefficients {
    pub b: Vec<f64>,
}

impl TaylorCoefficients {
    /// `b_l`, 1-based.
    pub fn b(&self, l: usize) -> f64 {
        self.b[l - 1]
    }
}

pub fn taylor_coefficients(lambda: f64, l_max: usize) -> Result<TaylorCoefficients> {
    if l_max == 0 {
        return Err(Error::domain("l_max must be at least 1"));
    }
    TaylorPolynomials::new(l_max).eval(lambda)
}
