//! The asymptotic estimate
//!
//! `N(G,d) ~ 2 M(G,d) / ((2 pi Lambda n)^{n/2} |A|^{1/2}) * exp(sum_{r<=r0} kappa_r(R(Y)) / r!)`
//!
//! where `R(theta) = i sum_j delta_j theta_j + sum_{jk in G} sum_{3<=l<=l0}
//! c_l(lambda_jk) (theta_j + theta_k)^l` and `Y` is the Gaussian of
//! [`GaussianModel`].

use serde::Serialize;

use crate::beta::{approx_beta, sigmoid, solve_beta, BetaState, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::cumulant::{
    cumulant_of_polynomial_with, form_count, multiset_count, CumulantOptions, MonomialSum,
    TaylorPolynomials, DEFAULT_TUPLE_BUDGET,
};
use crate::error::{Error, Result};
use crate::gaussian::{build_gaussian_model, GaussianModel};
use crate::graph::{DegreeSequence, Graph};
use crate::numeric::{compensated_sum, Scientific};

pub const DEFAULT_P: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Breakdown {
    #[serde(rename = "log_M")]
    pub log_m: f64,
    /// `ln 2 - (n/2) ln(2 pi Lambda n) - (1/2) ln det A`.
    pub gaussian_prefactor: f64,
    /// `kappa_r(R(Y)) / r!` for `r = 1..=r0`.
    pub kappa: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Orders {
    pub ell0: usize,
    pub r0: usize,
    /// `None` when the orders were given explicitly.
    pub p: Option<f64>,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    /// Natural log of the estimated count.
    pub log_value: f64,
    pub breakdown: Breakdown,
    pub orders: Orders,
}

impl Estimate {
    pub fn scientific(&self) -> Scientific {
        Scientific::from_ln_f64(self.log_value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaSource {
    /// Newton solution of the beta-equations.
    Solve { tol: f64, max_iter: usize },
    /// Closed-form approximation; leaves a nonzero `delta`.
    Approx,
}

impl Default for BetaSource {
    fn default() -> Self {
        BetaSource::Solve {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    pub p: Option<f64>,
    pub sigma: Option<f64>,
    pub ell0: Option<usize>,
    pub r0: Option<usize>,
    pub budget: u128,
    pub beta: BetaSource,
    pub parallel: bool,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            p: None,
            sigma: None,
            ell0: None,
            r0: None,
            budget: DEFAULT_TUPLE_BUDGET,
            beta: BetaSource::default(),
            parallel: true,
        }
    }
}

impl EstimateOptions {
    pub fn with_orders(ell0: usize, r0: usize) -> Self {
        EstimateOptions {
            ell0: Some(ell0),
            r0: Some(r0),
            ..Default::default()
        }
    }
}

/// `ln M(G,d) = sum_j delta_j beta_j - sum_{jk} [lambda ln lambda + (1-lambda) ln(1-lambda)]`.
pub fn log_m(g: &Graph, state: &BetaState) -> f64 {
    let linear = compensated_sum(state.delta.iter().zip(&state.beta).map(|(d, b)| d * b));
    let entropy = compensated_sum(g.edges().iter().map(|&(j, k)| {
        let x = state.beta[j] + state.beta[k];
        let (p, q) = (sigmoid(x), sigmoid(-x));
        let part = |t: f64| if t > 0.0 { t * t.ln() } else { 0.0 };
        part(p) + part(q)
    }));
    linear - entropy
}

/// `ell0 = 2 ceil((1+p)/sigma)` and `r0 = ell0 - 2`.
pub fn truncation_orders(p: f64, sigma: f64) -> Result<(usize, usize)> {
    if !(p > 0.0) || !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::domain(format!(
            "need p > 0 and 0 < sigma <= 1, got p={p}, sigma={sigma}"
        )));
    }
    let ell0 = 2 * ((1.0 + p) / sigma).ceil() as usize;
    Ok((ell0, ell0 - 2))
}

/// `ln(m + 1) / ln n` with `m = min_j min(d_j, g_j - d_j)`, capped at 1.
pub fn default_sigma(g: &Graph, d: &DegreeSequence) -> Result<f64> {
    let n = g.n();
    if n < 2 {
        return Err(Error::domain("need at least two vertices"));
    }
    let margin = (0..n)
        .map(|j| d[j].min(g.degree(j).saturating_sub(d[j])))
        .min()
        .unwrap_or(0);
    let sigma = ((margin + 1) as f64).ln() / (n as f64).ln();
    if !(sigma > 0.0) {
        return Err(Error::domain(
            "some d_j equals 0 or g_j, so no density exponent sigma > 0 exists",
        ));
    }
    Ok(sigma.min(1.0))
}

fn resolve_orders(g: &Graph, d: &DegreeSequence, opts: &EstimateOptions) -> Result<Orders> {
    let sigma = match opts.sigma {
        Some(s) => s,
        None => default_sigma(g, d)?,
    };
    let (ell0, r0, p) = match (opts.ell0, opts.r0) {
        (Some(l), Some(r)) => (l, r, None),
        (Some(l), None) => (l, l.saturating_sub(2), None),
        (None, Some(r)) => (r + 2, r, None),
        (None, None) => {
            let p = opts.p.unwrap_or(DEFAULT_P);
            let (l, r) = truncation_orders(p, sigma)?;
            (l, r, Some(p))
        }
    };
    if ell0 < 2 {
        return Err(Error::domain(format!(
            "ell0 must be at least 2, got {ell0}"
        )));
    }
    Ok(Orders { ell0, r0, p, sigma })
}

/// The beta state an estimate is built from.
pub fn beta_state(g: &Graph, d: &DegreeSequence, source: BetaSource) -> Result<BetaState> {
    match source {
        BetaSource::Solve { tol, max_iter } => solve_beta(g, d, tol, max_iter),
        BetaSource::Approx => BetaState::from_beta(g, d, approx_beta(g, d)?),
    }
}

/// `R_{ell0}` as a [`MonomialSum`]: linear `delta` terms and edge terms of
/// degree `3..=ell0`.
pub fn build_polynomial(g: &Graph, state: &BetaState, ell0: usize) -> Result<MonomialSum> {
    let mut poly = MonomialSum::new();
    for (j, &dj) in state.delta.iter().enumerate() {
        poly.push_linear(j, dj);
    }
    if ell0 >= 3 {
        let taylor = TaylorPolynomials::new(ell0);
        for (&(j, k), &lam) in g.edges().iter().zip(&state.lambda_jk) {
            let b = taylor.eval(lam)?;
            for l in 3..=ell0 {
                poly.push_edge(l, b.b(l), j, k);
            }
        }
    }
    Ok(poly)
}

pub fn estimate_log_count(
    g: &Graph,
    d: &DegreeSequence,
    opts: &EstimateOptions,
) -> Result<Estimate> {
    d.check_against(g)?;
    if !d.has_even_sum() {
        return Err(Error::domain(format!(
            "degree sum {} is odd, so no d-factor exists",
            d.sum()
        )));
    }
    let orders = resolve_orders(g, d, opts)?;
    let state = beta_state(g, d, opts.beta)?;
    let model = build_gaussian_model(g, &state)?;
    estimate_from_state(g, &state, &model, orders, opts)
}

/// Assembles the estimate from an existing beta state and Gaussian model.
pub fn estimate_from_state(
    g: &Graph,
    state: &BetaState,
    model: &GaussianModel,
    orders: Orders,
    opts: &EstimateOptions,
) -> Result<Estimate> {
    let poly = build_polynomial(g, state, orders.ell0)?;
    let worst = multiset_count(form_count(&poly), orders.r0);
    if worst > opts.budget {
        return Err(Error::TupleBudget {
            order: orders.r0,
            tuples: worst,
            budget: opts.budget,
        });
    }

    let cumulant_opts = CumulantOptions {
        budget: opts.budget,
        parallel: opts.parallel,
    };
    let sigma = &model.sigma;
    let mut kappa = Vec::with_capacity(orders.r0);
    let mut factorial = 1.0;
    for r in 1..=orders.r0 {
        factorial *= r as f64;
        let k = cumulant_of_polynomial_with(&poly, |a, b| sigma[(a, b)], r, cumulant_opts)?;
        kappa.push(k / factorial);
    }

    let n = g.n() as f64;
    let log_m = log_m(g, state);
    let gaussian_prefactor = std::f64::consts::LN_2
        - 0.5 * n * (2.0 * std::f64::consts::PI * model.scale()).ln()
        - 0.5 * model.log_det_a;
    let log_value = log_m + gaussian_prefactor + compensated_sum(kappa.iter().copied());
    if !log_value.is_finite() {
        return Err(Error::domain("estimate is not finite"));
    }
    Ok(Estimate {
        log_value,
        breakdown: Breakdown {
            log_m,
            gaussian_prefactor,
            kappa,
        },
        orders,
    })
}

/// Estimated probability that edge `uv` lies in a uniformly random
/// `d`-factor: `lambda_uv(beta)`. The relative error is of order
/// `(||delta||_1 + 1) / (Lambda n)`.
pub fn edge_probability_estimate(g: &Graph, state: &BetaState, u: usize, v: usize) -> Result<f64> {
    state
        .lambda_edge(g, u, v)
        .ok_or_else(|| Error::domain(format!("{{{}, {}}} is not an edge of G", u + 1, v + 1)))
}
