//! Literal evaluation of the hypotheses under which the estimate holds.
//! Implicit `O(.)` constants are taken as 1 and the measured ratios are
//! reported so callers can apply their own constants.

use serde::Serialize;

use crate::beta::delta_residual;
use crate::error::{Error, Result};
use crate::graph::{
    algebraic_bipartiteness, cheeger, DegreeSequence, Graph, DEFAULT_CHEEGER_EXACT_LIMIT,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssumptionParams {
    pub sigma: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub tau_q: f64,
    pub eps: f64,
    pub p: f64,
}

impl Default for AssumptionParams {
    fn default() -> Self {
        AssumptionParams {
            sigma: 0.5,
            b: 0.1,
            c: 10.0,
            tau_q: 0.1,
            eps: 0.01,
            p: 1.0,
        }
    }
}

impl AssumptionParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.sigma, self.b, self.c, self.tau_q, self.eps, self.p];
        if all.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::domain(
                "assumption parameters must be finite and positive",
            ));
        }
        if self.sigma > 1.0 {
            return Err(Error::domain(format!(
                "sigma must be at most 1, got {}",
                self.sigma
            )));
        }
        if self.eps >= self.sigma / 16.0 {
            return Err(Error::domain(format!(
                "eps = {} must be below sigma/16 = {}",
                self.eps,
                self.sigma / 16.0
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeBoundClause {
    pub pass: bool,
    /// 1-based vertices with `d_j > g_j`.
    pub violations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaSpreadClause {
    pub pass: bool,
    pub spread: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaLowerClause {
    pub pass: bool,
    #[serde(rename = "Lambda")]
    pub big_lambda: f64,
    /// `Lambda / n^(sigma-1)`, compared with `B`.
    pub ratio: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheegerClause {
    pub pass: bool,
    pub cheeger_pass: bool,
    pub cheeger_lower_bound: f64,
    pub cheeger_exact: bool,
    /// `Lambda^-1 ln^2 n`.
    pub cheeger_required: f64,
    pub q_pass: bool,
    pub q: f64,
    /// `tau_Q n`.
    pub q_required: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaClause {
    pub pass: bool,
    pub delta_inf: f64,
    /// `||delta||_inf / (Lambda^(1/2) n^(1/2 - sigma/2))`.
    pub inf_ratio: f64,
    pub delta_l1: f64,
    /// `||delta||_1 / n^(1+eps)`.
    pub l1_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub d_le_g: DegreeBoundClause,
    pub beta_spread: BetaSpreadClause,
    pub lambda_lower: LambdaLowerClause,
    pub cheeger_and_q: CheegerClause,
    pub delta_norms: DeltaClause,
}

impl AssumptionReport {
    pub fn all_pass(&self) -> bool {
        self.d_le_g.pass
            && self.beta_spread.pass
            && self.lambda_lower.pass
            && self.cheeger_and_q.pass
            && self.delta_norms.pass
    }

    /// Short labels of the failing clauses.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.d_le_g.pass {
            out.push("a: d_j <= g_j");
        }
        if !self.beta_spread.pass {
            out.push("b: beta spread");
        }
        if !self.lambda_lower.pass {
            out.push("c: Lambda lower bound");
        }
        if !self.cheeger_and_q.cheeger_pass {
            out.push("d: Cheeger constant");
        }
        if !self.cheeger_and_q.q_pass {
            out.push("d: algebraic bipartiteness");
        }
        if !self.delta_norms.pass {
            out.push("e: delta norms");
        }
        out
    }
}

pub fn check_assumptions(
    g: &Graph,
    d: &DegreeSequence,
    beta: &[f64],
    params: &AssumptionParams,
) -> Result<AssumptionReport> {
    check_assumptions_with_limit(g, d, beta, params, DEFAULT_CHEEGER_EXACT_LIMIT)
}

/// [`check_assumptions`] with an explicit size limit for the exact Cheeger
/// computation.
pub fn check_assumptions_with_limit(
    g: &Graph,
    d: &DegreeSequence,
    beta: &[f64],
    params: &AssumptionParams,
    cheeger_exact_limit: usize,
) -> Result<AssumptionReport> {
    params.validate()?;
    let n = g.n();
    for len in [d.len(), beta.len()] {
        if len != n {
            return Err(Error::Dimension {
                expected: n,
                found: len,
            });
        }
    }
    let nf = n as f64;

    let violations: Vec<usize> = (0..n)
        .filter(|&j| d[j] > g.degree(j))
        .map(|j| j + 1)
        .collect();
    let d_le_g = DegreeBoundClause {
        pass: violations.is_empty(),
        violations,
    };

    let (lo, hi) = beta
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &b| {
            (lo.min(b), hi.max(b))
        });
    let spread = if n == 0 { 0.0 } else { hi - lo };
    let beta_spread = BetaSpreadClause {
        pass: spread <= params.c,
        spread,
        bound: params.c,
    };

    let sum_g: usize = g.degrees().iter().sum();
    let lambda = if sum_g == 0 {
        0.0
    } else {
        d.sum() as f64 / sum_g as f64
    };
    let big_lambda = lambda * (1.0 - lambda);
    let ratio = big_lambda / nf.powf(params.sigma - 1.0);
    let lambda_lower = LambdaLowerClause {
        pass: ratio >= params.b,
        big_lambda,
        ratio,
        bound: params.b,
    };

    let h = cheeger(g, cheeger_exact_limit);
    let cheeger_required = nf.ln().powi(2) / big_lambda;
    let q = algebraic_bipartiteness(g);
    let q_required = params.tau_q * nf;
    let cheeger_pass = h.lower_bound >= cheeger_required;
    let q_pass = q >= q_required;
    let cheeger_and_q = CheegerClause {
        pass: cheeger_pass && q_pass,
        cheeger_pass,
        cheeger_lower_bound: h.lower_bound,
        cheeger_exact: h.exact.is_some(),
        cheeger_required,
        q_pass,
        q,
        q_required,
    };

    let delta_norms = if d_le_g.pass {
        let res = delta_residual(g, d, beta)?;
        let inf_ratio = res.inf_norm / (big_lambda.sqrt() * nf.powf(0.5 - params.sigma / 2.0));
        let l1_ratio = res.l1_norm / nf.powf(1.0 + params.eps);
        DeltaClause {
            pass: inf_ratio <= 1.0 && l1_ratio <= 1.0,
            delta_inf: res.inf_norm,
            inf_ratio,
            delta_l1: res.l1_norm,
            l1_ratio,
        }
    } else {
        DeltaClause {
            pass: false,
            delta_inf: f64::NAN,
            inf_ratio: f64::NAN,
            delta_l1: f64::NAN,
            l1_ratio: f64::NAN,
        }
    };

    Ok(AssumptionReport {
        d_le_g,
        beta_spread,
        lambda_lower,
        cheeger_and_q,
        delta_norms,
    })
}
