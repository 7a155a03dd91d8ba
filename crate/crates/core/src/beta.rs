//! The beta-equations `sum_{k: jk in G} lambda_jk(beta) = d_j` with
//! `lambda_jk = e^{beta_j+beta_k} / (1 + e^{beta_j+beta_k})`: the edge
//! probabilities, the residual `delta`, the closed-form near solution, and a
//! damped Newton solver.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{algebraic_bipartiteness, signless_laplacian, DegreeSequence, Graph};
use crate::linalg;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100;
const MAX_BACKTRACKS: usize = 40;

/// Logistic function without overflow for large `|x|`.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn check_beta(g: &Graph, beta: &[f64]) -> Result<()> {
    if beta.len() != g.n() {
        return Err(Error::Dimension {
            expected: g.n(),
            found: beta.len(),
        });
    }
    if let Some(j) = beta.iter().position(|b| !b.is_finite()) {
        return Err(Error::domain(format!("beta_{} is not finite", j + 1)));
    }
    Ok(())
}

/// `lambda_jk` for every edge, in the order of [`Graph::edges`].
pub fn lambda_matrix(g: &Graph, beta: &[f64]) -> Result<Vec<f64>> {
    check_beta(g, beta)?;
    Ok(g.edges()
        .iter()
        .map(|&(j, k)| sigmoid(beta[j] + beta[k]))
        .collect())
}

/// `lambda_jk (1 - lambda_jk)` per edge, computed without cancellation.
pub fn edge_variances(g: &Graph, beta: &[f64]) -> Vec<f64> {
    g.edges()
        .iter()
        .map(|&(j, k)| {
            let x = beta[j] + beta[k];
            sigmoid(x) * sigmoid(-x)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub delta: Vec<f64>,
    pub inf_norm: f64,
    pub l1_norm: f64,
}

impl Residual {
    fn from_delta(delta: Vec<f64>) -> Self {
        let inf_norm = delta.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let l1_norm = crate::numeric::compensated_sum(delta.iter().map(|x| x.abs()));
        Residual {
            delta,
            inf_norm,
            l1_norm,
        }
    }
}

fn residual_from_lambda(g: &Graph, d: &DegreeSequence, lambda: &[f64]) -> Vec<f64> {
    let mut sums = vec![crate::numeric::KahanSum::new(); g.n()];
    for (&(j, k), &l) in g.edges().iter().zip(lambda) {
        sums[j].add(l);
        sums[k].add(l);
    }
    sums.iter()
        .enumerate()
        .map(|(j, s)| s.value() - d[j] as f64)
        .collect()
}

/// `delta_j = sum_{k: jk in G} lambda_jk - d_j`.
pub fn delta_residual(g: &Graph, d: &DegreeSequence, beta: &[f64]) -> Result<Residual> {
    if d.len() != g.n() {
        return Err(Error::Dimension {
            expected: g.n(),
            found: d.len(),
        });
    }
    let lambda = lambda_matrix(g, beta)?;
    Ok(Residual::from_delta(residual_from_lambda(g, d, &lambda)))
}

/// A vector `beta` together with the quantities derived from it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaState {
    pub beta: Vec<f64>,
    /// Edge-indexed, aligned with [`Graph::edges`].
    pub lambda_jk: Vec<f64>,
    pub delta: Vec<f64>,
    /// Global density `sum(d) / sum(g)`.
    pub lambda_bar: f64,
    /// `lambda_bar (1 - lambda_bar)`.
    #[serde(rename = "Lambda")]
    pub big_lambda: f64,
    pub iterations: usize,
}

impl BetaState {
    pub fn from_beta(g: &Graph, d: &DegreeSequence, beta: Vec<f64>) -> Result<Self> {
        d.check_against(g)?;
        let lambda_jk = lambda_matrix(g, &beta)?;
        let delta = residual_from_lambda(g, d, &lambda_jk);
        let (lambda_bar, big_lambda) = d.density(g);
        Ok(BetaState {
            beta,
            lambda_jk,
            delta,
            lambda_bar,
            big_lambda,
            iterations: 0,
        })
    }

    pub fn delta_inf(&self) -> f64 {
        self.delta.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn delta_l1(&self) -> f64 {
        crate::numeric::compensated_sum(self.delta.iter().map(|x| x.abs()))
    }

    pub fn lambda_edge(&self, g: &Graph, u: usize, v: usize) -> Option<f64> {
        g.edge_index(u, v).map(|e| self.lambda_jk[e])
    }
}

/// Closed-form near solution `beta_j = (1/2) ln(lambda / (1 - lambda)) + gamma_j`
/// with `gamma = Lambda^{-1} Q(G)^{-1} (d - lambda g)`.
pub fn approx_beta(g: &Graph, d: &DegreeSequence) -> Result<Vec<f64>> {
    d.check_against(g)?;
    let (lambda, big_lambda) = d.density(g);
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::domain(format!(
            "edge density lambda = {lambda} must lie strictly between 0 and 1"
        )));
    }
    let q_min = algebraic_bipartiteness(g);
    let scale = g.degrees().iter().copied().max().unwrap_or(1).max(1) as f64;
    if q_min <= 1e-9 * scale {
        return Err(Error::domain(format!(
            "signless Laplacian is singular (q(G) = {q_min:e}); G has a bipartite component"
        )));
    }
    let rhs = DVector::from_iterator(
        g.n(),
        (0..g.n()).map(|j| d[j] as f64 - lambda * g.degree(j) as f64),
    );
    let x = linalg::spd_solve(signless_laplacian(g), &rhs)?;
    let base = 0.5 * (lambda / (1.0 - lambda)).ln();
    Ok(x.iter().map(|xj| base + xj / big_lambda).collect())
}

/// Solves the beta-equations to `||delta||_inf <= tol` by Newton's method
/// with backtracking on `||delta||_2^2`, starting from [`approx_beta`].
/// Every `d_j` must lie strictly between 0 and `g_j`.
pub fn solve_beta(g: &Graph, d: &DegreeSequence, tol: f64, max_iter: usize) -> Result<BetaState> {
    d.check_against(g)?;
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive"));
    }
    if let Some(j) = (0..g.n()).find(|&j| d[j] == 0 || d[j] == g.degree(j)) {
        return Err(Error::domain(format!(
            "d_{} = {} is on the boundary [0, {}]; beta diverges. \
             Remove forced or forbidden edges first",
            j + 1,
            d[j],
            g.degree(j)
        )));
    }
    let mut beta = approx_beta(g, d)?;
    let mut delta = delta_residual(g, d, &beta)?.delta;
    let mut merit = sum_sq(&delta);
    for iter in 0..=max_iter {
        let inf = delta.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if inf <= tol {
            let mut state = BetaState::from_beta(g, d, beta)?;
            state.iterations = iter;
            return Ok(state);
        }
        if iter == max_iter {
            break;
        }
        let step = newton_step(g, &beta, &delta)?;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> = beta.iter().zip(&step).map(|(b, s)| b + t * s).collect();
            let trial_delta = delta_residual(g, d, &trial)?.delta;
            let trial_merit = sum_sq(&trial_delta);
            if trial_merit < merit {
                beta = trial;
                delta = trial_delta;
                merit = trial_merit;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence {
                iterations: iter,
                residual: inf,
                best: beta,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: delta.iter().fold(0.0f64, |m, x| m.max(x.abs())),
        best: beta,
    })
}

fn sum_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn newton_step(g: &Graph, beta: &[f64], delta: &[f64]) -> Result<Vec<f64>> {
    let n = g.n();
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for (&(j, k), w) in g.edges().iter().zip(edge_variances(g, beta)) {
        jac[(j, j)] += w;
        jac[(k, k)] += w;
        jac[(j, k)] += w;
        jac[(k, j)] += w;
    }
    let rhs = DVector::from_iterator(n, delta.iter().map(|x| -x));
    Ok(linalg::spd_solve(jac, &rhs)?.iter().copied().collect())
}
