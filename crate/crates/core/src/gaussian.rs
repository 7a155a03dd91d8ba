//! The Gaussian model behind the cumulant expansion: the quadratic-form
//! matrix `A` with `sum_{jk} lambda_jk (1 - lambda_jk) (t_j + t_k)^2 =
//! Lambda n t^T A t`, its log-determinant, the covariance
//! `Sigma = (Lambda n A)^{-1}` of `Y`, and a transform `T` with `T^T A T = I`.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};

use crate::beta::{edge_variances, BetaState};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone)]
pub struct GaussianModel {
    pub a: DMatrix<f64>,
    pub log_det_a: f64,
    /// Covariance matrix of `Y`.
    pub sigma: DMatrix<f64>,
    /// Symmetric inverse square root of `A`.
    pub t: DMatrix<f64>,
    pub big_lambda: f64,
    pub n: usize,
    eigenvalues: Vec<f64>,
}

impl GaussianModel {
    /// `Lambda n`, the scale between `A` and the precision matrix of `Y`.
    pub fn scale(&self) -> f64 {
        self.big_lambda * self.n as f64
    }

    /// Eigenvalues of `A`, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `ln det A` as a plain sum of log-eigenvalues.
    pub fn log_det_from_eigenvalues(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x.ln()).sum()
    }

    /// `Cov(Y_j, Y_k)`.
    pub fn cov(&self, j: usize, k: usize) -> f64 {
        self.sigma[(j, k)]
    }
}

pub fn quadratic_form_matrix(g: &Graph, state: &BetaState) -> DMatrix<f64> {
    let n = g.n();
    let scale = state.big_lambda * n as f64;
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (&(j, k), w) in g.edges().iter().zip(edge_variances(g, &state.beta)) {
        let w = w / scale;
        a[(j, j)] += w;
        a[(k, k)] += w;
        a[(j, k)] += w;
        a[(k, j)] += w;
    }
    a
}

pub fn build_gaussian_model(g: &Graph, state: &BetaState) -> Result<GaussianModel> {
    if state.beta.len() != g.n() {
        return Err(Error::Dimension {
            expected: g.n(),
            found: state.beta.len(),
        });
    }
    if !(state.big_lambda > 0.0) {
        return Err(Error::domain("Lambda must be positive"));
    }
    let n = g.n();
    let a = quadratic_form_matrix(g, state);

    let eig = SymmetricEigen::new(a.clone());
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let largest = *eigenvalues.last().unwrap_or(&0.0);
    let smallest = eigenvalues.first().copied().unwrap_or(0.0);
    if !(smallest >= 1e-12 * largest) || largest <= 0.0 {
        return Err(Error::Singular {
            eigenvalue: smallest,
            largest,
        });
    }

    let chol = Cholesky::new(a.clone()).ok_or(Error::Singular {
        eigenvalue: smallest,
        largest,
    })?;
    let log_det_a = 2.0
        * chol
            .l_dirty()
            .diagonal()
            .iter()
            .map(|x| x.ln())
            .sum::<f64>();
    let scale = state.big_lambda * n as f64;
    let mut sigma = chol.inverse() / scale;
    sigma = (&sigma + sigma.transpose()) * 0.5;

    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| 1.0 / x.sqrt()));
    let t = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();

    Ok(GaussianModel {
        a,
        log_det_a,
        sigma,
        t,
        big_lambda: state.big_lambda,
        n,
        eigenvalues,
    })
}

/// `Cov(Y_jk, Y_uv)` for the scaled pair variables
/// `Y_jk = (Lambda n)^{1/2} (Y_j + Y_k)`.
pub fn pairwise_covariance(model: &GaussianModel, j: usize, k: usize, u: usize, v: usize) -> f64 {
    let s = &model.sigma;
    model.scale() * (s[(j, u)] + s[(j, v)] + s[(k, u)] + s[(k, v)])
}
