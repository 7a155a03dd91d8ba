//! Dense symmetric linear algebra on top of `nalgebra`.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Solves `m x = rhs` for symmetric positive (semi)definite `m` by Cholesky,
/// retrying with a growing diagonal jitter starting at `1e-12` when the
/// factorization fails.
pub fn spd_solve(m: DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let scale = m.diagonal().iter().fold(1.0f64, |a, x| a.max(x.abs()));
    let mut jitter = 0.0;
    for _ in 0..8 {
        let mut trial = m.clone();
        if jitter > 0.0 {
            for i in 0..trial.nrows() {
                trial[(i, i)] += jitter;
            }
        }
        if let Some(ch) = Cholesky::new(trial) {
            return Ok(ch.solve(rhs));
        }
        jitter = if jitter == 0.0 {
            1e-12 * scale
        } else {
            jitter * 100.0
        };
    }
    let ev = sorted_eigenvalues(&m);
    Err(Error::Singular {
        eigenvalue: ev[0],
        largest: *ev.last().unwrap_or(&0.0),
    })
}

pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Max-abs entry of `a - b`.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Induced infinity norm (max absolute row sum).
pub fn inf_norm(a: &DMatrix<f64>) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}
