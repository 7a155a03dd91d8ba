//! Wick calculus for the cumulant expansion.

pub mod polynomial;
pub mod taylor;
pub mod wick;

pub use polynomial::{
    block_power_cumulant, cumulant_of_polynomial, cumulant_of_polynomial_with, form_count,
    multiset_count, CumulantOptions, Monomial, MonomialSum, DEFAULT_TUPLE_BUDGET,
};
pub use taylor::{taylor_coefficients, TaylorCoefficients, TaylorPolynomials};
pub use wick::{gaussian_moment, gaussian_moment_counted, joint_cumulant, matching_count};

use crate::error::{Error, Result};

/// Covariances `(sigma_0, sigma_1, sigma_2)` of the scaled pair variables on
/// `K_n` for pairs sharing 0, 1 or 2 endpoints.
pub fn kn_covariances(n: usize) -> Result<(f64, f64, f64)> {
    if n < 4 {
        return Err(Error::domain(format!(
            "K_n covariances need n >= 4, got {n}"
        )));
    }
    let n = n as f64;
    let sigma2 = 2.0 * n / (n - 1.0);
    let sigma1 = (n - 3.0) * n / ((n - 1.0) * (n - 2.0));
    let sigma0 = -2.0 * n / ((n - 1.0) * (n - 2.0));
    Ok((sigma0, sigma1, sigma2))
}
