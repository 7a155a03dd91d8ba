//! Gaussian moments by perfect matchings, and joint cumulants of products
//! of correlated Gaussians.

use factorx::cumulant::{block_power_cumulant, gaussian_moment, joint_cumulant, matching_count};

fn main() -> factorx::Result<()> {
    let cov = [[1.0, 0.4, -0.2], [0.4, 2.0, 0.3], [-0.2, 0.3, 1.5]];
    let c = |a: usize, b: usize| cov[a][b];

    println!("E[X0^4] = {}", gaussian_moment(&[0, 0, 0, 0], c)?);
    println!("E[X0 X1 X2 X2] = {}", gaussian_moment(&[0, 1, 2, 2], c)?);
    for k in [2, 4, 6, 8, 10] {
        println!("{k} slots: {} matchings", matching_count(k));
    }

    let k = joint_cumulant(&[vec![0, 0], vec![1, 1], vec![2, 2]], c)?;
    let flat: Vec<f64> = cov.iter().flatten().copied().collect();
    let by_blocks = block_power_cumulant(&[2, 2, 2], &flat);
    println!("kappa(X0^2, X1^2, X2^2) = {k:.12} (block engine {by_blocks:.12})");
    Ok(())
}
