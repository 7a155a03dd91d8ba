//! The Gaussian model attached to a beta solution: quadratic-form matrix,
//! log-determinant, covariance and whitening transform.

use factorx::beta::solve_beta;
use factorx::gaussian::{build_gaussian_model, pairwise_covariance};
use factorx::graph::{complete_graph, DegreeSequence};

fn main() -> factorx::Result<()> {
    let n = 12;
    let g = complete_graph(n)?;
    let s = solve_beta(&g, &DegreeSequence::regular(n, 5), 1e-13, 100)?;
    let m = build_gaussian_model(&g, &s)?;
    println!("Lambda = {:.6}", m.big_lambda);
    println!("ln det A = {:.12}", m.log_det_a);
    println!("eigenvalues of A: {:.6?}", m.eigenvalues());
    println!(
        "Cov(Y_0, Y_0) = {:.6e}, Cov(Y_0, Y_1) = {:.6e}",
        m.cov(0, 0),
        m.cov(0, 1)
    );
    for (name, (u, v)) in [
        ("shared pair", (0, 1)),
        ("one shared vertex", (1, 2)),
        ("disjoint", (2, 3)),
    ] {
        println!(
            "pair covariance, {name}: {:.6}",
            pairwise_covariance(&m, 0, 1, u, v)
        );
    }
    let tat = m.t.transpose() * &m.a * &m.t;
    println!(
        "max |T'AT - I| = {:.2e}",
        (tat - nalgebra::DMatrix::identity(n, n)).abs().max()
    );
    Ok(())
}
