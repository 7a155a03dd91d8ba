//! Solving the edge-probability equations for beta, and the closed-form
//! approximation.

use factorx::beta::{approx_beta, delta_residual, solve_beta};
use factorx::graph::{complete_graph, DegreeSequence, Graph};

fn main() -> factorx::Result<()> {
    let kn = complete_graph(9)?;
    let edges = kn.edges().iter().copied().filter(|&(j, k)| j + 2 != k);
    let g = Graph::new(9, edges)?;
    let d = DegreeSequence::new(vec![3, 4, 3, 4, 3, 4, 3, 4, 4]);

    let s = solve_beta(&g, &d, 1e-12, 100)?;
    println!("Newton iterations: {}", s.iterations);
    println!("beta = {:.6?}", s.beta);
    println!("max |delta| = {:.2e}", s.delta_inf());

    let approx = approx_beta(&g, &d)?;
    let r = delta_residual(&g, &d, &approx)?;
    println!("approximate beta = {approx:.6?}");
    println!("approximate max |delta| = {:.2e}", r.inf_norm);
    Ok(())
}
