//! Probability that a uniform random d-factor uses a given edge: exact
//! ratio of counts against the model estimate.

use factorx::beta::solve_beta;
use factorx::estimate::edge_probability_estimate;
use factorx::exact::exact_edge_probability;
use factorx::graph::{complete_graph, DegreeSequence, Graph};
use num_traits::ToPrimitive;

fn main() -> factorx::Result<()> {
    let kn = complete_graph(10)?;
    let edges = kn
        .edges()
        .iter()
        .copied()
        .filter(|&(j, k)| (j * k) % 5 != 1);
    let g = Graph::new(10, edges)?;
    let d = DegreeSequence::new((0..10).map(|j| g.degree(j) / 2).collect());
    let s = solve_beta(&g, &d, 1e-12, 100)?;
    for &(u, v) in g.edges().iter().take(8) {
        let exact = exact_edge_probability(&g, &d, u, v)?
            .to_f64()
            .unwrap_or(f64::NAN);
        let est = edge_probability_estimate(&g, &s, u, v)?;
        println!("edge ({u},{v}): exact {exact:.5} estimate {est:.5}");
    }
    Ok(())
}
