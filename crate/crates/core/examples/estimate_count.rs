//! Cumulant-based estimate of ln N(G, d) on a dense irregular instance,
//! compared against the exact count.

use factorx::estimate::{estimate_log_count, EstimateOptions};
use factorx::exact::exact_factor_count;
use factorx::graph::{complete_graph, DegreeSequence, Graph};

fn main() -> factorx::Result<()> {
    let kn = complete_graph(11)?;
    let edges = kn
        .edges()
        .iter()
        .copied()
        .filter(|&(j, k)| (j * k + j) % 5 != 2);
    let g = Graph::new(11, edges)?;
    let d = DegreeSequence::new((0..11).map(|j| g.degree(j) / 2).collect());
    let d = if d.has_even_sum() {
        d
    } else {
        let mut v = d.as_slice().to_vec();
        v[0] += 1;
        DegreeSequence::new(v)
    };

    let exact = exact_factor_count(&g, &d)?.ln();
    println!("edges={} degrees={:?}", g.edge_count(), d.as_slice());
    println!("exact      ln N = {exact:.6}");
    for (ell0, r0) in [(2, 0), (4, 2), (6, 3)] {
        let e = estimate_log_count(&g, &d, &EstimateOptions::with_orders(ell0, r0))?;
        println!(
            "({ell0},{r0}) est ln N = {:.6}  error {:+.4}  kappa {:?}",
            e.log_value,
            e.log_value - exact,
            e.breakdown.kappa
        );
    }
    Ok(())
}
