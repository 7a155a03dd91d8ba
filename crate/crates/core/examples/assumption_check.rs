//! Checking the quantitative conditions under which the estimate is
//! guaranteed, clause by clause.

use factorx::assumptions::{check_assumptions, AssumptionParams};
use factorx::beta::solve_beta;
use factorx::graph::{complete_graph, DegreeSequence};

fn main() -> factorx::Result<()> {
    let params = AssumptionParams::default();
    for n in [20, 400] {
        let g = complete_graph(n)?;
        let d = DegreeSequence::regular(n, n / 2);
        let s = solve_beta(&g, &d, 1e-12, 100)?;
        let report = check_assumptions(&g, &d, &s.beta, &params)?;
        println!(
            "K_{n}: all pass = {}, failing = {:?}",
            report.all_pass(),
            report.failures()
        );
    }
    Ok(())
}
