//! Exact d-factor counts by dynamic programming over big integers.

use factorx::exact::{exact_factor_count, exact_regular_count};
use factorx::graph::{parse_edge_list, DegreeSequence};

fn main() -> factorx::Result<()> {
    for (n, d) in [(6, 3), (8, 4), (12, 6), (16, 8)] {
        let count = exact_regular_count(n, d)?;
        println!("RG({n},{d}) = {}", count.value());
    }

    let petersen = parse_edge_list(
        "n=10\n1 2\n2 3\n3 4\n4 5\n5 1\n1 6\n2 7\n3 8\n4 9\n5 10\n6 8\n8 10\n10 7\n7 9\n9 6\n",
    )?;
    let perfect_matchings = exact_factor_count(&petersen, &DegreeSequence::regular(10, 1))?;
    println!(
        "Petersen graph perfect matchings: {}",
        perfect_matchings.value()
    );
    Ok(())
}
