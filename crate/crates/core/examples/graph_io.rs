//! Parsing graphs from edge lists and graph6, plus the spectral and
//! isoperimetric quantities used by the assumption checks.

use factorx::graph::{algebraic_bipartiteness, cheeger, parse_edge_list, parse_graph6};

fn main() -> factorx::Result<()> {
    let cube =
        parse_edge_list("n=8\n1 2\n2 4\n4 3\n3 1\n5 6\n6 8\n8 7\n7 5\n1 5\n2 6\n3 7\n4 8\n")?;
    let g6 = cube.to_graph6();
    println!("3-cube as graph6: {g6}");
    let back = parse_graph6(&g6)?;
    println!("round trip edges: {}", back.edge_count());

    let petersen = parse_graph6("IheA@GUAo")?;
    println!(
        "Petersen: n={} m={} degrees={:?}",
        petersen.n(),
        petersen.edge_count(),
        petersen.degrees()
    );
    for (name, g) in [("cube", &cube), ("Petersen", &petersen)] {
        let h = cheeger(g, 20);
        println!(
            "{name}: bipartiteness {:.4}, Cheeger exact {:?}, spectral bound {:.4}",
            algebraic_bipartiteness(g),
            h.exact,
            h.lower_bound
        );
    }
    Ok(())
}
