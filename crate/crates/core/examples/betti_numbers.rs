//! Betti numbers of a few small graphs and of an exploration trajectory.

use curio::graph::Graph;
use curio::homology::betti;

fn main() -> curio::Result<()> {
    let samples = [
        ("triangle K3", Graph::complete(3)),
        ("square C4", Graph::cycle(4)),
        ("tetrahedron K4", Graph::complete(4)),
        ("path P6", Graph::path(6)),
        (
            "two squares",
            Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 3)])?,
        ),
    ];
    println!("{:<16} {:>4} {:>4}", "graph", "b0", "b1");
    for (name, g) in &samples {
        let b = betti(g);
        println!("{name:<16} {:>4} {:>4}", b.beta0, b.beta1);
    }
    Ok(())
}
