//! Automorphism groups from the refinement search, checked against plain
//! backtracking.

use std::error::Error;

use tokaut::autsearch::{automorphism_group, count_automorphisms_exhaustive};
use tokaut::graph::{complete_bipartite, cycle_graph, hypercube, BipartiteSpec, Graph};
use tokaut::token::token_graph;

pub fn run() -> Result<(), Box<dyn Error>> {
    let fixtures: Vec<(&str, Graph)> = vec![
        ("C_5", cycle_graph(5)?),
        ("K_{3,4}", complete_bipartite(BipartiteSpec::new(3, 4))?),
        ("K_{3,3}", complete_bipartite(BipartiteSpec::new(3, 3))?),
        ("Q_3", hypercube(3)?),
        ("F_2(K_{1,3})", token_graph(&complete_bipartite(BipartiteSpec::new(1, 3))?, 2)?.graph().clone()),
    ];
    for (name, g) in &fixtures {
        let res = automorphism_group(g);
        let brute = count_automorphisms_exhaustive(g, 100_000);
        println!(
            "{name:<14} order {:>4}  base {:?}  orbits {:?}  nodes {}  brute force {:?}",
            res.order(),
            res.base,
            res.orbit_sizes,
            res.node_count,
            brute
        );
        for h in res.generators() {
            assert!(g.is_automorphism(h.images()));
        }
    }

    let big = token_graph(&hypercube(4)?, 2)?;
    let res = automorphism_group(big.graph());
    println!("F_2(Q_4): order {} from {} generators", res.order(), res.generators().len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
