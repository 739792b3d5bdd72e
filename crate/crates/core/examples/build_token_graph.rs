//! Builds `F_2(Q_3)` and shows how ranks, configurations and degrees line up.

use std::error::Error;

use tokaut::graph::hypercube;
use tokaut::token::{token_graph, unrank};

pub fn run() -> Result<(), Box<dyn Error>> {
    let q3 = hypercube(3)?;
    let tg = token_graph(&q3, 2)?;
    let g = tg.graph();
    println!("{}: {} vertices, {} edges", g.label().unwrap_or("?"), g.n(), g.edge_count());

    for rank in [0, 5, 27] {
        let config = unrank(rank, q3.n(), 2)?;
        assert_eq!(tg.rank_of(&config), rank);
        println!("rank {rank:>2} = {config} degree {}", g.degree(rank));
    }

    // adjacent pairs of cube vertices have degree 2r-2, the rest 2r
    let adjacent = tg.configs().iter().filter(|c| q3.has_edge(c.members()[0], c.members()[1])).count();
    let deg4 = g.degrees().iter().filter(|&&d| d == 4).count();
    println!("{adjacent} adjacent pairs, {deg4} vertices of degree 4");
    assert_eq!(adjacent, deg4);

    print!("{}", tg.rank_map_text().lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
