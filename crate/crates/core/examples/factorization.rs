//! Prime factorization with respect to the Cartesian product.

use std::error::Error;

use tokaut::factorization::{is_prime, prime_factor_decomposition};
use tokaut::graph::{cartesian_product, complete_bipartite, complete_graph, cycle_graph, hypercube, path_graph, BipartiteSpec};

pub fn run() -> Result<(), Box<dyn Error>> {
    let g = cartesian_product(&[cycle_graph(5)?, path_graph(3)?, complete_graph(3)?])?;
    // scramble the labels so the product structure is not visible
    let n = g.n();
    let map: Vec<usize> = (0..n).map(|v| (v * 7 + 3) % n).collect();
    let scrambled = g.relabel(&map);
    let f = prime_factor_decomposition(&scrambled)?;
    println!("{n} vertices factor as:");
    for factor in &f.factors {
        println!("  {} vertices, {} edges, prime: {}", factor.n(), factor.edge_count(), is_prime(factor)?);
    }
    assert!(f.certifies(&scrambled));
    println!("vertex 0 has coordinates {:?}", f.witness[0]);

    println!("Q_5 has {} factors", prime_factor_decomposition(&hypercube(5)?)?.factors.len());
    println!("K_{{3,3}} prime: {}", is_prime(&complete_bipartite(BipartiteSpec::new(3, 3))?)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
