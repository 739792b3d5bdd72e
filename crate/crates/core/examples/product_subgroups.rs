//! Coordinate swaps plus lifted automorphisms inside `Aut(F_2(G))` for a
//! Cartesian product `G`.

use std::error::Error;

use tokaut::graph::{complete_graph, cycle_graph, path_graph, Graph};
use tokaut::verify::{verify_product, ScaleGuard};

pub fn run() -> Result<(), Box<dyn Error>> {
    let k2 = complete_graph(2)?;
    let products: Vec<(&str, Vec<Graph>)> = vec![
        ("K_2 □ P_3", vec![k2.clone(), path_graph(3)?]),
        ("K_2 □ C_5", vec![k2.clone(), cycle_graph(5)?]),
        ("K_2 □ K_2 □ K_2", vec![k2.clone(), k2.clone(), k2]),
        ("P_3 □ C_5", vec![path_graph(3)?, cycle_graph(5)?]),
    ];
    for (name, factors) in &products {
        let r = verify_product(factors, &ScaleGuard::default())?;
        println!(
            "{name:<16} subgroup {:>4} of {:>4}  whole group: {:?}",
            r.generated_order,
            r.computed_order,
            r.conjecture_flag.unwrap_or(false)
        );
        assert!(r.passed);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
