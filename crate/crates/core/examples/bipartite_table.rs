//! Computed, predicted and generated orders of `Aut(F_k(K_{m,n}))`.

use std::error::Error;

use tokaut::verify::{verify_bipartite, ScaleGuard};

pub fn run() -> Result<(), Box<dyn Error>> {
    let guard = ScaleGuard::default();
    println!("{:>9} {:>6} {:>9} {:>9} {:>9}  ok", "(m,n,k)", "|V|", "computed", "predicted", "generated");
    for (m, n, k) in [(1, 3, 2), (2, 2, 2), (2, 3, 2), (2, 4, 2), (2, 4, 3), (2, 5, 2), (3, 3, 2), (3, 3, 3), (3, 4, 2)] {
        let r = verify_bipartite(m, n, k, &guard)?;
        println!(
            "{:>9} {:>6} {:>9} {:>9} {:>9}  {}",
            format!("({m},{n},{k})"),
            r.vertex_count,
            r.computed_order,
            r.predicted_order,
            r.generated_order,
            r.passed
        );
        assert!(r.passed);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
