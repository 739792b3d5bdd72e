//! `Aut(F_2(Q_r))` for r = 3, 4 and the coordinate slices of `F_2(Q_r)`.

use std::error::Error;

use tokaut::constructions::cube_slices;
use tokaut::verify::{verify_cube, ScaleGuard};

pub fn run() -> Result<(), Box<dyn Error>> {
    for r in 3..=4 {
        let s = cube_slices(r, 1)?;
        println!("r={r}: |0_1| = {}, |1_1| = {}, |δ_1| = {}", s.zero.len(), s.one.len(), s.delta.len());
        let rep = verify_cube(r, &ScaleGuard::default())?;
        println!(
            "r={r}: computed {} predicted {} generated {} in {} ms",
            rep.computed_order, rep.predicted_order, rep.generated_order, rep.wall_time_ms
        );
        for (name, ok) in rep.checks.iter().filter(|(k, _)| k.starts_with("slice_1")) {
            println!("  {name}: {ok}");
        }
        assert!(rep.passed);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
