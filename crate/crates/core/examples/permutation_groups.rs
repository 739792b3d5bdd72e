//! Schreier–Sims: orders, membership and element listing.

use std::error::Error;

use tokaut::perm::{schreier_sims, Permutation};

pub fn run() -> Result<(), Box<dyn Error>> {
    // a 5-cycle and a 3-cycle sharing one point
    let a = Permutation::from_cycles(7, &[&[0, 1, 2, 3, 4]])?;
    let b = Permutation::from_cycles(7, &[&[2, 5, 6]])?;
    let g = schreier_sims(&[a.clone(), b.clone()])?;
    println!("<{a}, {b}> has order {} with base {:?}", g.order(), g.base());

    let odd = Permutation::from_cycles(7, &[&[0, 1]])?;
    println!("contains a transposition: {}", g.contains(&odd)?);

    let s30 = schreier_sims(&[
        Permutation::from_cycles(30, &[&[0, 1]])?,
        Permutation::from_images((1..30).chain([0]).collect())?,
    ])?;
    println!("|S_30| = {}", s30.order());

    let d5 = schreier_sims(&[
        Permutation::from_images(vec![1, 2, 3, 4, 0])?,
        Permutation::from_images(vec![0, 4, 3, 2, 1])?,
    ])?;
    for p in d5.elements() {
        println!("  {p} order {}", p.order());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
