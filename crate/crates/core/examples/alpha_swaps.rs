//! The elementary swaps `φ_α` on `F_k(K_{2,n})`, their lifts by `S_n`, and
//! the complement map.

use std::error::Error;

use tokaut::constructions::{complement_automorphism, phi_alpha_bipartite, psi_pi, AlphaFamily};
use tokaut::graph::{complete_bipartite, BipartiteSpec};
use tokaut::perm::Permutation;
use tokaut::token::token_graph;

pub fn run() -> Result<(), Box<dyn Error>> {
    let (n, k) = (4, 3);
    let spec = BipartiteSpec::new(2, n);
    let tg = token_graph(&complete_bipartite(spec)?, k)?;

    let a = AlphaFamily::bipartite(n, k, [vec![2, 3], vec![4, 5]])?;
    let b = AlphaFamily::bipartite(n, k, [vec![2, 3], vec![2, 4]])?;
    let ab = a.symmetric_difference(&b).expect("same context");
    let (pa, pb) = (phi_alpha_bipartite(spec, k, &a)?, phi_alpha_bipartite(spec, k, &b)?);
    println!("α = {a}, β = {b}, α△β = {ab}");
    assert_eq!(pa.compose(&pb)?, phi_alpha_bipartite(spec, k, &ab)?);
    assert!(tg.graph().is_automorphism(pa.images()));

    let pi = Permutation::from_cycles(n + 2, &[&[2, 3, 4]])?;
    let psi = psi_pi(spec, k, &pi)?;
    let conj = psi.compose(&pb)?.compose(&psi.inverse())?;
    println!("π(β) = {}", b.mapped(&pi)?);
    assert_eq!(conj, phi_alpha_bipartite(spec, k, &b.mapped(&pi)?)?);

    let c = complement_automorphism(&tg)?;
    let flipped = b.complemented_in_y()?;
    let commutes = c.compose(&pb)? == pb.compose(&c)?;
    println!("complement conjugates φ_β to φ_{flipped}; commutes with φ_β: {commutes}");
    assert_eq!(c.compose(&pb)?.compose(&c)?, phi_alpha_bipartite(spec, k, &flipped)?);
    println!("commutes with φ_α for α = {a}: {}", c.compose(&pa)? == pa.compose(&c)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
