//! Token graphs `F_k(G)` and their automorphism groups.
//!
//! The crate builds k-token graphs with colex-ranked vertices, computes
//! automorphism groups with a partition-refinement search, realizes the
//! explicit automorphisms of token graphs of complete bipartite graphs and
//! of Cartesian products, and compares the two.

pub mod autsearch;
pub mod cli;
pub mod constructions;
pub mod factorization;
pub mod graph;
pub mod perm;
pub mod token;
pub mod verify;

pub use autsearch::{automorphism_group, AutResult};
pub use graph::{BipartiteSpec, Graph};
pub use perm::{schreier_sims, PermGroup, Permutation};
pub use token::{token_graph, TokenConfig, TokenGraph};
