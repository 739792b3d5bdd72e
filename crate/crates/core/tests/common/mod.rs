//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the refinement search.

#![allow(dead_code)]

use tokaut::graph::Graph;

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Extends a partial bijection `g → h` vertex by vertex in index order.
fn extend(g: &Graph, h: &Graph, i: usize, image: &mut Vec<usize>, used: &mut [bool], count: &mut u64, stop_at_first: bool) {
    if i == g.n() {
        *count += 1;
        return;
    }
    for y in 0..h.n() {
        if used[y] || g.degree(i) != h.degree(y) {
            continue;
        }
        if (0..i).all(|z| g.has_edge(i, z) == h.has_edge(y, image[z])) {
            image.push(y);
            used[y] = true;
            extend(g, h, i + 1, image, used, count, stop_at_first);
            used[y] = false;
            image.pop();
            if stop_at_first && *count > 0 {
                return;
            }
        }
    }
}

pub fn brute_automorphism_count(g: &Graph) -> u64 {
    let mut count = 0;
    extend(g, g, 0, &mut Vec::new(), &mut vec![false; g.n()], &mut count, false);
    count
}

pub fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut count = 0;
    extend(g, h, 0, &mut Vec::new(), &mut vec![false; h.n()], &mut count, true);
    count > 0
}
