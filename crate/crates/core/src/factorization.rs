//! Cartesian-product primality and prime factor decomposition for connected
//! graphs at oracle scale.
//!
//! A split `G ≅ A □ B` is searched from a fixed vertex `v0`: its neighbours
//! are divided into the edges of the two factors, the two layers through
//! `v0` are grown by transporting edges across the unique squares of a
//! product, and the resulting coordinate map is checked edge for edge. Two
//! neighbours of `v0` that are adjacent, or that do not have exactly two
//! common neighbours, always lie in the same factor, which keeps the number
//! of candidate divisions small.

use thiserror::Error;

use crate::graph::{cartesian_product, Graph, ProductLayout, ProductVertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FactorError {
    #[error("graph is disconnected; factorization needs a connected graph")]
    Disconnected,
    #[error("graph has fewer than two vertices")]
    Trivial,
}

/// Prime factors together with the coordinates of every vertex.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub factors: Vec<Graph>,
    /// `witness[v]` are the product coordinates of vertex `v`.
    pub witness: Vec<ProductVertex>,
}

impl Factorization {
    pub fn layout(&self) -> ProductLayout {
        ProductLayout::of(&self.factors)
    }

    /// Checks that the witness is an isomorphism from `g` onto the product
    /// of the factors.
    pub fn certifies(&self, g: &Graph) -> bool {
        let Ok(p) = cartesian_product(&self.factors) else {
            return false;
        };
        if p.n() != g.n() || self.witness.len() != g.n() || p.edge_count() != g.edge_count() {
            return false;
        }
        let layout = self.layout();
        let map: Vec<usize> = self.witness.iter().map(|c| layout.encode(c)).collect();
        let mut seen = vec![false; p.n()];
        for &x in &map {
            if std::mem::replace(&mut seen[x], true) {
                return false;
            }
        }
        g.edges().iter().all(|&(u, v)| p.has_edge(map[u], map[v]))
    }
}

struct Split {
    a: Vec<usize>,
    b: Vec<usize>,
    /// `coords[v] = (index in a, index in b)`
    coords: Vec<(usize, usize)>,
}

fn check(g: &Graph) -> Result<(), FactorError> {
    if g.n() < 2 {
        return Err(FactorError::Trivial);
    }
    if !g.is_connected() {
        return Err(FactorError::Disconnected);
    }
    Ok(())
}

/// True iff `g` has no factorization into two graphs on at least two
/// vertices each.
pub fn is_prime(g: &Graph) -> Result<bool, FactorError> {
    check(g)?;
    Ok(find_split(g).is_none())
}

/// Decomposes `g` into prime factors ordered by vertex count, edge count and
/// edge-list text.
pub fn prime_factor_decomposition(g: &Graph) -> Result<Factorization, FactorError> {
    check(g)?;
    let (mut factors, mut witness) = decompose(g);
    let mut order: Vec<usize> = (0..factors.len()).collect();
    let keys: Vec<(usize, usize, String)> = factors
        .iter()
        .map(|f| (f.n(), f.edge_count(), f.to_edge_list()))
        .collect();
    order.sort_by(|&i, &j| keys[i].cmp(&keys[j]));
    factors = order.iter().map(|&i| factors[i].clone()).collect();
    for c in &mut witness {
        *c = order.iter().map(|&i| c[i]).collect();
    }
    let f = Factorization { factors, witness };
    debug_assert!(f.certifies(g));
    Ok(f)
}

fn decompose(g: &Graph) -> (Vec<Graph>, Vec<ProductVertex>) {
    let Some(split) = find_split(g) else {
        return (vec![g.clone()], (0..g.n()).map(|v| vec![v]).collect());
    };
    let ga = g.induced_subgraph(&split.a).expect("layer vertices are valid");
    let gb = g.induced_subgraph(&split.b).expect("layer vertices are valid");
    let (fa, wa) = decompose(&ga);
    let (fb, wb) = decompose(&gb);
    let witness = split
        .coords
        .iter()
        .map(|&(i, j)| wa[i].iter().chain(&wb[j]).copied().collect())
        .collect();
    (fa.into_iter().chain(fb).collect(), witness)
}

/// The other common neighbour of `x` and `y` besides `except`, when they
/// have exactly two.
fn square_corner(g: &Graph, x: usize, y: usize, except: usize) -> Option<usize> {
    let common = g.common_neighbors(x, y);
    if common.len() != 2 || !common.contains(&except) {
        return None;
    }
    common.into_iter().find(|&z| z != except)
}

/// Grows the layer through `v0` whose edges at `v0` go to `own`; `other`
/// are the remaining neighbours of `v0`.
fn grow_layer(g: &Graph, v0: usize, other: &[usize]) -> Option<Vec<usize>> {
    let n = g.n();
    let mut off: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut sorted = other.to_vec();
    sorted.sort_unstable();
    off[v0] = Some(sorted);
    let mut layer = vec![v0];
    let mut head = 0;
    while head < layer.len() {
        let x = layer[head];
        head += 1;
        let ox = off[x].clone().unwrap();
        for y in g.neighbors(x) {
            if ox.binary_search(&y).is_ok() {
                continue;
            }
            let mut moved = Vec::with_capacity(ox.len());
            for &w in &ox {
                moved.push(square_corner(g, y, w, x)?);
            }
            moved.sort_unstable();
            if moved.windows(2).any(|p| p[0] == p[1]) {
                return None;
            }
            match &off[y] {
                Some(existing) => {
                    if *existing != moved {
                        return None;
                    }
                }
                None => {
                    off[y] = Some(moved);
                    layer.push(y);
                }
            }
        }
    }
    let mut in_layer = vec![false; n];
    for &v in &layer {
        in_layer[v] = true;
    }
    for &v in &layer {
        if off[v].as_ref().unwrap().iter().any(|&w| in_layer[w]) {
            return None;
        }
    }
    Some(layer)
}

/// Coordinates for the split with layers `a` and `b` through `v0`,
/// obtained by transporting `a` along a BFS tree of `b`.
fn coordinates(g: &Graph, a: &[usize], b: &[usize]) -> Option<Vec<(usize, usize)>> {
    let n = g.n();
    let ga = g.induced_subgraph(a).ok()?;
    let gb = g.induced_subgraph(b).ok()?;
    let mut copies: Vec<Option<Vec<usize>>> = vec![None; b.len()];
    copies[0] = Some(a.to_vec());
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        for q in gb.neighbors(p) {
            if copies[q].is_some() {
                continue;
            }
            let from = copies[p].clone().unwrap();
            let mut to: Vec<Option<usize>> = vec![None; a.len()];
            to[0] = Some(b[q]);
            let mut inner = std::collections::VecDeque::from([0usize]);
            while let Some(x) = inner.pop_front() {
                for y in ga.neighbors(x) {
                    if to[y].is_some() {
                        continue;
                    }
                    to[y] = Some(square_corner(g, from[y], to[x].unwrap(), from[x])?);
                    inner.push_back(y);
                }
            }
            copies[q] = Some(to.into_iter().collect::<Option<Vec<_>>>()?);
            queue.push_back(q);
        }
    }
    let mut coords: Vec<Option<(usize, usize)>> = vec![None; n];
    for (j, copy) in copies.iter().enumerate() {
        for (i, &v) in copy.as_ref()?.iter().enumerate() {
            if coords[v].replace((i, j)).is_some() {
                return None;
            }
        }
    }
    let coords: Vec<(usize, usize)> = coords.into_iter().collect::<Option<_>>()?;
    let expected = ga.edge_count() * b.len() + gb.edge_count() * a.len();
    if g.edge_count() != expected {
        return None;
    }
    let ok = g.edges().iter().all(|&(u, v)| {
        let ((ua, ub), (va, vb)) = (coords[u], coords[v]);
        (ub == vb && ga.has_edge(ua, va)) || (ua == va && gb.has_edge(ub, vb))
    });
    ok.then_some(coords)
}

fn find_split(g: &Graph) -> Option<Split> {
    let n = g.n();
    let v0 = (0..n).min_by_key(|&v| (g.degree(v), v)).unwrap();
    let nbrs: Vec<usize> = g.neighbors(v0).collect();
    // neighbours forced into the same factor
    let mut comp: Vec<usize> = (0..nbrs.len()).collect();
    fn root(comp: &mut [usize], mut x: usize) -> usize {
        while comp[x] != x {
            comp[x] = comp[comp[x]];
            x = comp[x];
        }
        x
    }
    for i in 0..nbrs.len() {
        for j in i + 1..nbrs.len() {
            let (x, y) = (nbrs[i], nbrs[j]);
            if g.has_edge(x, y) || g.common_neighbor_count(x, y) != 2 {
                let (ri, rj) = (root(&mut comp, i), root(&mut comp, j));
                comp[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut roots: Vec<usize> = (0..nbrs.len()).map(|i| root(&mut comp, i)).collect();
    let mut classes = roots.clone();
    classes.sort_unstable();
    classes.dedup();
    for r in &mut roots {
        *r = classes.binary_search(r).unwrap();
    }
    let c = classes.len();
    if c < 2 {
        return None;
    }
    assert!(c < 64, "too many neighbour classes for oracle-scale factorization");
    // class 0 always goes to the first factor, so each division is tried once
    for mask in (1u64..(1u64 << c)).step_by(2) {
        if mask == (1u64 << c) - 1 {
            continue;
        }
        let own: Vec<usize> = (0..nbrs.len()).filter(|&i| mask >> roots[i] & 1 == 1).map(|i| nbrs[i]).collect();
        let rest: Vec<usize> = (0..nbrs.len()).filter(|&i| mask >> roots[i] & 1 == 0).map(|i| nbrs[i]).collect();
        let Some(a) = grow_layer(g, v0, &rest) else { continue };
        let Some(b) = grow_layer(g, v0, &own) else { continue };
        if a.len() * b.len() != n || a.len() < 2 || b.len() < 2 {
            continue;
        }
        if let Some(coords) = coordinates(g, &a, &b) {
            return Some(Split { a, b, coords });
        }
    }
    None
}
