//! Automorphism groups by equitable partition refinement and
//! individualization backtracking.
//!
//! The search follows the usual first-path scheme: the leftmost path of the
//! search tree fixes a base `v_0, …, v_{d-1}` and a reference leaf. For each
//! level, deepest first, every vertex of the target cell that is not already
//! known to be in the orbit of `v_i` is tried; a subtree search either yields
//! an automorphism mapping `v_i` to it or proves that none exists. Nodes whose
//! refinement trace differs from the first path at the same depth are pruned.
//! The generators found form a strong generating set for the base, and the
//! group order is the product of the basic orbit lengths, which is
//! cross-checked against an independent Schreier–Sims run.

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::graph::{distance_matrix, Graph};
use crate::perm::{schreier_sims, PermGroup, Permutation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("search node limit of {0} exceeded")]
    NodeLimit(u64),
}

/// An ordered partition of `0..n`. Cell order is significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedPartition {
    cells: Vec<Vec<usize>>,
}

impl OrderedPartition {
    pub fn unit(n: usize) -> Self {
        OrderedPartition {
            cells: vec![(0..n).collect()],
        }
    }

    /// Builds a partition from explicit cells; panics unless they cover
    /// `0..n` exactly once.
    pub fn from_cells(cells: Vec<Vec<usize>>) -> Self {
        let n: usize = cells.iter().map(Vec::len).sum();
        let mut seen = vec![false; n];
        for &v in cells.iter().flatten() {
            assert!(v < n && !seen[v], "cells do not partition 0..{n}");
            seen[v] = true;
        }
        assert!(cells.iter().all(|c| !c.is_empty()), "empty cell");
        OrderedPartition { cells }
    }

    /// Cells grouped by equal colour, in ascending colour order.
    pub fn from_colors(colors: &[usize]) -> Self {
        let mut keys: Vec<usize> = colors.to_vec();
        keys.sort_unstable();
        keys.dedup();
        let cells = keys
            .iter()
            .map(|&c| (0..colors.len()).filter(|&v| colors[v] == c).collect())
            .collect();
        OrderedPartition { cells }
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 1)
    }

    fn to_part(&self) -> Part {
        let n: usize = self.cells.iter().map(Vec::len).sum();
        let mut part = Part {
            order: Vec::with_capacity(n),
            pos: vec![0; n],
            cell: vec![0; n],
            len: vec![0; n],
        };
        for c in &self.cells {
            let start = part.order.len();
            part.len[start] = c.len();
            for &v in c {
                part.pos[v] = part.order.len();
                part.cell[v] = start;
                part.order.push(v);
            }
        }
        part
    }
}

/// Working partition: cells are contiguous ranges of `order`, identified by
/// their start position.
#[derive(Clone, Debug)]
struct Part {
    order: Vec<usize>,
    pos: Vec<usize>,
    cell: Vec<usize>,
    len: Vec<usize>,
}

impl Part {
    fn n(&self) -> usize {
        self.order.len()
    }

    fn cell_starts(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut s = 0;
        while s < self.n() {
            out.push(s);
            s += self.len[s];
        }
        out
    }

    fn is_discrete(&self) -> bool {
        self.cell_starts().len() == self.n()
    }

    fn to_ordered(&self) -> OrderedPartition {
        let cells = self
            .cell_starts()
            .into_iter()
            .map(|s| self.order[s..s + self.len[s]].to_vec())
            .collect();
        OrderedPartition { cells }
    }

    /// First cell of smallest size above `min_len`.
    fn target_cell(&self, min_len: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in self.cell_starts() {
            if self.len[s] > min_len && best.is_none_or(|b| self.len[s] < self.len[b]) {
                best = Some(s);
            }
        }
        best
    }

    /// Splits the cell starting at `c` into fragments of equal key, in
    /// ascending key order. Returns the fragment starts.
    fn split_by_key<K: Ord + Copy>(&mut self, c: usize, key: impl Fn(usize) -> K) -> Vec<usize> {
        let end = c + self.len[c];
        let slice = &mut self.order[c..end];
        slice.sort_by_key(|&v| (key(v), v));
        let mut starts = vec![c];
        for p in c + 1..end {
            if key(self.order[p]) != key(self.order[p - 1]) {
                starts.push(p);
            }
        }
        for (i, &s) in starts.iter().enumerate() {
            let e = starts.get(i + 1).copied().unwrap_or(end);
            self.len[s] = e - s;
            for p in s..e {
                let v = self.order[p];
                self.pos[v] = p;
                self.cell[v] = s;
            }
        }
        starts
    }

    /// Moves `v` to the front of its cell as a singleton. Returns the start
    /// of the new singleton cell.
    fn individualize(&mut self, v: usize) -> usize {
        let c = self.cell[v];
        let l = self.len[c];
        debug_assert!(l > 1);
        let p = self.pos[v];
        let u = self.order[c];
        self.order.swap(c, p);
        self.pos[u] = p;
        self.pos[v] = c;
        self.len[c] = 1;
        self.len[c + 1] = l - 1;
        for q in c + 1..c + l {
            self.cell[self.order[q]] = c + 1;
        }
        c
    }

    /// Moves `v` and `w` (same cell) to the front of their cell as a
    /// two-element cell.
    fn individualize_pair(&mut self, v: usize, w: usize) -> usize {
        let c = self.cell[v];
        debug_assert_eq!(self.cell[w], c);
        let l = self.len[c];
        for (slot, x) in [(c, v), (c + 1, w)] {
            let p = self.pos[x];
            let y = self.order[slot];
            self.order.swap(slot, p);
            self.pos[y] = p;
            self.pos[x] = slot;
        }
        self.len[c] = 2;
        self.len[c + 2] = l - 2;
        for q in c + 2..c + l {
            self.cell[self.order[q]] = c + 2;
        }
        c
    }
}

/// Refinement state shared across a search: adjacency lists and scratch.
struct Refiner<'a> {
    adj: &'a [Vec<usize>],
    count: Vec<usize>,
    in_queue: Vec<bool>,
}

impl<'a> Refiner<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        Refiner {
            adj,
            count: vec![0; n],
            in_queue: vec![false; n],
        }
    }

    /// Equitable refinement driven by the splitter queue. Returns a hash of
    /// the split events, which is invariant under relabeling.
    fn equitable(&mut self, part: &mut Part, initial: &[usize], hasher: &mut DefaultHasher) {
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in initial {
            if !self.in_queue[s] {
                self.in_queue[s] = true;
                queue.push_back(s);
            }
        }
        let mut touched_vertices: Vec<usize> = Vec::new();
        let mut touched_cells: Vec<usize> = Vec::new();
        while let Some(w) = queue.pop_front() {
            self.in_queue[w] = false;
            let wlen = part.len[w];
            for p in w..w + wlen {
                let x = part.order[p];
                for &y in &self.adj[x] {
                    if self.count[y] == 0 {
                        touched_vertices.push(y);
                    }
                    self.count[y] += 1;
                }
            }
            for &y in &touched_vertices {
                touched_cells.push(part.cell[y]);
            }
            touched_cells.sort_unstable();
            touched_cells.dedup();
            (w, wlen, touched_cells.len()).hash(hasher);
            for &c in &touched_cells {
                if part.len[c] == 1 {
                    self.count[part.order[c]].hash(hasher);
                    continue;
                }
                let count = &self.count;
                let was_queued = self.in_queue[c];
                let starts = part.split_by_key(c, |v| count[v]);
                for &s in &starts {
                    (s, part.len[s], count[part.order[s]]).hash(hasher);
                }
                if starts.len() == 1 {
                    continue;
                }
                if was_queued {
                    for &s in &starts[1..] {
                        self.in_queue[s] = true;
                        queue.push_back(s);
                    }
                } else {
                    let largest = *starts
                        .iter()
                        .max_by_key(|&&s| (part.len[s], std::cmp::Reverse(s)))
                        .unwrap();
                    for &s in &starts {
                        if s != largest {
                            self.in_queue[s] = true;
                            queue.push_back(s);
                        }
                    }
                }
            }
            for &y in &touched_vertices {
                self.count[y] = 0;
            }
            touched_vertices.clear();
            touched_cells.clear();
        }
    }

    /// Splits every cell by each vertex's multiset of (cell, distance)
    /// pairs. Returns the starts of all cells that changed.
    fn distance_split(&mut self, part: &mut Part, dist: &[Vec<usize>], hasher: &mut DefaultHasher) -> Vec<usize> {
        let n = part.n();
        let mut keys: Vec<u64> = vec![0; n];
        for (v, key) in keys.iter_mut().enumerate() {
            let mut profile: Vec<(usize, usize)> = (0..n).map(|u| (part.cell[u], dist[v][u])).collect();
            profile.sort_unstable();
            let mut h = DefaultHasher::new();
            profile.hash(&mut h);
            *key = h.finish();
        }
        let mut changed = Vec::new();
        for c in part.cell_starts() {
            if part.len[c] == 1 {
                continue;
            }
            let starts = part.split_by_key(c, |v| keys[v]);
            if starts.len() > 1 {
                for &s in &starts {
                    (s, part.len[s]).hash(hasher);
                }
                changed.extend(starts);
            }
        }
        changed
    }

    /// Full refinement to a fixed point of equitable refinement and, when
    /// distances are supplied, the distance-profile split.
    fn refine(&mut self, part: &mut Part, initial: &[usize], dist: Option<&[Vec<usize>]>) -> u64 {
        let mut hasher = DefaultHasher::new();
        self.equitable(part, initial, &mut hasher);
        if let Some(d) = dist {
            loop {
                let changed = self.distance_split(part, d, &mut hasher);
                if changed.is_empty() {
                    break;
                }
                self.equitable(part, &changed, &mut hasher);
            }
        }
        part.cell_starts().len().hash(&mut hasher);
        hasher.finish()
    }
}

/// Coarsest equitable refinement of `p`. With `distances`, cells are also
/// split by each vertex's distance profile to the current cells, repeated
/// until stable.
pub fn refine(g: &Graph, p: &OrderedPartition, distances: Option<&[Vec<usize>]>) -> OrderedPartition {
    let adj = g.adjacency_lists();
    let mut part = p.to_part();
    let mut refiner = Refiner::new(&adj);
    let all = part.cell_starts();
    refiner.refine(&mut part, &all, distances);
    part.to_ordered()
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Abort once this many search-tree nodes have been visited.
    pub node_limit: Option<u64>,
    /// Use distance profiles when refining the root partition.
    pub root_distances: bool,
    /// Optional vertex colouring that automorphisms must preserve.
    pub colors: Option<Vec<usize>>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_limit: None,
            root_distances: true,
            colors: None,
        }
    }
}

/// Result of an automorphism search.
#[derive(Clone, Debug)]
pub struct AutResult {
    pub group: PermGroup,
    /// Search-tree nodes visited.
    pub node_count: u64,
    /// Base fixed by the first path.
    pub base: Vec<usize>,
    /// Basic orbit lengths along `base`.
    pub orbit_sizes: Vec<usize>,
}

impl AutResult {
    pub fn order(&self) -> BigUint {
        self.group.order()
    }

    pub fn generators(&self) -> &[Permutation] {
        self.group.generators()
    }
}

struct PathNode {
    part: Part,
    trace: u64,
    target: Option<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    refiner: Refiner<'a>,
    path: Vec<PathNode>,
    first_leaf: Vec<usize>,
    nodes: u64,
    limit: Option<u64>,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), SearchError> {
        self.nodes += 1;
        match self.limit {
            Some(l) if self.nodes > l => Err(SearchError::NodeLimit(l)),
            _ => Ok(()),
        }
    }

    fn child(&mut self, parent: &Part, v: usize) -> (Part, u64) {
        let mut part = parent.clone();
        let s = part.individualize(v);
        let trace = self.refiner.refine(&mut part, &[s], None);
        (part, trace)
    }

    /// Looks for a leaf below `part` (at `depth`) equivalent to the first
    /// leaf; returns the automorphism if found.
    fn find_equivalent(&mut self, part: &Part, depth: usize) -> Result<Option<Permutation>, SearchError> {
        if depth + 1 == self.path.len() {
            if !part.is_discrete() {
                return Ok(None);
            }
            let mut images = vec![0; part.n()];
            for (p, &v) in self.first_leaf.iter().enumerate() {
                images[v] = part.order[p];
            }
            return Ok(if self.g.is_automorphism(&images) {
                Some(Permutation::from_images(images).expect("leaf bijection"))
            } else {
                None
            });
        }
        let t = self.path[depth].target.expect("interior node has a target");
        if part.len[t] != self.path[depth].part.len[t] {
            return Ok(None);
        }
        let cell: Vec<usize> = part.order[t..t + part.len[t]].to_vec();
        for u in cell {
            self.tick()?;
            let (child, trace) = self.child(part, u);
            if trace != self.path[depth + 1].trace {
                continue;
            }
            if let Some(g) = self.find_equivalent(&child, depth + 1)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller id as root keeps results deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }

    fn absorb(&mut self, g: &Permutation) {
        for x in 0..g.degree() {
            self.union(x, g.apply(x));
        }
    }
}

/// Automorphism group of `g` with default settings and no node limit.
pub fn automorphism_group(g: &Graph) -> AutResult {
    automorphism_group_with(g, &SearchConfig::default()).expect("no node limit")
}

pub fn automorphism_group_with(g: &Graph, config: &SearchConfig) -> Result<AutResult, SearchError> {
    let n = g.n();
    let adj = g.adjacency_lists();
    let dist = if config.root_distances { Some(distance_matrix(g)) } else { None };
    let start = match &config.colors {
        Some(colors) => OrderedPartition::from_colors(colors),
        None => OrderedPartition::unit(n),
    };
    let mut root = start.to_part();
    let mut search = Search {
        g,
        refiner: Refiner::new(&adj),
        path: Vec::new(),
        first_leaf: Vec::new(),
        nodes: 1,
        limit: config.node_limit,
    };
    let all = root.cell_starts();
    let trace = search.refiner.refine(&mut root, &all, dist.as_deref());

    // first path: smallest non-singleton cell, lowest vertex id
    let mut cur = root;
    let mut cur_trace = trace;
    let mut base = Vec::new();
    loop {
        let target = cur.target_cell(1);
        search.path.push(PathNode {
            part: cur.clone(),
            trace: cur_trace,
            target,
        });
        let Some(t) = target else { break };
        let v = *cur.order[t..t + cur.len[t]].iter().min().unwrap();
        base.push(v);
        search.tick()?;
        let (child, tr) = search.child(&cur, v);
        cur = child;
        cur_trace = tr;
    }
    search.first_leaf = cur.order.clone();

    let mut gens: Vec<Permutation> = Vec::new();
    let mut orbit_sizes = vec![0; base.len()];
    for level in (0..base.len()).rev() {
        let vi = base[level];
        let mut uf = UnionFind::new(n);
        for h in &gens {
            uf.absorb(h);
        }
        let node_part = search.path[level].part.clone();
        let t = search.path[level].target.unwrap();
        let mut cell: Vec<usize> = node_part.order[t..t + node_part.len[t]].to_vec();
        cell.sort_unstable();
        let mut rejected: Vec<usize> = Vec::new();
        for &w in &cell {
            if w == vi || uf.find(w) == uf.find(vi) {
                continue;
            }
            let rw = uf.find(w);
            if rejected.iter().any(|&r| uf.find(r) == rw) {
                continue;
            }
            search.tick()?;
            let (child, tr) = search.child(&node_part, w);
            let found = if tr == search.path[level + 1].trace {
                search.find_equivalent(&child, level + 1)?
            } else {
                None
            };
            match found {
                Some(h) => {
                    debug_assert_eq!(h.apply(vi), w);
                    uf.absorb(&h);
                    gens.push(h);
                }
                None => rejected.push(w),
            }
        }
        let root_v = uf.find(vi);
        orbit_sizes[level] = cell.iter().filter(|&&w| uf.find(w) == root_v).count();
    }

    let group = if gens.is_empty() {
        PermGroup::trivial(n)
    } else {
        schreier_sims(&gens).expect("generators share a degree")
    };
    let product = orbit_sizes
        .iter()
        .fold(BigUint::one(), |acc, &s| acc * BigUint::from(s));
    assert_eq!(
        group.order(),
        product,
        "orbit-length product disagrees with Schreier–Sims order"
    );
    Ok(AutResult {
        group,
        node_count: search.nodes,
        base,
        orbit_sizes,
    })
}

/// Searches for an isomorphism `g → h` with the refinement engine run on
/// the disjoint union, individualizing one vertex from each side at a time.
pub(crate) fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    if n != h.n() || g.edge_count() != h.edge_count() {
        return None;
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return None;
    }
    let u = g.disjoint_union(h);
    let adj = u.adjacency_lists();
    let dist = distance_matrix(&u);
    let mut refiner = Refiner::new(&adj);
    let mut root = OrderedPartition::unit(2 * n).to_part();
    let all = root.cell_starts();
    refiner.refine(&mut root, &all, Some(&dist));

    fn balanced(part: &Part, n: usize) -> bool {
        part.cell_starts().into_iter().all(|s| {
            let left = part.order[s..s + part.len[s]].iter().filter(|&&v| v < n).count();
            2 * left == part.len[s]
        })
    }

    fn dfs(refiner: &mut Refiner<'_>, part: &Part, n: usize, g: &Graph, h: &Graph) -> Option<Vec<usize>> {
        if !balanced(part, n) {
            return None;
        }
        let Some(t) = part.target_cell(2) else {
            let mut map = vec![0; n];
            for s in part.cell_starts() {
                let (a, b) = (part.order[s], part.order[s + 1]);
                let (x, y) = if a < n { (a, b - n) } else { (b, a - n) };
                map[x] = y;
            }
            let ok = g.edges().iter().all(|&(x, y)| h.has_edge(map[x], map[y]));
            return ok.then_some(map);
        };
        let cell = &part.order[t..t + part.len[t]];
        let v = *cell.iter().filter(|&&x| x < n).min().unwrap();
        let mut right: Vec<usize> = cell.iter().copied().filter(|&x| x >= n).collect();
        right.sort_unstable();
        for w in right {
            let mut child = part.clone();
            let s = child.individualize_pair(v, w);
            refiner.refine(&mut child, &[s], None);
            if let Some(m) = dfs(refiner, &child, n, g, h) {
                return Some(m);
            }
        }
        None
    }

    dfs(&mut refiner, &root, n, g, h)
}

/// Counts automorphisms by plain backtracking, independent of the
/// refinement engine. Returns `None` once the count exceeds `limit`.
///
/// Vertices are mapped in BFS order so each vertex after a component root
/// must go to a neighbour of its parent's image.
pub fn count_automorphisms_exhaustive(g: &Graph, limit: u64) -> Option<u64> {
    let n = g.n();
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            order.push(u);
            for v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    q.push_back(v);
                }
            }
        }
    }
    let deg = g.degrees();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut count = 0u64;

    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        g: &Graph,
        order: &[usize],
        parent: &[Option<usize>],
        deg: &[usize],
        image: &mut [usize],
        used: &mut [bool],
        count: &mut u64,
        limit: u64,
    ) -> bool {
        if i == order.len() {
            *count += 1;
            return *count <= limit;
        }
        let x = order[i];
        let candidates: Vec<usize> = match parent[x] {
            Some(p) => g.neighbors(image[p]).collect(),
            None => (0..g.n()).collect(),
        };
        for y in candidates {
            if used[y] || deg[y] != deg[x] {
                continue;
            }
            let consistent = order[..i]
                .iter()
                .all(|&z| g.has_edge(x, z) == g.has_edge(y, image[z]));
            if !consistent {
                continue;
            }
            image[x] = y;
            used[y] = true;
            let keep = go(i + 1, g, order, parent, deg, image, used, count, limit);
            used[y] = false;
            image[x] = usize::MAX;
            if !keep {
                return false;
            }
        }
        true
    }

    let within = go(0, g, &order, &parent, &deg, &mut image, &mut used, &mut count, limit);
    within.then_some(count)
}
