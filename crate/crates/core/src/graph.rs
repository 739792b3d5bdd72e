//! Simple undirected graphs with dense bitset adjacency rows, the standard
//! constructors used throughout the crate, and Cartesian products whose
//! vertices carry mixed-radix coordinates.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    Loop(usize),
    #[error("cycle graph needs at least 3 vertices, got {0}")]
    CycleTooSmall(usize),
    #[error("cartesian product of an empty factor list")]
    NoFactors,
    #[error("edge list parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

const WORD: usize = 64;

/// A simple undirected graph on vertices `0..n`.
///
/// Adjacency is stored as `n` rows of `n` bits. Graphs are immutable once
/// built; every constructor goes through [`Graph::from_edges`].
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    label: Option<String>,
}

impl Graph {
    /// Builds a graph from an undirected edge list. Duplicate edges are
    /// merged; loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let words = n.div_ceil(WORD);
        let mut g = Graph {
            n,
            words,
            rows: vec![0; n * words],
            label: None,
        };
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            g.set(u, v);
            g.set(v, u);
        }
        g.debug_check();
        Ok(g)
    }

    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Self::from_edges(n, &[])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / WORD] |= 1 << (v % WORD);
    }

    fn debug_check(&self) {
        if cfg!(debug_assertions) {
            for u in 0..self.n {
                debug_assert!(!self.has_edge(u, u), "loop at {u}");
                for v in self.neighbors(u) {
                    debug_assert!(self.has_edge(v, u), "asymmetric {u}-{v}");
                }
            }
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / WORD] >> (v % WORD) & 1 == 1
    }

    /// Raw adjacency row of `u` as 64-bit words.
    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u).iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let t = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(w * WORD + t)
                }
            })
        })
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// Adjacency lists, handy for hot loops.
    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|u| self.neighbors(u).collect()).collect()
    }

    /// Number of common neighbours of `u` and `v`.
    pub fn common_neighbor_count(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn common_neighbors(&self, u: usize, v: usize) -> Vec<usize> {
        self.neighbors(u).filter(|&w| self.has_edge(v, w)).collect()
    }

    /// Subgraph induced on `vertices`; vertex `i` of the result is
    /// `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph, GraphError> {
        let mut edges = Vec::new();
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(vertices.len(), &edges)
    }

    /// Relabels vertex `v` as `map[v]`. `map` must be a bijection on `0..n`.
    pub fn relabel(&self, map: &[usize]) -> Graph {
        assert_eq!(map.len(), self.n);
        let edges: Vec<_> = self.edges().into_iter().map(|(u, v)| (map[u], map[v])).collect();
        let mut g = Graph::from_edges(self.n, &edges).expect("relabel of a valid graph");
        g.label = self.label.clone();
        g
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut edges = self.edges();
        edges.extend(other.edges().into_iter().map(|(u, v)| (u + shift, v + shift)));
        Graph::from_edges(self.n + other.n, &edges).expect("union of valid graphs")
    }

    pub fn is_connected(&self) -> bool {
        bfs(self, 0).iter().all(|&d| d != UNREACHABLE)
    }

    /// True iff `map` (image array) preserves adjacency and non-adjacency.
    pub fn is_automorphism(&self, map: &[usize]) -> bool {
        if map.len() != self.n {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &x in map {
            if x >= self.n || std::mem::replace(&mut seen[x], true) {
                return false;
            }
        }
        // A bijection preserving every edge also reflects them (finite graph,
        // equal edge counts).
        self.edges().iter().all(|&(u, v)| self.has_edge(map[u], map[v]))
    }

    /// Serializes to the edge-list interchange format.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    /// Parses the edge-list interchange format: a header line `n <N>`, then
    /// one `u v` pair per line. Lines starting with `#` and blank lines are
    /// ignored.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut n = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| GraphError::Parse {
                line: lineno,
                msg: msg.to_string(),
            };
            let mut toks = line.split_whitespace();
            match n {
                None => {
                    if toks.next() != Some("n") {
                        return Err(err("expected header `n <N>`"));
                    }
                    let count = toks
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| err("bad vertex count"))?;
                    if toks.next().is_some() {
                        return Err(err("trailing tokens after header"));
                    }
                    n = Some(count);
                }
                Some(_) => {
                    let mut next = || {
                        toks.next()
                            .and_then(|t| t.parse::<usize>().ok())
                            .ok_or_else(|| err("expected two vertex ids"))
                    };
                    let u = next()?;
                    let v = next()?;
                    if toks.next().is_some() {
                        return Err(err("trailing tokens after edge"));
                    }
                    edges.push((u, v));
                }
            }
        }
        let n = n.ok_or(GraphError::Parse {
            line: 0,
            msg: "missing header `n <N>`".into(),
        })?;
        Graph::from_edges(n, &edges)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("label", &self.label)
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Graph::parse_edge_list(s)
    }
}

pub fn complete_graph(n: usize) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Ok(Graph::from_edges(n, &edges)?.with_label(format!("K_{n}")))
}

/// Sides of a complete bipartite graph `K_{m,n}`: `X = 0..m`, `Y = m..m+n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BipartiteSpec {
    pub m: usize,
    pub n: usize,
}

impl BipartiteSpec {
    pub fn new(m: usize, n: usize) -> Self {
        BipartiteSpec { m, n }
    }

    pub fn order(&self) -> usize {
        self.m + self.n
    }

    pub fn x(&self) -> std::ops::Range<usize> {
        0..self.m
    }

    pub fn y(&self) -> std::ops::Range<usize> {
        self.m..self.m + self.n
    }

    pub fn in_x(&self, v: usize) -> bool {
        v < self.m
    }
}

pub fn complete_bipartite(spec: BipartiteSpec) -> Result<Graph, GraphError> {
    let edges: Vec<_> = spec
        .x()
        .flat_map(|x| spec.y().map(move |y| (x, y)))
        .collect();
    Ok(Graph::from_edges(spec.order(), &edges)?.with_label(format!("K_{{{},{}}}", spec.m, spec.n)))
}

pub fn path_graph(n: usize) -> Result<Graph, GraphError> {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Ok(Graph::from_edges(n, &edges)?.with_label(format!("P_{n}")))
}

pub fn cycle_graph(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::CycleTooSmall(n));
    }
    let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    Ok(Graph::from_edges(n, &edges)?.with_label(format!("C_{n}")))
}

/// Star with centre 0 and `n` leaves; identical to `K_{1,n}`.
pub fn star_graph(n: usize) -> Result<Graph, GraphError> {
    complete_bipartite(BipartiteSpec::new(1, n))
}

/// Mixed-radix addressing of product vertices, factor 0 most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductLayout {
    radices: Vec<usize>,
}

/// A vertex of a Cartesian product: one coordinate per factor.
pub type ProductVertex = Vec<usize>;

impl ProductLayout {
    pub fn new(radices: Vec<usize>) -> Self {
        assert!(radices.iter().all(|&r| r >= 1));
        ProductLayout { radices }
    }

    pub fn of(factors: &[Graph]) -> Self {
        Self::new(factors.iter().map(Graph::n).collect())
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn factor_count(&self) -> usize {
        self.radices.len()
    }

    pub fn size(&self) -> usize {
        self.radices.iter().product()
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.radices.len());
        coords
            .iter()
            .zip(&self.radices)
            .fold(0, |acc, (&c, &r)| {
                debug_assert!(c < r);
                acc * r + c
            })
    }

    pub fn decode(&self, mut index: usize) -> ProductVertex {
        let mut coords = vec![0; self.radices.len()];
        for (slot, &r) in coords.iter_mut().zip(&self.radices).rev() {
            *slot = index % r;
            index /= r;
        }
        coords
    }
}

/// Cartesian product `G_1 □ ⋯ □ G_r` under the [`ProductLayout`] encoding.
pub fn cartesian_product(factors: &[Graph]) -> Result<Graph, GraphError> {
    if factors.is_empty() {
        return Err(GraphError::NoFactors);
    }
    let layout = ProductLayout::of(factors);
    let mut edges = Vec::new();
    for idx in 0..layout.size() {
        let coords = layout.decode(idx);
        for (i, factor) in factors.iter().enumerate() {
            for w in factor.neighbors(coords[i]).filter(|&w| w > coords[i]) {
                let mut other = coords.clone();
                other[i] = w;
                edges.push((idx, layout.encode(&other)));
            }
        }
    }
    let label = factors
        .iter()
        .map(|g| g.label().unwrap_or("G").to_string())
        .collect::<Vec<_>>()
        .join("□");
    Ok(Graph::from_edges(layout.size(), &edges)?.with_label(label))
}

/// The `r`-cube as an `r`-fold product of `K_2`. Vertex `v` is the bit
/// string whose first coordinate is the most significant bit.
pub fn hypercube(r: usize) -> Result<Graph, GraphError> {
    if r == 0 {
        return Err(GraphError::NoFactors);
    }
    let k2 = complete_graph(2)?;
    Ok(cartesian_product(&vec![k2; r])?.with_label(format!("Q_{r}")))
}

/// Sentinel distance for vertex pairs in different components.
pub const UNREACHABLE: usize = usize::MAX;

fn bfs(g: &Graph, src: usize) -> Vec<usize> {
    let mut dist = vec![UNREACHABLE; g.n()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for v in g.neighbors(u) {
            if dist[v] == UNREACHABLE {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// All-pairs hop distances by repeated BFS.
pub fn distance_matrix(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|s| bfs(g, s)).collect()
}

/// Hop distance from every vertex to the nearest vertex of `sources`.
pub fn distances_from_set(g: &Graph, sources: &[usize]) -> Vec<usize> {
    let mut dist = vec![UNREACHABLE; g.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        for v in g.neighbors(u) {
            if dist[v] == UNREACHABLE {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Searches for an isomorphism `G → H`, returned as an image array.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    crate::autsearch::find_isomorphism(g, h)
}
