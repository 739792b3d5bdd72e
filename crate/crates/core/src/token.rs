//! k-subset ranking and the k-token graph `F_k(G)`.
//!
//! Vertices of a token graph are k-subsets of `V(G)` indexed by their
//! colexicographic rank (the combinatorial number system):
//! `rank({a_0 < … < a_{k-1}}) = Σ C(a_i, i+1)`.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TokenError {
    #[error("token count {k} out of range 1..={max} for a graph on {n} vertices")]
    KOutOfRange { k: usize, n: usize, max: usize },
    #[error("token graphs need a base graph with at least 2 vertices")]
    BaseTooSmall,
    #[error("rank {rank} out of range for C({n},{k}) = {count}")]
    RankOutOfRange { rank: usize, n: usize, k: usize, count: usize },
    #[error("invalid token configuration {members:?} for n = {n}")]
    InvalidConfig { members: Vec<usize>, n: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Binomial coefficient; zero when `k > n`. Panics on overflow of `usize`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    usize::try_from(acc).expect("binomial overflow")
}

/// A k-subset of `0..n`, kept strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenConfig(Vec<usize>);

impl TokenConfig {
    /// Sorts and validates `members` against the base order `n`.
    pub fn new(mut members: Vec<usize>, n: usize) -> Result<Self, TokenError> {
        members.sort_unstable();
        let dup = members.windows(2).any(|w| w[0] == w[1]);
        if dup || members.last().is_some_and(|&m| m >= n) {
            return Err(TokenError::InvalidConfig { members, n });
        }
        Ok(TokenConfig(members))
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn rank(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &a)| binomial(a, i + 1))
            .sum()
    }

    /// `V ∖ A` within `0..n`.
    pub fn complement(&self, n: usize) -> TokenConfig {
        TokenConfig((0..n).filter(|v| !self.contains(*v)).collect())
    }

    /// Image `{f(v) : v ∈ A}` under a vertex map.
    pub fn map(&self, f: &[usize]) -> TokenConfig {
        let mut m: Vec<usize> = self.0.iter().map(|&v| f[v]).collect();
        m.sort_unstable();
        TokenConfig(m)
    }
}

impl fmt::Display for TokenConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Colex rank of a k-subset of `0..n`.
pub fn rank(config: &TokenConfig, n: usize) -> Result<usize, TokenError> {
    if config.members().last().is_some_and(|&m| m >= n) {
        return Err(TokenError::InvalidConfig {
            members: config.members().to_vec(),
            n,
        });
    }
    Ok(config.rank())
}

/// Inverse of [`rank`].
pub fn unrank(rank: usize, n: usize, k: usize) -> Result<TokenConfig, TokenError> {
    let count = binomial(n, k);
    if rank >= count {
        return Err(TokenError::RankOutOfRange { rank, n, k, count });
    }
    let mut members = vec![0; k];
    let mut r = rank;
    let mut top = n;
    for i in (1..=k).rev() {
        // largest c < top with C(c, i) <= r
        let mut c = top - 1;
        while binomial(c, i) > r {
            c -= 1;
        }
        members[i - 1] = c;
        r -= binomial(c, i);
        top = c;
    }
    Ok(TokenConfig(members))
}

/// All k-subsets of `0..n` in colex order (index = rank).
pub fn all_configs(n: usize, k: usize) -> Vec<TokenConfig> {
    let count = binomial(n, k);
    let mut out = Vec::with_capacity(count);
    if k == 0 {
        out.push(TokenConfig(Vec::new()));
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(TokenConfig(cur.clone()));
        // colex successor: bump the first element that can move up
        let mut i = 0;
        while i < k {
            let limit = if i + 1 < k { cur[i + 1] } else { n };
            if cur[i] + 1 < limit {
                cur[i] += 1;
                for (j, slot) in cur.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                break;
            }
            i += 1;
        }
        if i == k {
            break;
        }
    }
    debug_assert_eq!(out.len(), count);
    out
}

/// The k-token graph of a base graph with colex vertex indexing.
#[derive(Clone, Debug)]
pub struct TokenGraph {
    base: Graph,
    k: usize,
    graph: Graph,
    configs: Vec<TokenConfig>,
}

impl TokenGraph {
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.configs.len()
    }

    pub fn config(&self, rank: usize) -> &TokenConfig {
        &self.configs[rank]
    }

    pub fn configs(&self) -> &[TokenConfig] {
        &self.configs
    }

    pub fn rank_of(&self, config: &TokenConfig) -> usize {
        config.rank()
    }

    /// Sidecar listing `rank: {v_0,…,v_{k-1}}`, one line per vertex.
    pub fn rank_map_text(&self) -> String {
        let mut s = String::new();
        for (r, c) in self.configs.iter().enumerate() {
            s.push_str(&format!("{r}: {c}\n"));
        }
        s
    }
}

/// Builds `F_k(G)`: `A ~ B` iff `A △ B` is an edge of `G`.
pub fn token_graph(base: &Graph, k: usize) -> Result<TokenGraph, TokenError> {
    let n = base.n();
    if n < 2 {
        return Err(TokenError::BaseTooSmall);
    }
    if k == 0 || k >= n {
        return Err(TokenError::KOutOfRange { k, n, max: n - 1 });
    }
    let configs = all_configs(n, k);
    let base_edges = base.edges();
    let mut edges = Vec::with_capacity(configs.len() * base_edges.len() / 2);
    let mut inside = vec![false; n];
    for (r, a) in configs.iter().enumerate() {
        for &v in a.members() {
            inside[v] = true;
        }
        for &(u, v) in &base_edges {
            let (from, to) = match (inside[u], inside[v]) {
                (true, false) => (u, v),
                (false, true) => (v, u),
                _ => continue,
            };
            // slide the token on `from` to `to`
            let b: Vec<usize> = {
                let mut m: Vec<usize> = a.members().iter().copied().filter(|&x| x != from).collect();
                let pos = m.partition_point(|&x| x < to);
                m.insert(pos, to);
                m
            };
            let rb = TokenConfig(b).rank();
            if r < rb {
                edges.push((r, rb));
            }
        }
        for &v in a.members() {
            inside[v] = false;
        }
    }
    let graph = Graph::from_edges(configs.len(), &edges)?.with_label(format!(
        "F_{k}({})",
        base.label().unwrap_or("G")
    ));
    Ok(TokenGraph {
        base: base.clone(),
        k,
        graph,
        configs,
    })
}

/// Rank-level complement map `F_k → F_{n-k}`, `A ↦ V ∖ A`.
pub fn complement_map(n: usize, k: usize) -> Result<Vec<usize>, TokenError> {
    if k == 0 || k >= n {
        return Err(TokenError::KOutOfRange {
            k,
            n,
            max: n.saturating_sub(1),
        });
    }
    Ok(all_configs(n, k)
        .iter()
        .map(|a| a.complement(n).rank())
        .collect())
}
