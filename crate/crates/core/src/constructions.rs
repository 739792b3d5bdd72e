//! Explicit automorphisms of token graphs and closed-form group orders.
//!
//! All permutations act on colex ranks of token configurations. Bipartite
//! constructions use `K_{m,n}` with `X = 0..m` and `Y = m..m+n`; product
//! constructions use the [`ProductLayout`] encoding with factor indices
//! `1..=r` counted from the most significant coordinate.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::autsearch::automorphism_group;
use crate::factorization::{is_prime, FactorError};
use crate::graph::{cartesian_product, complete_bipartite, hypercube, BipartiteSpec, Graph, GraphError, ProductLayout};
use crate::perm::{PermError, Permutation};
use crate::token::{all_configs, binomial, token_graph, TokenConfig, TokenError, TokenGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("map is not an automorphism of the base graph")]
    NotAutomorphism,
    #[error("constructed permutation `{0}` is not an automorphism of the token graph")]
    Uncertified(String),
    #[error("need 1 <= m <= n, got m = {m}, n = {n}")]
    BadBipartite { m: usize, n: usize },
    #[error("k = {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("complement automorphism needs 2k = |V|, got k = {k}, |V| = {n}")]
    NotHalf { k: usize, n: usize },
    #[error("construction needs m = 2, got m = {0}")]
    NeedsTwoSided(usize),
    #[error("malformed alpha family: {0}")]
    MalformedAlpha(String),
    #[error("permutation moves a vertex of X")]
    MovesX,
    #[error("permutation of degree {got} where {expected} was expected")]
    Degree { got: usize, expected: usize },
    #[error("subset element {0} outside 0..n-1")]
    SubsetOutOfRange(usize),
    #[error("cube constructions need r >= 3, got {0}")]
    CubeTooSmall(usize),
    #[error("slice index {i} out of range 1..={r}")]
    SliceOutOfRange { i: usize, r: usize },
    #[error("product constructions need at least two factors, got {0}")]
    TooFewFactors(usize),
    #[error("factor {0} is not prime")]
    NotPrime(usize),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Token(#[from] TokenError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

type Result<T> = std::result::Result<T, ConstructionError>;

/// A family `α` indexing the elementary swaps, in one of two contexts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "context", rename_all = "snake_case")]
pub enum AlphaFamily {
    /// Members are `(k-1)`-subsets of `Y = {2, …, n+1}` in `K_{2,n}`.
    Bipartite { n: usize, k: usize, members: BTreeSet<Vec<usize>> },
    /// Members are factor indices in `1..r`.
    Product { r: usize, members: BTreeSet<usize> },
}

impl AlphaFamily {
    pub fn bipartite(n: usize, k: usize, members: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        if k == 0 || k > n + 1 {
            return Err(ConstructionError::KOutOfRange { k, max: n + 1 });
        }
        let mut set = BTreeSet::new();
        for mut s in members {
            s.sort_unstable();
            let distinct = s.windows(2).all(|w| w[0] < w[1]);
            if s.len() != k - 1 || !distinct || s.iter().any(|&y| !(2..n + 2).contains(&y)) {
                return Err(ConstructionError::MalformedAlpha(format!(
                    "{s:?} is not a {}-subset of Y = 2..{}",
                    k - 1,
                    n + 1
                )));
            }
            set.insert(s);
        }
        Ok(AlphaFamily::Bipartite { n, k, members: set })
    }

    pub fn product(r: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        if r < 2 {
            return Err(ConstructionError::TooFewFactors(r));
        }
        let set: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&i| i == 0 || i >= r) {
            return Err(ConstructionError::MalformedAlpha(format!(
                "factor index {bad} outside 1..{}",
                r - 1
            )));
        }
        Ok(AlphaFamily::Product { r, members: set })
    }

    pub fn len(&self) -> usize {
        match self {
            AlphaFamily::Bipartite { members, .. } => members.len(),
            AlphaFamily::Product { members, .. } => members.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `α △ β`; `None` if the contexts differ.
    pub fn symmetric_difference(&self, other: &AlphaFamily) -> Option<AlphaFamily> {
        match (self, other) {
            (
                AlphaFamily::Bipartite { n, k, members: a },
                AlphaFamily::Bipartite { n: n2, k: k2, members: b },
            ) if n == n2 && k == k2 => Some(AlphaFamily::Bipartite {
                n: *n,
                k: *k,
                members: a.symmetric_difference(b).cloned().collect(),
            }),
            (AlphaFamily::Product { r, members: a }, AlphaFamily::Product { r: r2, members: b }) if r == r2 => {
                Some(AlphaFamily::Product {
                    r: *r,
                    members: a.symmetric_difference(b).copied().collect(),
                })
            }
            _ => None,
        }
    }

    /// `{Y ∖ S : S ∈ α}`; only a bipartite family with `k - 1 = n - (k - 1)`
    /// maps to a family of the same shape.
    pub fn complemented_in_y(&self) -> Result<AlphaFamily> {
        let AlphaFamily::Bipartite { n, k, members } = self else {
            return Err(ConstructionError::MalformedAlpha("complement needs a bipartite family".into()));
        };
        AlphaFamily::bipartite(
            *n,
            *k,
            members.iter().map(|s| (2..n + 2).filter(|y| !s.contains(y)).collect()),
        )
    }

    /// `π(α)` for a permutation of `V(K_{2,n})` fixing `X`.
    pub fn mapped(&self, pi: &Permutation) -> Result<AlphaFamily> {
        let AlphaFamily::Bipartite { n, k, members } = self else {
            return Err(ConstructionError::MalformedAlpha("mapping needs a bipartite family".into()));
        };
        check_fixes_x(pi, *n)?;
        AlphaFamily::bipartite(*n, *k, members.iter().map(|s| s.iter().map(|&y| pi.apply(y)).collect()))
    }
}

impl fmt::Display for AlphaFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaFamily::Bipartite { members, .. } => {
                let parts: Vec<String> = members
                    .iter()
                    .map(|s| format!("{{{}}}", s.iter().map(|y| y.to_string()).collect::<Vec<_>>().join(",")))
                    .collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            AlphaFamily::Product { members, .. } => {
                write!(f, "{{{}}}", members.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StructureTag {
    WreathK2n,
    WreathK2nTimesZ2,
    AutKmn,
    AutKmnTimesZ2,
    Z2PowSemidirect,
    Cube,
    /// `F_2(K_{2,2}) ≅ K_{2,4}`.
    Z2TimesS4,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum OrderParams {
    Bipartite { m: usize, n: usize, k: usize },
    Cube { r: usize },
    Product { factor_orders: Vec<usize> },
}

/// A closed-form order prediction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedAut {
    #[serde(serialize_with = "serialize_decimal")]
    pub order: BigUint,
    pub structure_tag: StructureTag,
    pub parameters: OrderParams,
    /// Set when the value comes from reducing to `F_1(G) ≅ G` rather than
    /// from the bipartite classification itself.
    pub extension: bool,
    pub note: Option<String>,
}

pub(crate) fn serialize_decimal<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// An automorphism with a human-readable provenance label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub label: String,
    pub perm: Permutation,
}

fn check_bipartite(m: usize, n: usize, k: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(ConstructionError::BadBipartite { m, n });
    }
    if k == 0 || k >= m + n {
        return Err(ConstructionError::KOutOfRange { k, max: m + n - 1 });
    }
    Ok(())
}

fn check_fixes_x(pi: &Permutation, n: usize) -> Result<()> {
    if pi.degree() != n + 2 {
        return Err(ConstructionError::Degree {
            got: pi.degree(),
            expected: n + 2,
        });
    }
    if pi.apply(0) != 0 || pi.apply(1) != 1 {
        return Err(ConstructionError::MovesX);
    }
    Ok(())
}

/// Permutation of ranks induced by a rank-to-configuration rule.
fn on_configs(n: usize, k: usize, f: impl Fn(&TokenConfig) -> TokenConfig) -> Permutation {
    let images = all_configs(n, k).iter().map(|a| f(a).rank()).collect();
    Permutation::from_images(images).expect("configuration map is a bijection")
}

fn lift_unchecked(phi: &Permutation, n: usize, k: usize) -> Permutation {
    on_configs(n, k, |a| a.map(phi.images()))
}

/// `ι(φ)`: the action of a base automorphism on k-subsets.
pub fn iota_lift(phi: &Permutation, tg: &TokenGraph) -> Result<Permutation> {
    if phi.degree() != tg.base().n() || !tg.base().is_automorphism(phi.images()) {
        return Err(ConstructionError::NotAutomorphism);
    }
    Ok(lift_unchecked(phi, tg.base().n(), tg.k()))
}

/// `A ↦ V ∖ A`, defined when `2k = |V|`.
pub fn complement_automorphism(tg: &TokenGraph) -> Result<Permutation> {
    let n = tg.base().n();
    if 2 * tg.k() != n {
        return Err(ConstructionError::NotHalf { k: tg.k(), n });
    }
    Ok(on_configs(n, tg.k(), |a| a.complement(n)))
}

/// `φ_α` on `F_k(K_{2,n})`: a vertex with one token in `X` whose `Y`-part
/// lies in `α` has its `X`-token moved to the other side vertex.
pub fn phi_alpha_bipartite(spec: BipartiteSpec, k: usize, alpha: &AlphaFamily) -> Result<Permutation> {
    if spec.m != 2 {
        return Err(ConstructionError::NeedsTwoSided(spec.m));
    }
    check_bipartite(spec.m, spec.n, k)?;
    let AlphaFamily::Bipartite { n, k: ak, members } = alpha else {
        return Err(ConstructionError::MalformedAlpha("expected a bipartite family".into()));
    };
    if *n != spec.n || *ak != k {
        return Err(ConstructionError::MalformedAlpha(format!(
            "family is for (n,k) = ({n},{ak}), graph is ({},{k})",
            spec.n
        )));
    }
    let total = spec.order();
    Ok(on_configs(total, k, |a| {
        let xs: Vec<usize> = a.members().iter().copied().filter(|&v| v < 2).collect();
        if xs.len() != 1 {
            return a.clone();
        }
        let ys: Vec<usize> = a.members().iter().copied().filter(|&v| v >= 2).collect();
        if !members.contains(&ys) {
            return a.clone();
        }
        let swapped: Vec<usize> = a.members().iter().map(|&v| if v < 2 { 1 - v } else { v }).collect();
        TokenConfig::new(swapped, total).expect("swap stays in range")
    }))
}

/// `ψ_π = ι(π)` for a permutation of `V(K_{2,n})` that fixes `X`.
pub fn psi_pi(spec: BipartiteSpec, k: usize, pi: &Permutation) -> Result<Permutation> {
    if spec.m != 2 {
        return Err(ConstructionError::NeedsTwoSided(spec.m));
    }
    check_bipartite(spec.m, spec.n, k)?;
    check_fixes_x(pi, spec.n)?;
    Ok(lift_unchecked(pi, spec.order(), k))
}

/// Fails unless every generator is an automorphism of `g`.
fn certify(g: &Graph, gens: &[Generator]) -> Result<()> {
    for gen in gens {
        if !g.is_automorphism(gen.perm.images()) {
            return Err(ConstructionError::Uncertified(gen.label.clone()));
        }
    }
    Ok(())
}

fn singleton_phis(n: usize, k: usize) -> Result<Vec<Generator>> {
    let spec = BipartiteSpec::new(2, n);
    let ys: Vec<usize> = spec.y().collect();
    let mut out = Vec::new();
    for s in subsets(&ys, k - 1) {
        let alpha = AlphaFamily::bipartite(n, k, [s])?;
        out.push(Generator {
            label: format!("phi_alpha {alpha}"),
            perm: phi_alpha_bipartite(spec, k, &alpha)?,
        });
    }
    Ok(out)
}

fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    all_configs(items.len(), size)
        .into_iter()
        .map(|c| c.members().iter().map(|&i| items[i]).collect())
        .collect()
}

fn iota_of_base_group(tg: &TokenGraph) -> Result<Vec<Generator>> {
    let aut = automorphism_group(tg.base());
    aut.generators()
        .iter()
        .map(|g| {
            Ok(Generator {
                label: format!("iota {g}"),
                perm: iota_lift(g, tg)?,
            })
        })
        .collect()
}

/// Generators of the predicted automorphism group of `F_k(K_{m,n})`, each
/// certified against the token graph. Returns the token graph as well.
pub fn bipartite_generator_set(m: usize, n: usize, k: usize) -> Result<(TokenGraph, Vec<Generator>)> {
    check_bipartite(m, n, k)?;
    let spec = BipartiteSpec::new(m, n);
    let tg = token_graph(&complete_bipartite(spec)?, k)?;
    let mut gens = Vec::new();
    if m == 2 && n > 2 {
        gens.extend(singleton_phis(n, k)?);
        let mut transposition: Vec<usize> = (0..n + 2).collect();
        transposition.swap(2, 3);
        let cycle: Vec<usize> = (0..n + 2).map(|v| if v < 2 { v } else { 2 + (v - 1) % n }).collect();
        for (name, images) in [("transposition", transposition), ("n-cycle", cycle)] {
            let pi = Permutation::from_images(images)?;
            gens.push(Generator {
                label: format!("psi_pi {name} {pi}"),
                perm: psi_pi(spec, k, &pi)?,
            });
        }
    } else {
        if (m, n, k) == (2, 2, 2) {
            gens.extend(singleton_phis(2, 2)?);
        }
        gens.extend(iota_of_base_group(&tg)?);
    }
    if 2 * k == m + n {
        gens.push(Generator {
            label: "complement".into(),
            perm: complement_automorphism(&tg)?,
        });
    }
    certify(tg.graph(), &gens)?;
    Ok((tg, gens))
}

pub fn bipartite_generators(m: usize, n: usize, k: usize) -> Result<Vec<Permutation>> {
    Ok(bipartite_generator_set(m, n, k)?.1.into_iter().map(|g| g.perm).collect())
}

/// Closed-form `|Aut(F_k(K_{m,n}))|`.
pub fn predicted_order(m: usize, n: usize, k: usize) -> Result<PredictedAut> {
    check_bipartite(m, n, k)?;
    let parameters = OrderParams::Bipartite { m, n, k };
    let endpoint = k == 1 || k == m + n - 1;
    let middle = 2 * k == m + n;
    let aut_kmn = factorial(m) * factorial(n) * if m == n { 2u32 } else { 1 };
    let (order, tag, note) = if m + n == 2 {
        (BigUint::from(2u32), StructureTag::AutKmn, Some("F_1(K_{1,1}) = K_2".to_string()))
    } else if (m, n, k) == (2, 2, 2) {
        (BigUint::from(48u32), StructureTag::Z2TimesS4, Some("F_2(K_{2,2}) is K_{2,4}".to_string()))
    } else if endpoint {
        (
            aut_kmn,
            StructureTag::AutKmn,
            Some("endpoint k: F_1(G) = G and F_{|V|-1}(G) = F_1(G) by complement".to_string()),
        )
    } else if m == 2 {
        let base = pow2(binomial(n, k - 1)) * factorial(n);
        if middle {
            (base * 2u32, StructureTag::WreathK2nTimesZ2, None)
        } else {
            (base, StructureTag::WreathK2n, None)
        }
    } else if middle {
        (aut_kmn * 2u32, StructureTag::AutKmnTimesZ2, None)
    } else {
        (aut_kmn, StructureTag::AutKmn, None)
    };
    Ok(PredictedAut {
        order,
        structure_tag: tag,
        parameters,
        extension: endpoint,
        note,
    })
}

/// Action of `π ∈ S_n` on subsets of the first `n-1` points (0-based; the
/// last point `n-1` is the distinguished one): the preimage `π⁻¹(X)`,
/// replaced by its complement in `0..n` when it contains `n-1`.
pub fn action_phi(pi: &Permutation, x: &BTreeSet<usize>, n: usize) -> Result<BTreeSet<usize>> {
    if pi.degree() != n {
        return Err(ConstructionError::Degree {
            got: pi.degree(),
            expected: n,
        });
    }
    if let Some(&bad) = x.iter().find(|&&v| v + 1 >= n) {
        return Err(ConstructionError::SubsetOutOfRange(bad));
    }
    let inv = pi.inverse();
    let pre: BTreeSet<usize> = x.iter().map(|&v| inv.apply(v)).collect();
    if pre.contains(&(n - 1)) {
        Ok((0..n).filter(|v| !pre.contains(v)).collect())
    } else {
        Ok(pre)
    }
}

/// `φ_α` on `F_2(G_1 □ ⋯ □ G_r)`: the coordinates indexed by `α` are
/// exchanged between the two tokens.
pub fn phi_alpha_product(factors: &[Graph], alpha: &AlphaFamily) -> Result<Permutation> {
    let r = factors.len();
    let AlphaFamily::Product { r: ar, members } = alpha else {
        return Err(ConstructionError::MalformedAlpha("expected a product family".into()));
    };
    if *ar != r {
        return Err(ConstructionError::MalformedAlpha(format!(
            "family is for {ar} factors, product has {r}"
        )));
    }
    let idx: Vec<usize> = members.iter().map(|i| i - 1).collect();
    Ok(swap_coordinates(&ProductLayout::of(factors), &idx))
}

fn swap_coordinates(layout: &ProductLayout, idx: &[usize]) -> Permutation {
    let total = layout.size();
    on_configs(total, 2, |a| {
        let mut x = layout.decode(a.members()[0]);
        let mut y = layout.decode(a.members()[1]);
        for &i in idx {
            std::mem::swap(&mut x[i], &mut y[i]);
        }
        TokenConfig::new(vec![layout.encode(&x), layout.encode(&y)], total).expect("distinct endpoints")
    })
}

/// Product swaps for singleton `α` plus ι-lifts of `Aut(G)`, certified on
/// `F_2(G)`. Every factor must be prime.
pub fn product_subgroup_generator_set(factors: &[Graph]) -> Result<(TokenGraph, Vec<Generator>)> {
    let r = factors.len();
    if r < 2 {
        return Err(ConstructionError::TooFewFactors(r));
    }
    for (i, f) in factors.iter().enumerate() {
        if !is_prime(f)? {
            return Err(ConstructionError::NotPrime(i + 1));
        }
    }
    let g = cartesian_product(factors)?;
    let tg = token_graph(&g, 2)?;
    let mut gens = Vec::new();
    for i in 1..r {
        let alpha = AlphaFamily::product(r, [i])?;
        gens.push(Generator {
            label: format!("phi_alpha {alpha}"),
            perm: phi_alpha_product(factors, &alpha)?,
        });
    }
    gens.extend(iota_of_base_group(&tg)?);
    certify(tg.graph(), &gens)?;
    Ok((tg, gens))
}

pub fn product_subgroup_generators(factors: &[Graph]) -> Result<Vec<Permutation>> {
    Ok(product_subgroup_generator_set(factors)?.1.into_iter().map(|g| g.perm).collect())
}

/// `2^{r-1} · 2^r · r!` for `r >= 3`.
pub fn predicted_order_cube(r: usize) -> Result<PredictedAut> {
    if r < 3 {
        return Err(ConstructionError::CubeTooSmall(r));
    }
    Ok(PredictedAut {
        order: pow2(r - 1) * pow2(r) * factorial(r),
        structure_tag: StructureTag::Cube,
        parameters: OrderParams::Cube { r },
        extension: false,
        note: None,
    })
}

/// `2^{r-1} · |Aut(G)|` for a product of `r` prime factors.
pub fn predicted_order_product(factors: &[Graph], aut_order: &BigUint) -> PredictedAut {
    let r = factors.len();
    PredictedAut {
        order: pow2(r.saturating_sub(1)) * aut_order,
        structure_tag: StructureTag::Z2PowSemidirect,
        parameters: OrderParams::Product {
            factor_orders: factors.iter().map(Graph::n).collect(),
        },
        extension: false,
        note: Some("lower bound".into()),
    }
}

/// `H_i = {A : |A ∩ X| = i}` for `i = 0..=min(m, k)`, as sorted rank lists.
pub fn h_partition(spec: BipartiteSpec, k: usize) -> Result<Vec<Vec<usize>>> {
    check_bipartite(spec.m, spec.n, k)?;
    let mut parts = vec![Vec::new(); spec.m.min(k) + 1];
    for (rank, a) in all_configs(spec.order(), k).iter().enumerate() {
        let i = a.members().iter().filter(|&&v| spec.in_x(v)).count();
        parts[i].push(rank);
    }
    Ok(parts)
}

/// Ranks of `F_2(Q_r)` split by coordinate `i`: both tokens 0, both 1, or
/// different.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubeSlices {
    pub zero: Vec<usize>,
    pub one: Vec<usize>,
    pub delta: Vec<usize>,
}

pub fn cube_slices(r: usize, i: usize) -> Result<CubeSlices> {
    if r == 0 || i == 0 || i > r {
        return Err(ConstructionError::SliceOutOfRange { i, r });
    }
    let bit = r - i;
    let mut s = CubeSlices {
        zero: Vec::new(),
        one: Vec::new(),
        delta: Vec::new(),
    };
    for (rank, a) in all_configs(1 << r, 2).iter().enumerate() {
        let (x, y) = (a.members()[0] >> bit & 1, a.members()[1] >> bit & 1);
        match (x, y) {
            (0, 0) => s.zero.push(rank),
            (1, 1) => s.one.push(rank),
            _ => s.delta.push(rank),
        }
    }
    Ok(s)
}

/// `F_2(Q_r)` together with its cube base, for slice checks.
pub fn cube_token_graph(r: usize) -> Result<TokenGraph> {
    Ok(token_graph(&hypercube(r)?, 2)?)
}
