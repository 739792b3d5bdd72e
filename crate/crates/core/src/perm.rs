//! Permutations and permutation groups with a deterministic Schreier–Sims
//! stabilizer chain.
//!
//! Composition is `(p ∘ q)(i) = p(q(i))`: `q` is applied first. Every module
//! in the crate uses this convention.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("image array is not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("a group needs at least one generator")]
    NoGenerators,
}

/// A bijection on `0..N` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(PermError::NotBijection(n));
            }
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles on `0..degree`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if a >= degree || b >= degree {
                    return Err(PermError::NotBijection(degree));
                }
                images[a] = b;
            }
        }
        Self::from_images(images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Smallest point not fixed, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().position(|(i, &x)| i != x)
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.then_unchecked(other))
    }

    #[inline]
    fn then_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    pub fn pow(&self, e: usize) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        for _ in 0..e {
            acc = self.then_unchecked(&acc);
        }
        acc
    }

    /// Order of the cyclic group generated by `self`.
    pub fn order(&self) -> BigUint {
        let mut seen = vec![false; self.degree()];
        let mut acc = BigUint::one();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            let l = BigUint::from(len);
            let g = gcd(&acc, &l);
            acc = acc * &l / g;
        }
        acc
    }
}

fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = (a.clone(), b.clone());
    while b != BigUint::from(0u8) {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.images.serialize(s)
    }
}

impl std::str::FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let images = inner
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<usize>().map_err(|_| PermError::NotBijection(0)))
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::from_images(images)
    }
}

pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation, PermError> {
    p.compose(q)
}

pub fn inverse(p: &Permutation) -> Permutation {
    p.inverse()
}

/// One level of the stabilizer chain: the orbit of `base_point` under the
/// level's generators, with a coset representative for each orbit point.
#[derive(Clone, Debug)]
struct Level {
    base_point: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    // transversal[p] = Some(u) with u(base_point) = p
    transversal: Vec<Option<Permutation>>,
    inv_transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(base_point: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base_point] = Some(Permutation::identity(degree));
        let inv_transversal = transversal.clone();
        Level {
            base_point,
            gens: Vec::new(),
            orbit: vec![base_point],
            transversal,
            inv_transversal,
        }
    }

    fn add_generator(&mut self, g: Permutation) {
        self.gens.push(g);
        // extend the orbit; old points must be re-expanded under the new
        // generator, new points under all of them
        let mut i = 0;
        let old = self.orbit.len();
        while i < self.orbit.len() {
            let p = self.orbit[i];
            let gens: &[Permutation] = if i < old {
                std::slice::from_ref(self.gens.last().unwrap())
            } else {
                &self.gens
            };
            let mut fresh = Vec::new();
            for s in gens {
                let q = s.apply(p);
                if self.transversal[q].is_none() && !fresh.iter().any(|(x, _)| *x == q) {
                    let u = s.then_unchecked(self.transversal[p].as_ref().unwrap());
                    fresh.push((q, u));
                }
            }
            for (q, u) in fresh {
                self.inv_transversal[q] = Some(u.inverse());
                self.transversal[q] = Some(u);
                self.orbit.push(q);
            }
            i += 1;
        }
    }
}

/// A permutation group given by generators, with a base and strong
/// generating set computed by Schreier–Sims.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl PermGroup {
    /// The trivial group on `degree` points.
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    /// Strong generators, deduplicated, in level order.
    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Sizes of the basic orbits along the chain.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Sifts `g` through the chain starting at `from`. Returns the residue
    /// and the level at which sifting stopped (`levels.len()` if it passed
    /// every level).
    fn sift_from(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let beta = h.apply(level.base_point);
            match &level.inv_transversal[beta] {
                None => return (h, i),
                Some(u_inv) => h = u_inv.then_unchecked(&h),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool, PermError> {
        if p.degree() != self.degree {
            return Err(PermError::DegreeMismatch(p.degree(), self.degree));
        }
        let (h, _) = self.sift_from(p, 0);
        Ok(h.is_identity())
    }

    /// True iff every generator of `h` lies in `self`.
    pub fn is_subgroup_of(&self, g: &PermGroup) -> Result<bool, PermError> {
        if self.degree != g.degree {
            return Err(PermError::DegreeMismatch(self.degree, g.degree));
        }
        for p in &self.generators {
            if !g.contains(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every group element, as products of transversal elements. Intended
    /// for small groups only.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut acc = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(acc.len() * level.orbit.len());
            for &p in &level.orbit {
                let u = level.transversal[p].as_ref().unwrap();
                for h in &acc {
                    next.push(u.then_unchecked(h));
                }
            }
            acc = next;
        }
        acc
    }

    /// Element selected by one index per level (each taken modulo the orbit
    /// size). Gives uniform random elements from uniform indices.
    pub fn element_from_indices(&self, indices: &[usize]) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for (level, &i) in self.levels.iter().zip(indices) {
            let p = level.orbit[i % level.orbit.len()];
            g = g.then_unchecked(level.transversal[p].as_ref().unwrap());
        }
        g
    }

    fn add_level(&mut self, base_point: usize) {
        self.levels.push(Level::new(base_point, self.degree));
    }
}

/// Builds a base and strong generating set for `⟨generators⟩`.
///
/// Deterministic: base points are the first points moved by the elements
/// that force a new level, in the order they are encountered.
pub fn schreier_sims(generators: &[Permutation]) -> Result<PermGroup, PermError> {
    let first = generators.first().ok_or(PermError::NoGenerators)?;
    let degree = first.degree();
    for g in generators {
        if g.degree() != degree {
            return Err(PermError::DegreeMismatch(degree, g.degree()));
        }
    }
    let mut group = PermGroup::trivial(degree);
    group.generators = generators.to_vec();
    for g in generators {
        insert(&mut group, g.clone(), 0);
    }
    Ok(group)
}

/// Adds `g` (which fixes the base points of levels `< start`) to the chain and
/// closes the chain under Schreier generators.
fn insert(group: &mut PermGroup, g: Permutation, start: usize) {
    let (h, j) = group.sift_from(&g, start);
    if h.is_identity() {
        return;
    }
    if j == group.levels.len() {
        let b = h.first_moved().expect("non-identity residue");
        group.add_level(b);
    }
    // h fixes base points of levels start..j, so it joins the generators of
    // every level from `start` down to `j`; the deeper levels close first.
    let old_orbits: Vec<usize> = (start..=j).map(|l| group.levels[l].orbit.len()).collect();
    let old_gens: Vec<usize> = (start..=j).map(|l| group.levels[l].gens.len()).collect();
    for l in start..=j {
        group.levels[l].add_generator(h.clone());
    }
    for l in (start..=j).rev() {
        let (orbit0, gens0) = (old_orbits[l - start], old_gens[l - start]);
        close_level(group, l, orbit0, gens0);
    }
}

/// Sifts every Schreier generator at level `l` that involves a new orbit
/// point or a new generator, inserting non-trivial residues one level down.
fn close_level(group: &mut PermGroup, l: usize, old_orbit: usize, old_gens: usize) {
    let mut i = 0;
    while i < group.levels[l].orbit.len() {
        let p = group.levels[l].orbit[i];
        let mut s_idx = if i < old_orbit { old_gens } else { 0 };
        while s_idx < group.levels[l].gens.len() {
            let level = &group.levels[l];
            let s = &level.gens[s_idx];
            let u_p = level.transversal[p].as_ref().unwrap();
            let q = s.apply(p);
            let u_q_inv = level.inv_transversal[q].as_ref().unwrap();
            let schreier = u_q_inv.then_unchecked(&s.then_unchecked(u_p));
            if !schreier.is_identity() {
                insert(group, schreier, l + 1);
            }
            s_idx += 1;
        }
        i += 1;
    }
}
