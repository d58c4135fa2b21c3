//! Permutation groups with a deterministic Schreier–Sims stabilizer chain.
//!
//! Permutations compose left to right: `a.then(&b)` applies `a` first. The
//! chain is built lazily on first use; base points are chosen as the
//! smallest point moved by the generator that needs a new level, so the
//! chain depends only on the generator list.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("image array is not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("domain mismatch: expected degree {expected}, got {got}")]
    DomainMismatch { expected: usize, got: usize },
}

/// A permutation of `0..n`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<u32>);

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        let mut seen = vec![false; self.0.len()];
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.0[x] as usize;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(PermError::NotBijection(n));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Perm(images)
    }

    /// Builds a permutation of `0..n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x as usize >= n {
                    return Err(PermError::NotBijection(n));
                }
                images[x as usize] = cycle[(i + 1) % cycle.len()];
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    pub fn smallest_moved_point(&self) -> Option<u32> {
        self.0.iter().enumerate().find(|(i, &x)| *i as u32 != x).map(|(i, _)| i as u32)
    }

    /// Parity of the permutation (true when odd).
    pub fn is_odd(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        let mut transpositions = 0;
        for start in 0..self.0.len() {
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 1
    }

    /// Restriction to a subset of points that the permutation maps onto
    /// itself, re-indexed by position in `points`.
    pub fn restrict(&self, points: &[u32]) -> Option<Perm> {
        let mut pos = vec![u32::MAX; self.0.len()];
        for (i, &p) in points.iter().enumerate() {
            pos[p as usize] = i as u32;
        }
        let images: Option<Vec<u32>> = points
            .iter()
            .map(|&p| {
                let img = pos[self.0[p as usize] as usize];
                (img != u32::MAX).then_some(img)
            })
            .collect();
        images.map(Perm)
    }
}

const NONE: u32 = u32::MAX;

#[derive(Clone)]
struct Level {
    base: u32,
    gens: Vec<Perm>,
    orbit: Vec<u32>,
    /// per point: index into `reps`, or NONE
    slot: Vec<u32>,
    /// `reps[k]` maps `base` to `orbit[k]`
    reps: Vec<Perm>,
    /// per orbit entry: number of generators whose Schreier generator has been sifted
    checked: Vec<usize>,
}

impl Level {
    fn new(degree: usize, base: u32) -> Self {
        let mut slot = vec![NONE; degree];
        slot[base as usize] = 0;
        Level { base, gens: Vec::new(), orbit: vec![base], slot, reps: vec![Perm::identity(degree)], checked: vec![0] }
    }

    fn rep(&self, point: u32) -> Option<&Perm> {
        match self.slot[point as usize] {
            NONE => None,
            k => Some(&self.reps[k as usize]),
        }
    }

    /// Adds a generator and extends the orbit; existing representatives are kept.
    fn add_gen(&mut self, g: Perm) {
        self.gens.push(g);
        let mut queue: VecDeque<usize> = (0..self.orbit.len()).collect();
        while let Some(k) = queue.pop_front() {
            let beta = self.orbit[k];
            for gi in 0..self.gens.len() {
                let img = self.gens[gi].apply(beta);
                if self.slot[img as usize] == NONE {
                    let rep = self.reps[k].then(&self.gens[gi]);
                    self.slot[img as usize] = self.orbit.len() as u32;
                    self.orbit.push(img);
                    self.reps.push(rep);
                    self.checked.push(0);
                    queue.push_back(self.orbit.len() - 1);
                }
            }
        }
    }
}

/// Base and strong generating set.
#[derive(Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    fn build(degree: usize, gens: &[Perm], prefix: &[u32]) -> StabChain {
        let mut chain = StabChain { degree, levels: prefix.iter().map(|&b| Level::new(degree, b)).collect() };
        let gens: Vec<&Perm> = gens.iter().filter(|g| !g.is_identity()).collect();
        for g in &gens {
            if chain.levels.iter().all(|l| g.apply(l.base) == l.base) {
                let b = g.smallest_moved_point().unwrap();
                chain.levels.push(Level::new(degree, b));
            }
        }
        for g in &gens {
            for i in 0..chain.levels.len() {
                chain.levels[i].add_gen((*g).clone());
                if g.apply(chain.levels[i].base) != chain.levels[i].base {
                    break;
                }
            }
        }
        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            match chain.failing_schreier_generator(i as usize) {
                Some((h, j)) => {
                    if j == chain.levels.len() {
                        let b = h.smallest_moved_point().unwrap();
                        chain.levels.push(Level::new(degree, b));
                    }
                    for l in (i as usize + 1)..=j {
                        chain.levels[l].add_gen(h.clone());
                    }
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
        chain
    }

    /// Finds a Schreier generator of level `i` that does not sift through the
    /// levels below, returning the residue and the level it dropped out at.
    fn failing_schreier_generator(&mut self, i: usize) -> Option<(Perm, usize)> {
        let mut k = 0;
        while k < self.levels[i].orbit.len() {
            while self.levels[i].checked[k] < self.levels[i].gens.len() {
                let level = &self.levels[i];
                let s = &level.gens[level.checked[k]];
                let beta = level.orbit[k];
                let u_beta = &level.reps[k];
                let img = s.apply(beta);
                let u_img = level.rep(img).expect("orbit closed under generators");
                let schreier = u_beta.then(s).then(&u_img.inverse());
                self.levels[i].checked[k] += 1;
                if schreier.is_identity() {
                    continue;
                }
                let (residue, j) = self.sift_from(schreier, i + 1);
                if j < self.levels.len() || !residue.is_identity() {
                    return Some((residue, j));
                }
            }
            k += 1;
        }
        None
    }

    /// Sifts `g` starting at `level`; returns the residue and the level where
    /// sifting stopped (`levels.len()` when it went all the way through).
    fn sift_from(&self, mut g: Perm, level: usize) -> (Perm, usize) {
        for (j, l) in self.levels.iter().enumerate().skip(level) {
            let beta = g.apply(l.base);
            match l.rep(beta) {
                None => return (g, j),
                Some(u) => g = g.then(&u.inverse()),
            }
        }
        (g, self.levels.len())
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, j) = self.sift_from(g.clone(), 0);
        j == self.levels.len() && residue.is_identity()
    }

    /// Strong generators of the pointwise stabilizer of the first `k` base points.
    pub fn strong_generators(&self, k: usize) -> Vec<Perm> {
        self.levels.get(k).map(|l| l.gens.clone()).unwrap_or_default()
    }

    /// Orbit of the `k`-th base point under the stabilizer of the earlier ones.
    pub fn basic_orbit(&self, k: usize) -> &[u32] {
        &self.levels[k].orbit
    }
}

/// A permutation group given by generators.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: OnceLock<StabChain>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup").field("degree", &self.degree).field("generators", &self.generators.len()).finish()
    }
}

/// Serialized form of a permutation group.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupFile {
    pub domain_size: usize,
    pub generators: Vec<Vec<u32>>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DomainMismatch { expected: degree, got: g.degree() });
            }
        }
        Ok(PermGroup { degree, generators, chain: OnceLock::new() })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), chain: OnceLock::new() }
    }

    /// Builds the group with a chain whose base starts with `prefix`.
    pub fn with_base_prefix(degree: usize, generators: Vec<Perm>, prefix: &[u32]) -> Result<Self, PermError> {
        let group = PermGroup::new(degree, generators)?;
        let chain = StabChain::build(degree, &group.generators, prefix);
        let _ = group.chain.set(chain);
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| StabChain::build(self.degree, &self.generators, &[]))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Perm::is_identity)
    }

    pub fn contains(&self, g: &Perm) -> Result<bool, PermError> {
        if g.degree() != self.degree {
            return Err(PermError::DomainMismatch { expected: self.degree, got: g.degree() });
        }
        Ok(self.chain().contains(g))
    }

    /// Orbit of `x`, sorted.
    pub fn orbit(&self, x: u32) -> Vec<u32> {
        let mut seen = vec![false; self.degree];
        seen[x as usize] = true;
        let mut out = vec![x];
        let mut k = 0;
        while k < out.len() {
            let y = out[k];
            for g in &self.generators {
                let z = g.apply(y);
                if !seen[z as usize] {
                    seen[z as usize] = true;
                    out.push(z);
                }
            }
            k += 1;
        }
        out.sort_unstable();
        out
    }

    /// All orbits, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree as u32 {
            if !seen[x as usize] {
                let orb = self.orbit(x);
                for &y in &orb {
                    seen[y as usize] = true;
                }
                out.push(orb);
            }
        }
        out
    }

    /// Pointwise stabilizer of `points`.
    pub fn pointwise_stabilizer(&self, points: &[u32]) -> PermGroup {
        let chain = StabChain::build(self.degree, &self.generators, points);
        let gens = chain.strong_generators(points.len());
        let group = PermGroup { degree: self.degree, generators: gens, chain: OnceLock::new() };
        let sub = StabChain { degree: self.degree, levels: chain.levels[points.len()..].to_vec() };
        let _ = group.chain.set(sub);
        group
    }

    pub fn stabilizer(&self, point: u32) -> PermGroup {
        self.pointwise_stabilizer(&[point])
    }

    /// Group generated by the generators of `self` and `other`.
    pub fn join(&self, other: &PermGroup) -> Result<PermGroup, PermError> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        PermGroup::new(self.degree, gens)
    }

    /// Every element, in chain order. Only sensible for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let chain = self.chain();
        let mut out = vec![Perm::identity(self.degree)];
        for level in chain.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.reps.len());
            for g in &out {
                for u in &level.reps {
                    next.push(g.then(u));
                }
            }
            out = next;
        }
        out
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            domain_size: self.degree,
            generators: self.generators.iter().map(|g| g.images().to_vec()).collect(),
        }
    }

    pub fn from_file(file: &GroupFile) -> Result<PermGroup, PermError> {
        let gens = file.generators.iter().map(|g| Perm::from_images(g.clone())).collect::<Result<Vec<_>, _>>()?;
        PermGroup::new(file.domain_size, gens)
    }
}

/// Outcome of checking `G = N ⋊ H` from generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitVerdict {
    pub n_in_g: bool,
    pub h_in_g: bool,
    pub n_normal: bool,
    pub trivial_intersection: bool,
    pub orders_multiply: bool,
    pub split: bool,
}

impl SplitVerdict {
    /// Name of the first failing clause, if any.
    pub fn failed_clause(&self) -> Option<&'static str> {
        if !self.n_in_g {
            Some("N is not contained in G")
        } else if !self.h_in_g {
            Some("H is not contained in G")
        } else if !self.n_normal {
            Some("N is not normal in G")
        } else if !self.trivial_intersection {
            Some("H meets N nontrivially")
        } else if !self.orders_multiply {
            Some("|N|·|H| differs from |G|")
        } else {
            None
        }
    }
}

/// Checks that `N` is normal in `G`, `H ∩ N = 1` and `|N|·|H| = |G|`.
///
/// With `N` normal, `⟨N, H⟩ = NH` has order `|N||H| / |N ∩ H|`, so the
/// intersection is trivial exactly when that product formula is attained.
pub fn split_extension_check(g: &PermGroup, n: &PermGroup, h: &PermGroup) -> SplitVerdict {
    let contained = |sub: &PermGroup| sub.generators().iter().all(|x| g.contains(x).unwrap_or(false));
    let n_in_g = contained(n);
    let h_in_g = contained(h);
    let n_normal = n_in_g
        && g.generators().iter().all(|x| {
            let xi = x.inverse();
            n.generators().iter().all(|y| n.chain().contains(&xi.then(y).then(x)))
        });
    let (order_n, order_h, order_g) = (n.order(), h.order(), g.order());
    let joined = n.join(h).map(|j| j.order()).unwrap_or_default();
    let trivial_intersection = n_normal
        && h.generators().iter().all(|x| x.is_identity() || !n.chain().contains(x))
        && joined == &order_n * &order_h;
    let orders_multiply = &order_n * &order_h == order_g;
    let split = n_in_g && h_in_g && n_normal && trivial_intersection && orders_multiply;
    SplitVerdict { n_in_g, h_in_g, n_normal, trivial_intersection, orders_multiply, split }
}
