//! Congruences of finite pm-algebras through C-subsets of the dual space,
//! with a direct closure-based oracle.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::algebra::{FiniteAlgebra, Lattice};
use crate::duality::{dual_space, eta, DualSpace, SpaceType};
use crate::error::{cap_exceeded, Error, Result};
use crate::sets::{self, mask_cmp};

/// Element cap for [`congruence_lattice_bruteforce`].
pub const DEFAULT_BRUTEFORCE_CAP: usize = 10;

/// A set of dual points that is involutive and contains every maximal point
/// above one of its members.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CSubset {
    pub points: FixedBitSet,
}

impl CSubset {
    pub fn to_vec(&self) -> Vec<usize> {
        sets::to_vec(&self.points)
    }
}

/// Whether `set` is a C-subset of `space`.
pub fn is_c_subset(space: &DualSpace, set: &FixedBitSet) -> bool {
    if space.phi_image(set) != *set {
        return false;
    }
    let mut maxes = space.up_closure(set);
    maxes.intersect_with(&space.max_points());
    maxes.is_subset(set)
}

/// Smallest C-subset containing `seed`.
pub fn c_closure(space: &DualSpace, seed: &FixedBitSet) -> FixedBitSet {
    let max = space.max_points();
    let mut cur = seed.clone();
    loop {
        let mut next = cur.clone();
        next.union_with(&space.phi_image(&cur));
        let mut up = space.up_closure(&next);
        up.intersect_with(&max);
        next.union_with(&up);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// All C-subsets, sorted by bit mask.
///
/// C-subsets are the closed sets of [`c_closure`], so they are enumerated
/// with the next-closure algorithm without scanning all subsets.
pub fn all_c_subsets(space: &DualSpace) -> Vec<CSubset> {
    let n = space.len();
    let mut out = Vec::new();
    let mut current = c_closure(space, &space.empty_set());
    'outer: loop {
        out.push(current.clone());
        for i in (0..n).rev() {
            if current.contains(i) {
                continue;
            }
            let mut seed = space.empty_set();
            seed.extend(current.ones().filter(|&p| p < i));
            seed.insert(i);
            let next = c_closure(space, &seed);
            if next.ones().filter(|&p| p < i).eq(current.ones().filter(|&p| p < i)) {
                current = next;
                continue 'outer;
            }
        }
        break;
    }
    out.sort_by(mask_cmp);
    out.into_iter().map(|points| CSubset { points }).collect()
}

/// All C-subsets by testing every subset; `space.len()` must be at most 20.
pub fn all_c_subsets_naive(space: &DualSpace) -> Result<Vec<CSubset>> {
    let n = space.len();
    if n > 20 {
        return Err(cap_exceeded("naive C-subset scan", n, 20));
    }
    let out = (0u32..1 << n)
        .map(|mask| sets::from_iter(n, (0..n).filter(|&i| mask >> i & 1 == 1)))
        .filter(|s| is_c_subset(space, s))
        .map(|points| CSubset { points })
        .collect();
    Ok(out)
}

/// A partition of the elements, stored as canonical block labels: blocks are
/// numbered in order of their least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Congruence {
    block_of: Vec<usize>,
}

impl Congruence {
    /// Partition by equal keys.
    pub fn from_keys<K: Eq + std::hash::Hash>(keys: impl IntoIterator<Item = K>) -> Self {
        let mut labels: HashMap<K, usize> = HashMap::new();
        let block_of = keys
            .into_iter()
            .map(|k| {
                let next = labels.len();
                *labels.entry(k).or_insert(next)
            })
            .collect();
        Congruence { block_of }
    }

    pub fn identity(n: usize) -> Self {
        Congruence { block_of: (0..n).collect() }
    }

    pub fn all(n: usize) -> Self {
        Congruence { block_of: vec![0; n] }
    }

    pub fn block_of(&self) -> &[usize] {
        &self.block_of
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn num_blocks(&self) -> usize {
        self.block_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.block_of.iter().enumerate() {
            blocks[b].push(x);
        }
        blocks
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn is_identity(&self) -> bool {
        self.num_blocks() == self.len()
    }

    pub fn is_all(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Congruence) -> bool {
        let mut image = vec![usize::MAX; self.num_blocks()];
        self.block_of.iter().zip(&other.block_of).all(|(&b, &o)| {
            if image[b] == usize::MAX {
                image[b] = o;
            }
            image[b] == o
        })
    }

    /// Whether the partition is compatible with all operations of `alg`.
    pub fn is_compatible(&self, alg: &FiniteAlgebra) -> bool {
        let blocks = self.blocks();
        for block in &blocks {
            for (i, &a) in block.iter().enumerate() {
                for &b in &block[i + 1..] {
                    if !self.related(alg.neg(a), alg.neg(b)) || !self.related(alg.star(a), alg.star(b)) {
                        return false;
                    }
                    for c in alg.elements() {
                        if !self.related(alg.meet(a, c), alg.meet(b, c))
                            || !self.related(alg.join(a, c), alg.join(b, c))
                        {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// The quotient algebra; element `i` is block `i`.
    pub fn quotient(&self, alg: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        if !self.is_compatible(alg) {
            return Err(Error::Domain("partition is not a congruence".into()));
        }
        let blocks = self.blocks();
        let rep: Vec<usize> = blocks.iter().map(|b| b[0]).collect();
        let b = &self.block_of;
        let lattice = Lattice::from_leq(blocks.len(), |x, y| b[alg.meet(rep[x], rep[y])] == b[rep[x]])
            .map_err(|v| Error::Consistency(format!("quotient is not a lattice: {v:?}")))?;
        let neg = rep.iter().map(|&r| b[alg.neg(r)]).collect();
        let star = rep.iter().map(|&r| b[alg.star(r)]).collect();
        Ok(FiniteAlgebra::from_trusted(lattice, neg, star))
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn from_congruence(c: &Congruence) -> Self {
        let mut first = vec![usize::MAX; c.num_blocks()];
        let parent = c
            .block_of
            .iter()
            .enumerate()
            .map(|(x, &b)| {
                if first[b] == usize::MAX {
                    first[b] = x;
                }
                first[b]
            })
            .collect();
        UnionFind { parent }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn into_congruence(mut self) -> Congruence {
        let n = self.parent.len();
        Congruence::from_keys((0..n).map(|x| self.find(x)))
    }
}

/// Least congruence containing `base` and the pairs in `extra`.
pub fn generated_congruence(alg: &FiniteAlgebra, base: &Congruence, extra: &[(usize, usize)]) -> Congruence {
    let mut uf = UnionFind::from_congruence(base);
    for &(a, b) in extra {
        uf.union(a, b);
    }
    loop {
        let mut changed = false;
        let n = alg.size();
        for a in 0..n {
            for b in a + 1..n {
                if uf.find(a) != uf.find(b) {
                    continue;
                }
                changed |= uf.union(alg.neg(a), alg.neg(b));
                changed |= uf.union(alg.star(a), alg.star(b));
                for c in 0..n {
                    changed |= uf.union(alg.meet(a, c), alg.meet(b, c));
                    changed |= uf.union(alg.join(a, c), alg.join(b, c));
                }
            }
        }
        if !changed {
            return uf.into_congruence();
        }
    }
}

pub fn principal_congruence(alg: &FiniteAlgebra, a: usize, b: usize) -> Congruence {
    generated_congruence(alg, &Congruence::identity(alg.size()), &[(a, b)])
}

/// `θ(Y)`: `a ≡ b` iff `η(a) ∩ Y = η(b) ∩ Y`.
pub fn congruence_from_csubset(alg: &FiniteAlgebra, space: &DualSpace, y: &FixedBitSet) -> Result<Congruence> {
    if y.len() != space.len() || !is_c_subset(space, y) {
        return Err(Error::Domain("not a C-subset of the dual space".into()));
    }
    Ok(Congruence::from_keys(alg.elements().map(|a| {
        let mut e = eta(space, a);
        e.intersect_with(y);
        e
    })))
}

/// The congruence lattice with the C-subset behind each congruence.
#[derive(Clone, Debug)]
pub struct CongruenceLattice {
    pub congruences: Vec<Congruence>,
    pub csubsets: Vec<CSubset>,
}

impl CongruenceLattice {
    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    /// Minimal congruences other than the identity.
    pub fn atoms(&self) -> Vec<usize> {
        minimal_nontrivial(&self.congruences)
    }

    /// Covering pairs `(lower, upper)` under refinement.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let c = &self.congruences;
        let below = |i: usize, j: usize| i != j && c[i].refines(&c[j]);
        let mut out = Vec::new();
        for i in 0..c.len() {
            for j in 0..c.len() {
                if below(i, j) && !(0..c.len()).any(|k| below(i, k) && below(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph congruences {\n  rankdir=BT;\n");
        for (i, c) in self.congruences.iter().enumerate() {
            let _ = writeln!(s, "  t{i} [label=\"t{i} ({} blocks)\"];", c.num_blocks());
        }
        for (a, b) in self.covers() {
            let _ = writeln!(s, "  t{a} -> t{b};");
        }
        s.push_str("}\n");
        s
    }
}

fn minimal_nontrivial(congruences: &[Congruence]) -> Vec<usize> {
    let nontrivial: Vec<usize> = (0..congruences.len()).filter(|&i| !congruences[i].is_identity()).collect();
    nontrivial
        .iter()
        .copied()
        .filter(|&i| !nontrivial.iter().any(|&j| j != i && congruences[j].refines(&congruences[i])))
        .collect()
}

fn sort_key(c: &Congruence) -> (Reverse<usize>, Vec<usize>) {
    (Reverse(c.num_blocks()), c.block_of.clone())
}

/// All congruences via C-subsets, finest first.
pub fn congruence_lattice(alg: &FiniteAlgebra) -> CongruenceLattice {
    let space = dual_space(alg);
    let mut pairs: Vec<(Congruence, CSubset)> = all_c_subsets(&space)
        .into_iter()
        .map(|y| {
            let c = congruence_from_csubset(alg, &space, &y.points).expect("enumerated C-subset");
            (c, y)
        })
        .collect();
    pairs.sort_by_key(|(c, _)| sort_key(c));
    let (congruences, csubsets) = pairs.into_iter().unzip();
    CongruenceLattice { congruences, csubsets }
}

pub fn congruence_lattice_bruteforce(alg: &FiniteAlgebra) -> Result<Vec<Congruence>> {
    congruence_lattice_bruteforce_capped(alg, DEFAULT_BRUTEFORCE_CAP)
}

/// All congruences as joins of principal congruences, finest first.
pub fn congruence_lattice_bruteforce_capped(alg: &FiniteAlgebra, cap: usize) -> Result<Vec<Congruence>> {
    if alg.size() > cap {
        return Err(cap_exceeded("brute-force congruence lattice", alg.size(), cap));
    }
    let n = alg.size();
    let identity = Congruence::identity(n);
    let principal: BTreeSet<Congruence> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .map(|(a, b)| principal_congruence(alg, a, b))
        .collect();
    let mut found: BTreeSet<Congruence> = BTreeSet::new();
    found.insert(identity);
    let mut frontier: Vec<Congruence> = found.iter().cloned().collect();
    while let Some(c) = frontier.pop() {
        for p in &principal {
            let pairs: Vec<(usize, usize)> = p.blocks().iter().flat_map(|b| b.iter().map(move |&x| (b[0], x))).collect();
            let j = generated_congruence(alg, &c, &pairs);
            if found.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    let mut out: Vec<Congruence> = found.into_iter().collect();
    out.sort_by_key(sort_key);
    Ok(out)
}

/// Exactly two congruences.
pub fn is_simple(alg: &FiniteAlgebra) -> bool {
    congruence_lattice(alg).len() == 2
}

/// Nontrivial with a unique minimal nontrivial congruence.
pub fn is_subdirectly_irreducible(alg: &FiniteAlgebra) -> bool {
    !alg.is_trivial() && congruence_lattice(alg).atoms().len() == 1
}

/// Dual criterion: nonempty, φ-connected and every point maximal or minimal.
pub fn is_simple_dual(space: &DualSpace) -> bool {
    !space.is_empty() && space.is_phi_connected() && space.body().count_ones(..) == 0
}

/// Dual criterion: nonempty, φ-connected, and the body has fewer than two
/// points or is a single pair `{P, φ(P)}` with `P ≠ φ(P)`.
pub fn is_si_dual(space: &DualSpace) -> bool {
    if space.is_empty() || !space.is_phi_connected() {
        return false;
    }
    let body = sets::to_vec(&space.body());
    match body.as_slice() {
        [] | [_] => true,
        [p, q] => space.phi(*p) == *q,
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub size: usize,
    pub congruences: usize,
    pub simple: bool,
    pub subdirectly_irreducible: bool,
    pub simple_by_dual: bool,
    pub subdirectly_irreducible_by_dual: bool,
    pub phi_connected: bool,
    pub body_size: usize,
    pub space_type: SpaceType,
}

impl Classification {
    pub fn summary(&self) -> String {
        let kind = match (self.subdirectly_irreducible, self.simple) {
            (_, true) => "simple".to_string(),
            (true, false) => "subdirectly irreducible, not simple".to_string(),
            (false, false) => "not subdirectly irreducible".to_string(),
        };
        format!(
            "{kind}; Body size {}; space {}",
            self.body_size,
            self.space_type.label()
        )
    }
}

pub fn classify(alg: &FiniteAlgebra) -> Classification {
    let space = dual_space(alg);
    let lattice = congruence_lattice(alg);
    Classification {
        size: alg.size(),
        congruences: lattice.len(),
        simple: lattice.len() == 2,
        subdirectly_irreducible: !alg.is_trivial() && lattice.atoms().len() == 1,
        simple_by_dual: is_simple_dual(&space),
        subdirectly_irreducible_by_dual: is_si_dual(&space),
        phi_connected: space.is_phi_connected(),
        body_size: space.body().count_ones(..),
        space_type: space.space_type(),
    }
}
