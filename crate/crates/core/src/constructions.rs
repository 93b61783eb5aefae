//! The subdirectly irreducible family `B(i, m)` and maps between finite
//! algebras.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::algebra::{compute_star, decompose_into_simples, is_isomorphic, FiniteAlgebra, Lattice};
use crate::congruence::congruence_lattice;
use crate::error::{cap_exceeded, Error, Result};
use crate::sets;
use crate::terms::variety::in_bpk0;

/// Bound on `|B|^(#generators of A)` for homomorphism search.
pub const DEFAULT_HOM_CAP: u64 = 1_000_000_000;

/// Largest atom count accepted by [`si_membership_oracle`].
pub const ORACLE_MAX_ATOMS: usize = 3;

/// The Boolean lattice on `k` atoms; element `S` is the bit mask of `S`.
pub fn boolean_block(k: usize) -> Lattice {
    Lattice::from_leq(1 << k, |a, b| a & !b == 0).expect("Boolean lattice")
}

/// The `m`-element chain `0 < 1 < … < m-1`.
pub fn chain(m: usize) -> Result<Lattice> {
    if m == 0 {
        return Err(Error::Domain("a chain needs at least one element".into()));
    }
    Ok(Lattice::from_leq(m, |a, b| a <= b).expect("chain"))
}

/// `L₁ ⊕ L₂`: the top of `L₁` is identified with the bottom of `L₂`.
///
/// Elements of `L₁` keep their indices; the non-bottom elements of `L₂`
/// follow in their original order.
pub fn ordinal_sum(l1: &Lattice, l2: &Lattice) -> Lattice {
    let n1 = l1.size();
    let mut map = vec![0usize; l2.size()];
    let mut next = n1;
    for (y, slot) in map.iter_mut().enumerate() {
        if y == l2.bottom() {
            *slot = l1.top();
        } else {
            *slot = next;
            next += 1;
        }
    }
    let mut origin = vec![(0u8, 0usize); next];
    for (x, slot) in origin.iter_mut().enumerate().take(n1) {
        *slot = (0, x);
    }
    for (y, &i) in map.iter().enumerate() {
        if y != l2.bottom() {
            origin[i] = (1, y);
        }
    }
    Lattice::from_leq(next, |a, b| match (origin[a], origin[b]) {
        ((0, x), (0, y)) => l1.leq(x, y),
        ((1, x), (1, y)) => l2.leq(x, y),
        ((s, _), (t, _)) => s < t,
    })
    .expect("ordinal sum of bounded lattices")
}

/// Index of a subdirectly irreducible algebra `B(i, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SiDescriptor {
    pub i: usize,
    pub m: usize,
}

impl SiDescriptor {
    /// Valid pairs are `(0, 0)`, `(1, 0)` and `(i, m)` with `i ≥ 1`, `1 ≤ m ≤ 3`.
    pub fn new(i: usize, m: usize) -> Result<Self> {
        let ok = matches!((i, m), (0, 0) | (1, 0)) || (i >= 1 && (1..=3).contains(&m));
        if !ok {
            return Err(Error::Domain(format!("({i},{m}) is not a valid descriptor")));
        }
        Ok(SiDescriptor { i, m })
    }

    /// `B_k = B(k, 1)` for `k ≥ 1`; `B_0` is the 2-chain `B(1, 0)`.
    pub fn simple(k: usize) -> Self {
        if k == 0 {
            SiDescriptor { i: 1, m: 0 }
        } else {
            SiDescriptor { i: k, m: 1 }
        }
    }

    pub fn size(self) -> usize {
        match (self.i, self.m) {
            (0, 0) => 1,
            (1, 0) => 2,
            (i, m) => (1 << (i + 1)) + m - 2,
        }
    }

    /// All valid descriptors with `i ≤ max_i`.
    pub fn all_up_to(max_i: usize) -> Vec<SiDescriptor> {
        let mut out = vec![SiDescriptor { i: 0, m: 0 }, SiDescriptor { i: 1, m: 0 }];
        for i in 1..=max_i {
            for m in 1..=3 {
                out.push(SiDescriptor { i, m });
            }
        }
        out
    }
}

impl fmt::Display for SiDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.m)
    }
}

impl FromStr for SiDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("expected `i,m`, got `{s}`"));
        let (i, m) = s.split_once(',').ok_or_else(bad)?;
        let i = i.trim().parse().map_err(|_| bad())?;
        let m = m.trim().parse().map_err(|_| bad())?;
        SiDescriptor::new(i, m)
    }
}

pub fn trivial_algebra() -> FiniteAlgebra {
    build_si(SiDescriptor { i: 0, m: 0 })
}

pub fn two_chain() -> FiniteAlgebra {
    build_si(SiDescriptor { i: 1, m: 0 })
}

/// `B(i, m) = Bool(i) ⊕ C_m ⊕ Bool(i)` with the mirror negation.
///
/// Layout: the lower block occupies indices `0..2^i` by bit mask, the chain
/// interior follows, then the upper block by bit mask. The negation sends a
/// lower `S` to the upper complement of `S` and reverses the chain.
pub fn build_si(d: SiDescriptor) -> FiniteAlgebra {
    match (d.i, d.m) {
        (0, 0) => return FiniteAlgebra::from_trusted(chain(1).unwrap(), vec![0], vec![0]),
        (1, 0) => return FiniteAlgebra::from_trusted(chain(2).unwrap(), vec![1, 0], vec![1, 0]),
        _ => {}
    }
    let (i, m) = (d.i, d.m);
    let block = 1usize << i;
    let full = block - 1;
    let upper = block - 1 + (m - 1);
    let n = upper + block;
    let lattice = ordinal_sum(
        &ordinal_sum(&boolean_block(i), &chain(m).unwrap()),
        &boolean_block(i),
    );
    debug_assert_eq!(lattice.size(), n);
    let neg = (0..n)
        .map(|x| {
            if x < block {
                upper + (full & !x)
            } else if x < upper {
                let j = x - full;
                full + (m - 1 - j)
            } else {
                full & !(x - upper)
            }
        })
        .collect();
    let star = compute_star(&lattice).expect("distributive lattices are pseudocomplemented");
    FiniteAlgebra::from_trusted(lattice, neg, star)
}

/// Closure of `seed ∪ {0, 1}` under all operations.
pub fn closure(alg: &FiniteAlgebra, seed: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut members = FixedBitSet::with_capacity(alg.size());
    let mut list = Vec::new();
    let mut queue: Vec<usize> = vec![alg.bottom(), alg.top()];
    queue.extend(seed);
    while let Some(x) = queue.pop() {
        if members.put(x) {
            continue;
        }
        queue.push(alg.neg(x));
        queue.push(alg.star(x));
        for &y in &list {
            queue.push(alg.meet(x, y));
            queue.push(alg.join(x, y));
        }
        list.push(x);
    }
    members
}

/// A subalgebra with its inclusion map.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub algebra: FiniteAlgebra,
    /// `embedding[i]` is the element of the parent that element `i` represents.
    pub embedding: Vec<usize>,
}

pub fn subalgebra_generated(alg: &FiniteAlgebra, gens: &[usize]) -> Result<Subalgebra> {
    if let Some(&g) = gens.iter().find(|&&g| g >= alg.size()) {
        return Err(Error::Domain(format!("generator {g} is not an element")));
    }
    let embedding = sets::to_vec(&closure(alg, gens.iter().copied()));
    let algebra = alg.restrict(&embedding)?;
    Ok(Subalgebra { algebra, embedding })
}

/// All subalgebras as element sets, sorted by bit mask.
pub fn all_subalgebras(alg: &FiniteAlgebra) -> Vec<FixedBitSet> {
    let base = closure(alg, []);
    let mut seen: HashMap<FixedBitSet, ()> = HashMap::new();
    let mut stack = vec![base.clone()];
    seen.insert(base, ());
    while let Some(s) = stack.pop() {
        for x in alg.elements() {
            if s.contains(x) {
                continue;
            }
            let next = closure(alg, s.ones().chain([x]));
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), ());
                stack.push(next);
            }
        }
    }
    let mut out: Vec<FixedBitSet> = seen.into_keys().collect();
    out.sort_by(sets::mask_cmp);
    out
}

/// A small generating set, built greedily from low elements upwards.
pub fn generating_set(alg: &FiniteAlgebra) -> Vec<usize> {
    let heights = alg.lattice().heights();
    let mut order: Vec<usize> = alg.elements().collect();
    order.sort_by_key(|&x| (heights[x], x));
    let mut gens = Vec::new();
    let mut cur = closure(alg, []);
    for x in order {
        if !cur.contains(x) {
            gens.push(x);
            cur = closure(alg, gens.iter().copied());
        }
    }
    gens
}

struct HomSearch<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    gens: Vec<usize>,
    candidates: Vec<usize>,
    out: Vec<Vec<usize>>,
}

const UNSET: usize = usize::MAX;

impl HomSearch<'_> {
    /// Extends `h` by `x ↦ y` and everything it forces; false on conflict.
    fn assign(&self, h: &mut [usize], defined: &mut Vec<usize>, x: usize, y: usize) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            if h[x] != UNSET {
                if h[x] != y {
                    return false;
                }
                continue;
            }
            h[x] = y;
            queue.push((self.a.neg(x), self.b.neg(y)));
            queue.push((self.a.star(x), self.b.star(y)));
            for &z in defined.iter() {
                let w = h[z];
                queue.push((self.a.meet(x, z), self.b.meet(y, w)));
                queue.push((self.a.join(x, z), self.b.join(y, w)));
            }
            defined.push(x);
        }
        true
    }

    fn run(&mut self, depth: usize, h: &[usize], defined: &[usize]) {
        if depth == self.gens.len() {
            self.out.push(h.to_vec());
            return;
        }
        let g = self.gens[depth];
        if h[g] != UNSET {
            self.run(depth + 1, h, defined);
            return;
        }
        for ci in 0..self.candidates.len() {
            let y = self.candidates[ci];
            let mut h2 = h.to_vec();
            let mut d2 = defined.to_vec();
            if self.assign(&mut h2, &mut d2, g, y) {
                self.run(depth + 1, &h2, &d2);
            }
        }
    }
}

/// All homomorphisms `A → B` as image tables, in lexicographic order.
pub fn homomorphisms(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Vec<Vec<usize>>> {
    homomorphisms_capped(a, b, DEFAULT_HOM_CAP)
}

pub fn homomorphisms_capped(a: &FiniteAlgebra, b: &FiniteAlgebra, cap: u64) -> Result<Vec<Vec<usize>>> {
    let gens = generating_set(a);
    let space = (b.size() as u64).checked_pow(gens.len() as u32).unwrap_or(u64::MAX);
    if space > cap {
        return Err(cap_exceeded("homomorphism search", space, cap));
    }
    let heights = b.lattice().heights();
    let mut candidates: Vec<usize> = b.elements().collect();
    candidates.sort_by_key(|&y| (heights[y], y));
    let mut search = HomSearch {
        a,
        b,
        gens,
        candidates,
        out: Vec::new(),
    };
    let mut h = vec![UNSET; a.size()];
    let mut defined = Vec::new();
    let ok = search.assign(&mut h, &mut defined, a.bottom(), b.bottom())
        && search.assign(&mut h, &mut defined, a.top(), b.top());
    if ok {
        search.run(0, &h, &defined);
    }
    let mut out = search.out;
    out.sort();
    Ok(out)
}

pub fn surjective_homs(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Vec<Vec<usize>>> {
    let mut homs = homomorphisms(a, b)?;
    homs.retain(|h| {
        let mut hit = vec![false; b.size()];
        for &y in h {
            hit[y] = true;
        }
        hit.iter().all(|&x| x)
    });
    Ok(homs)
}

pub fn automorphisms(b: &FiniteAlgebra) -> Result<Vec<Vec<usize>>> {
    surjective_homs(b, b)
}

/// `B(d₁) ∈ HS(B(d₂))`, decided coordinatewise.
pub fn si_leq(d1: SiDescriptor, d2: SiDescriptor) -> bool {
    d1.i <= d2.i && d1.m <= d2.m
}

/// `B(d₁) ∈ HS(B(d₂))`, decided by enumerating subalgebras of `B(d₂)` and
/// their quotients.
pub fn si_membership_oracle(d1: SiDescriptor, d2: SiDescriptor) -> Result<bool> {
    if d2.i > ORACLE_MAX_ATOMS {
        return Err(cap_exceeded("HS oracle atom count", d2.i, ORACLE_MAX_ATOMS));
    }
    let target = build_si(d1);
    let host = build_si(d2);
    for sub in all_subalgebras(&host) {
        if sub.count_ones(..) < target.size() {
            continue;
        }
        let s = host.restrict(&sets::to_vec(&sub))?;
        for theta in congruence_lattice(&s).congruences {
            if theta.num_blocks() == target.size() && is_isomorphic(&theta.quotient(&s)?, &target) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// For a finite member of BPK₀: weakly projective iff fixed-point-free.
/// The trivial algebra is reported as not weakly projective.
pub fn is_weakly_projective(alg: &FiniteAlgebra) -> Result<bool> {
    if !in_bpk0(alg)? {
        return Err(Error::Domain("weak projectivity is decided only in BPK0".into()));
    }
    Ok(!alg.is_trivial() && alg.fixed_points().is_empty())
}

/// Whether a finite member of BPK₀ has the 2-chain as a direct factor.
pub fn has_two_factor(alg: &FiniteAlgebra) -> Result<bool> {
    Ok(decompose_into_simples(alg)?.iter().any(|f| f.k == 0))
}
