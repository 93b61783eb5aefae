//! Finite bounded lattices given by an explicit order.

use fixedbitset::FixedBitSet;

use super::Violation;
use crate::sets;

/// A finite bounded lattice with cached meet and join tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    above: Vec<FixedBitSet>,
    below: Vec<FixedBitSet>,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
    top: usize,
}

impl Lattice {
    /// Builds a lattice from covering pairs `(lower, upper)`; the order is
    /// their reflexive-transitive closure.
    pub fn from_covers(size: usize, covers: &[(usize, usize)]) -> Result<Self, Vec<Violation>> {
        let mut above: Vec<FixedBitSet> = (0..size).map(|i| sets::from_iter(size, [i])).collect();
        for &(lo, hi) in covers {
            above[lo].insert(hi);
        }
        for k in 0..size {
            let row = above[k].clone();
            for (i, set) in above.iter_mut().enumerate() {
                if i != k && set.contains(k) {
                    set.union_with(&row);
                }
            }
        }
        Self::from_above(above)
    }

    /// Builds a lattice from an order predicate, which must already be
    /// reflexive and transitive.
    pub fn from_leq(size: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self, Vec<Violation>> {
        let above = (0..size)
            .map(|a| sets::from_iter(size, (0..size).filter(|&b| leq(a, b))))
            .collect();
        Self::from_above(above)
    }

    fn from_above(above: Vec<FixedBitSet>) -> Result<Self, Vec<Violation>> {
        let n = above.len();
        for a in 0..n {
            for b in above[a].ones() {
                if b > a && above[b].contains(a) {
                    return Err(vec![Violation::new("partial-order", [a, b])]);
                }
            }
        }
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for (a, set) in above.iter().enumerate() {
            for b in set.ones() {
                below[b].insert(a);
            }
        }
        let down_rank: Vec<usize> = below.iter().map(|s| s.count_ones(..)).collect();
        let up_rank: Vec<usize> = above.iter().map(|s| s.count_ones(..)).collect();

        let mut violations = Vec::new();
        let meet = bound_table(&below, &down_rank, "meet", &mut violations);
        let join = bound_table(&above, &up_rank, "join", &mut violations);
        let bottom = (0..n).find(|&x| up_rank[x] == n);
        let top = (0..n).find(|&x| down_rank[x] == n);
        let (Some(bottom), Some(top)) = (bottom, top) else {
            violations.push(Violation::new("bounds", []));
            return Err(violations);
        };
        if !violations.is_empty() {
            return Err(violations);
        }
        Ok(Lattice {
            above,
            below,
            meet,
            join,
            bottom,
            top,
        })
    }

    /// Componentwise product; element `(a, b)` has index `a * |other| + b`.
    pub fn product(&self, other: &Lattice) -> Lattice {
        let (n1, n2) = (self.size(), other.size());
        let n = n1 * n2;
        let pair = |x: usize| (x / n2, x % n2);
        let mut above = Vec::with_capacity(n);
        let mut below = Vec::with_capacity(n);
        for x in 0..n {
            let (a, b) = pair(x);
            let mut up = FixedBitSet::with_capacity(n);
            let mut down = FixedBitSet::with_capacity(n);
            for a2 in self.above[a].ones() {
                for b2 in other.above[b].ones() {
                    up.insert(a2 * n2 + b2);
                }
            }
            for a2 in self.below[a].ones() {
                for b2 in other.below[b].ones() {
                    down.insert(a2 * n2 + b2);
                }
            }
            above.push(up);
            below.push(down);
        }
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for x in 0..n {
            let (a, b) = pair(x);
            for y in 0..n {
                let (c, d) = pair(y);
                meet[x * n + y] = (self.meet(a, c) * n2 + other.meet(b, d)) as u32;
                join[x * n + y] = (self.join(a, c) * n2 + other.join(b, d)) as u32;
            }
        }
        Lattice {
            above,
            below,
            meet,
            join,
            bottom: self.bottom * n2 + other.bottom,
            top: self.top * n2 + other.top,
        }
    }

    pub fn size(&self) -> usize {
        self.above.len()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.above[a].contains(b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b] as usize
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size() + b] as usize
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// `{x : x <= a}`
    pub fn below(&self, a: usize) -> &FixedBitSet {
        &self.below[a]
    }

    /// `{x : a <= x}`
    pub fn above(&self, a: usize) -> &FixedBitSet {
        &self.above[a]
    }

    /// Length of the longest chain from the bottom to `a`.
    pub fn height(&self, a: usize) -> usize {
        let mut memo = vec![usize::MAX; self.size()];
        self.height_memo(a, &mut memo)
    }

    fn height_memo(&self, a: usize, memo: &mut [usize]) -> usize {
        if memo[a] != usize::MAX {
            return memo[a];
        }
        let h = self
            .lower_covers(a)
            .into_iter()
            .map(|c| self.height_memo(c, memo) + 1)
            .max()
            .unwrap_or(0);
        memo[a] = h;
        h
    }

    pub fn heights(&self) -> Vec<usize> {
        let mut memo = vec![usize::MAX; self.size()];
        (0..self.size()).map(|a| self.height_memo(a, &mut memo)).collect()
    }

    pub fn lower_covers(&self, a: usize) -> Vec<usize> {
        self.below[a]
            .ones()
            .filter(|&c| c != a)
            .filter(|&c| {
                // c is covered by a when nothing lies strictly between them
                !self.above[c]
                    .ones()
                    .any(|m| m != c && m != a && self.leq(m, a))
            })
            .collect()
    }

    /// Covering pairs `(lower, upper)` in lexicographic order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.size())
            .flat_map(|a| self.lower_covers(a).into_iter().map(move |c| (c, a)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&a| a != self.bottom && self.lower_covers(a).len() == 1)
            .collect()
    }

    pub fn atoms(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&a| a != self.bottom && self.below[a].count_ones(..) == 2)
            .collect()
    }

    /// Least triple `(x, y, z)` with `x ∧ (y ∨ z) != (x ∧ y) ∨ (x ∧ z)`.
    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.size();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = self.meet(x, self.join(y, z));
                    let rhs = self.join(self.meet(x, y), self.meet(x, z));
                    if lhs != rhs {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// Largest annihilator of every element, if each one exists.
    pub fn pseudocomplements(&self) -> Result<Vec<usize>, usize> {
        (0..self.size())
            .map(|a| {
                let ann = sets::from_iter(
                    self.size(),
                    (0..self.size()).filter(|&b| self.meet(a, b) == self.bottom),
                );
                let cand = ann
                    .ones()
                    .max_by_key(|&b| self.below[b].count_ones(..))
                    .ok_or(a)?;
                if ann.is_subset(&self.below[cand]) {
                    Ok(cand)
                } else {
                    Err(a)
                }
            })
            .collect()
    }
}

fn bound_table(
    down: &[FixedBitSet],
    rank: &[usize],
    axiom: &'static str,
    violations: &mut Vec<Violation>,
) -> Vec<u32> {
    let n = down.len();
    let mut table = vec![0u32; n * n];
    let mut reported = false;
    for a in 0..n {
        for b in a..n {
            let mut common = down[a].clone();
            common.intersect_with(&down[b]);
            let best = common.ones().max_by_key(|&x| rank[x]);
            match best {
                Some(m) if common.is_subset(&down[m]) => {
                    table[a * n + b] = m as u32;
                    table[b * n + a] = m as u32;
                }
                _ => {
                    if !reported {
                        violations.push(Violation::new(axiom, [a, b]));
                        reported = true;
                    }
                }
            }
        }
    }
    table
}
