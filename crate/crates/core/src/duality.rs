//! Finite duality for pm-algebras.
//!
//! The dual of a finite pm-algebra is its poset of prime filters together
//! with the Birula–Rasiowa involution `φ(P) = {x : x′ ∉ P}`. Conversely the
//! up-sets of a finite poset with an order-reversing involution form a
//! pm-algebra with `V′ = φ(V)ᶜ` and `V* = (↓V)ᶜ`.

use std::collections::HashMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::algebra::{FiniteAlgebra, Lattice, DEFAULT_ELEMENT_CAP};
use crate::error::{cap_exceeded, Error, Result};
use crate::sets::{self, mask_cmp};

/// Shape of a dual space in which every maximal point lies above every
/// non-maximal point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SpaceType {
    /// Empty body (includes the one-point space).
    Type1,
    /// Body is a single φ-fixed point.
    Type2,
    /// Body is a pair `{P, φ(P)}` with `φ(P) ⊊ P`.
    Type3,
    Other,
}

impl SpaceType {
    pub fn label(self) -> &'static str {
        match self {
            SpaceType::Type1 => "Type 1",
            SpaceType::Type2 => "Type 2",
            SpaceType::Type3 => "Type 3",
            SpaceType::Other => "other",
        }
    }
}

/// A finite De Morgan p-space: a poset with an order-reversing involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSpace {
    filters: Option<Vec<FixedBitSet>>,
    above: Vec<FixedBitSet>,
    below: Vec<FixedBitSet>,
    phi: Vec<usize>,
}

impl DualSpace {
    /// Builds a space from generating order pairs `(p, q)` meaning `p ≤ q`
    /// (closed reflexively and transitively) and an involution table.
    pub fn new(points: usize, order: &[(usize, usize)], phi: Vec<usize>) -> Result<Self> {
        if phi.len() != points {
            return Err(Error::InvalidSpace(format!(
                "phi has {} entries for {points} points",
                phi.len()
            )));
        }
        let mut above: Vec<FixedBitSet> = (0..points).map(|p| sets::from_iter(points, [p])).collect();
        for &(p, q) in order {
            if p >= points || q >= points {
                return Err(Error::InvalidSpace(format!("order pair ({p}, {q}) out of range")));
            }
            above[p].insert(q);
        }
        for k in 0..points {
            let row = above[k].clone();
            for (i, set) in above.iter_mut().enumerate() {
                if i != k && set.contains(k) {
                    set.union_with(&row);
                }
            }
        }
        Self::from_above(None, above, phi)
    }

    fn from_above(
        filters: Option<Vec<FixedBitSet>>,
        above: Vec<FixedBitSet>,
        phi: Vec<usize>,
    ) -> Result<Self> {
        let n = above.len();
        if let Some((p, &q)) = phi.iter().enumerate().find(|(_, &q)| q >= n) {
            return Err(Error::InvalidSpace(format!("phi({p}) = {q} out of range")));
        }
        for p in 0..n {
            if phi[phi[p]] != p {
                return Err(Error::InvalidSpace(format!("phi is not an involution at {p}")));
            }
            for q in above[p].ones() {
                if q != p && above[q].contains(p) {
                    return Err(Error::InvalidSpace(format!("points {p} and {q} form a cycle")));
                }
                if !above[phi[q]].contains(phi[p]) {
                    return Err(Error::InvalidSpace(format!(
                        "phi is not order-reversing on {p} <= {q}"
                    )));
                }
            }
        }
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for (p, set) in above.iter().enumerate() {
            for q in set.ones() {
                below[q].insert(p);
            }
        }
        Ok(DualSpace {
            filters,
            above,
            below,
            phi,
        })
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.above[p].contains(q)
    }

    pub fn phi(&self, p: usize) -> usize {
        self.phi[p]
    }

    pub fn phi_map(&self) -> &[usize] {
        &self.phi
    }

    /// The prime filter behind point `p`, when the space came from an algebra.
    pub fn filter(&self, p: usize) -> Option<&FixedBitSet> {
        self.filters.as_ref().map(|f| &f[p])
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn all_points(&self) -> FixedBitSet {
        sets::full(self.len())
    }

    pub fn max_points(&self) -> FixedBitSet {
        sets::from_iter(
            self.len(),
            (0..self.len()).filter(|&p| self.above[p].count_ones(..) == 1),
        )
    }

    pub fn min_points(&self) -> FixedBitSet {
        sets::from_iter(
            self.len(),
            (0..self.len()).filter(|&p| self.below[p].count_ones(..) == 1),
        )
    }

    /// Points that are neither maximal nor minimal.
    pub fn body(&self) -> FixedBitSet {
        let mut extreme = self.max_points();
        extreme.union_with(&self.min_points());
        let mut body = self.all_points();
        body.difference_with(&extreme);
        body
    }

    /// `[Y)`
    pub fn up_closure(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for p in set.ones() {
            out.union_with(&self.above[p]);
        }
        out
    }

    /// `(Y]`
    pub fn down_closure(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for p in set.ones() {
            out.union_with(&self.below[p]);
        }
        out
    }

    pub fn phi_image(&self, set: &FixedBitSet) -> FixedBitSet {
        sets::from_iter(self.len(), set.ones().map(|p| self.phi[p]))
    }

    pub fn is_upset(&self, set: &FixedBitSet) -> bool {
        self.up_closure(set) == *set
    }

    /// Number of maximal points above `p`.
    pub fn maximal_above(&self, p: usize) -> usize {
        let mut m = self.max_points();
        m.intersect_with(&self.above[p]);
        m.count_ones(..)
    }

    /// Largest number of maximal points above a single point (0 when empty).
    pub fn max_fan(&self) -> usize {
        (0..self.len()).map(|p| self.maximal_above(p)).max().unwrap_or(0)
    }

    /// Whether every point is comparable with its φ-image.
    pub fn is_kleene_space(&self) -> bool {
        (0..self.len()).all(|p| self.leq(p, self.phi[p]) || self.leq(self.phi[p], p))
    }

    /// Connected components of the comparability graph with `p ~ φ(p)` edges
    /// added, ordered by least point.
    pub fn phi_components(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        let mut seen = self.empty_set();
        let mut out = Vec::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            let mut comp = self.empty_set();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(p) = stack.pop() {
                comp.insert(p);
                let next = self.above[p]
                    .ones()
                    .chain(self.below[p].ones())
                    .chain(std::iter::once(self.phi[p]));
                for q in next {
                    if !seen.contains(q) {
                        seen.insert(q);
                        stack.push(q);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_phi_connected(&self) -> bool {
        self.phi_components().len() == 1
    }

    pub fn space_type(&self) -> SpaceType {
        let max = self.max_points();
        let n = self.len();
        let bundled = max.ones().all(|u| {
            (0..n)
                .filter(|p| !max.contains(*p))
                .all(|p| self.leq(p, u))
        });
        if !bundled || n == 0 {
            return SpaceType::Other;
        }
        let mut overlap = max.clone();
        overlap.intersect_with(&self.min_points());
        if n > 1 && overlap.count_ones(..) > 0 {
            return SpaceType::Other;
        }
        let body = sets::to_vec(&self.body());
        match body.as_slice() {
            [] => SpaceType::Type1,
            [p] if self.phi[*p] == *p => SpaceType::Type2,
            [p, q] if self.phi[*p] == *q && (self.leq(*p, *q) || self.leq(*q, *p)) => SpaceType::Type3,
            _ => SpaceType::Other,
        }
    }

    /// Sub-space on a φ-invariant point set, points renumbered in order.
    pub fn restrict(&self, keep: &FixedBitSet) -> Result<DualSpace> {
        if self.phi_image(keep) != *keep {
            return Err(Error::InvalidSpace("restriction must be phi-invariant".into()));
        }
        let points = sets::to_vec(keep);
        let mut index = vec![usize::MAX; self.len()];
        for (i, &p) in points.iter().enumerate() {
            index[p] = i;
        }
        let above = points
            .iter()
            .map(|&p| sets::from_iter(points.len(), self.above[p].ones().filter(|q| keep.contains(*q)).map(|q| index[q])))
            .collect();
        let phi = points.iter().map(|&p| index[self.phi[p]]).collect();
        Self::from_above(None, above, phi)
    }

    /// Strict covering pairs `(p, q)`, `p < q` with nothing in between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for p in 0..n {
            for q in self.above[p].ones().filter(|&q| q != p) {
                let between = self.above[p]
                    .ones()
                    .any(|r| r != p && r != q && self.leq(r, q));
                if !between {
                    out.push((p, q));
                }
            }
        }
        out
    }

    /// Hasse diagram with dashed undirected φ edges; nodes are `P0..Pk`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dual {\n  rankdir=BT;\n  node [shape=circle];\n");
        for p in 0..self.len() {
            let _ = writeln!(out, "  P{p};");
        }
        for (p, q) in self.covers() {
            let _ = writeln!(out, "  P{p} -> P{q};");
        }
        for p in 0..self.len() {
            let q = self.phi[p];
            if p <= q {
                let _ = writeln!(out, "  P{p} -> P{q} [style=dashed, dir=none, constraint=false];");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Prime filters of a finite distributive lattice, sorted by bit mask.
///
/// In the finite case these are exactly the principal filters `↑j` of the
/// join-irreducible elements `j`.
pub fn prime_filters(alg: &FiniteAlgebra) -> Vec<FixedBitSet> {
    let mut filters: Vec<FixedBitSet> = alg
        .lattice()
        .join_irreducibles()
        .into_iter()
        .map(|j| alg.lattice().above(j).clone())
        .collect();
    filters.sort_by(mask_cmp);
    filters
}

/// The dual space of an algebra, points in canonical filter order.
pub fn dual_space(alg: &FiniteAlgebra) -> DualSpace {
    let filters = prime_filters(alg);
    let index: HashMap<&FixedBitSet, usize> = filters.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let phi = filters
        .iter()
        .map(|f| {
            let image = sets::from_iter(alg.size(), alg.elements().filter(|&x| !f.contains(alg.neg(x))));
            *index
                .get(&image)
                .expect("Birula-Rasiowa image of a prime filter is a prime filter")
        })
        .collect();
    let above = filters
        .iter()
        .map(|f| sets::from_iter(filters.len(), filters.iter().enumerate().filter(|(_, g)| f.is_subset(g)).map(|(i, _)| i)))
        .collect();
    DualSpace::from_above(Some(filters.clone()), above, phi)
        .expect("dual of a valid pm-algebra is a De Morgan space")
}

/// `η(a) = {P : a ∈ P}`
pub fn eta(space: &DualSpace, a: usize) -> FixedBitSet {
    let filters = space.filters.as_ref().expect("space carries its prime filters");
    sets::from_iter(space.len(), filters.iter().enumerate().filter(|(_, f)| f.contains(a)).map(|(i, _)| i))
}

/// Up-set algebra of a space, with the up-set behind each element.
#[derive(Clone, Debug)]
pub struct UpsetAlgebra {
    pub algebra: FiniteAlgebra,
    pub upsets: Vec<FixedBitSet>,
}

impl UpsetAlgebra {
    pub fn index_of(&self, set: &FixedBitSet) -> Option<usize> {
        self.upsets.iter().position(|u| u == set)
    }
}

pub fn upset_algebra(space: &DualSpace) -> Result<UpsetAlgebra> {
    upset_algebra_capped(space, DEFAULT_ELEMENT_CAP)
}

/// All up-sets of `space` ordered by bit mask, so `∅` is element 0 and the
/// full space is the last element.
pub fn upset_algebra_capped(space: &DualSpace, cap: usize) -> Result<UpsetAlgebra> {
    let n = space.len();
    let mut order: Vec<usize> = (0..n).collect();
    // points strictly above p are decided before p
    order.sort_by_key(|&p| std::cmp::Reverse(space.below[p].count_ones(..)));
    let mut upsets = Vec::new();
    let mut current = space.empty_set();
    enumerate_upsets(space, &order, 0, &mut current, &mut upsets, cap)?;
    upsets.sort_by(mask_cmp);

    let index: HashMap<&FixedBitSet, usize> = upsets.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let all = space.all_points();
    let neg: Vec<usize> = upsets
        .iter()
        .map(|u| {
            let mut c = all.clone();
            c.difference_with(&space.phi_image(u));
            index[&c]
        })
        .collect();
    let star: Vec<usize> = upsets
        .iter()
        .map(|u| {
            let mut c = all.clone();
            c.difference_with(&space.down_closure(u));
            index[&c]
        })
        .collect();
    let lattice = Lattice::from_leq(upsets.len(), |a, b| upsets[a].is_subset(&upsets[b]))
        .expect("up-sets form a lattice");
    let algebra = FiniteAlgebra::new(lattice, neg, Some(star))?;
    drop(index);
    Ok(UpsetAlgebra { algebra, upsets })
}

fn enumerate_upsets(
    space: &DualSpace,
    order: &[usize],
    depth: usize,
    current: &mut FixedBitSet,
    out: &mut Vec<FixedBitSet>,
    cap: usize,
) -> Result<()> {
    if depth == order.len() {
        if out.len() >= cap {
            return Err(cap_exceeded("up-set enumeration", format!("more than {cap}"), cap));
        }
        out.push(current.clone());
        return Ok(());
    }
    let p = order[depth];
    enumerate_upsets(space, order, depth + 1, current, out, cap)?;
    if space.above[p].ones().all(|q| q == p || current.contains(q)) {
        current.insert(p);
        enumerate_upsets(space, order, depth + 1, current, out, cap)?;
        current.set(p, false);
    }
    Ok(())
}

/// Whether `η` is an isomorphism of `alg` onto the up-set algebra of its dual.
pub fn roundtrip_isomorphic(alg: &FiniteAlgebra) -> bool {
    let space = dual_space(alg);
    let Ok(up) = upset_algebra(&space) else {
        return false;
    };
    if up.algebra.size() != alg.size() {
        return false;
    }
    let map: Vec<Option<usize>> = alg.elements().map(|a| up.index_of(&eta(&space, a))).collect();
    let Some(map) = map.into_iter().collect::<Option<Vec<usize>>>() else {
        return false;
    };
    let target = &up.algebra;
    let mut hit = vec![false; target.size()];
    for &y in &map {
        if std::mem::replace(&mut hit[y], true) {
            return false;
        }
    }
    alg.elements().all(|a| {
        map[alg.neg(a)] == target.neg(map[a])
            && map[alg.star(a)] == target.star(map[a])
            && alg.elements().all(|b| alg.leq(a, b) == target.leq(map[a], map[b]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraFile;

    fn chain(n: usize) -> FiniteAlgebra {
        FiniteAlgebra::from_file(&AlgebraFile {
            elements: n,
            covers: (1..n).map(|i| [i - 1, i]).collect(),
            neg: (0..n).rev().collect(),
            star: None,
            names: None,
        })
        .unwrap()
    }

    #[test]
    fn two_chain_dual_is_a_fixed_point() {
        let x = dual_space(&chain(2));
        assert_eq!(x.len(), 1);
        assert_eq!(x.phi(0), 0);
        assert_eq!(sets::to_vec(x.filter(0).unwrap()), vec![1]);
        assert_eq!(x.space_type(), SpaceType::Type1);
        assert!(x.body().is_clear());
    }

    #[test]
    fn four_chain_dual() {
        let x = dual_space(&chain(4));
        let filters: Vec<Vec<usize>> = (0..3).map(|p| sets::to_vec(x.filter(p).unwrap())).collect();
        assert_eq!(filters, vec![vec![3], vec![2, 3], vec![1, 2, 3]]);
        assert!(x.leq(0, 1) && x.leq(1, 2));
        assert_eq!(x.phi_map(), &[2, 1, 0]);
        assert_eq!(sets::to_vec(&x.body()), vec![1]);
        assert_eq!(x.space_type(), SpaceType::Type2);
    }

    #[test]
    fn five_chain_dual_is_type3() {
        let x = dual_space(&chain(5));
        let body = sets::to_vec(&x.body());
        assert_eq!(body.len(), 2);
        assert_eq!(x.phi(body[0]), body[1]);
        assert_eq!(x.space_type(), SpaceType::Type3);
    }

    #[test]
    fn upsets_of_point_and_chain() {
        let point = DualSpace::new(1, &[], vec![0]).unwrap();
        let two = upset_algebra(&point).unwrap().algebra;
        assert_eq!(two.size(), 2);
        assert_eq!(two.neg_map(), &[1, 0]);

        let chain3 = DualSpace::new(3, &[(0, 1), (1, 2)], vec![2, 1, 0]).unwrap();
        let four = upset_algebra(&chain3).unwrap().algebra;
        assert!(crate::algebra::is_isomorphic(&four, &chain(4)));
    }

    #[test]
    fn invalid_spaces_are_rejected() {
        assert!(DualSpace::new(2, &[(0, 1)], vec![0, 1]).is_err());
        assert!(DualSpace::new(2, &[], vec![1, 1]).is_err());
        assert!(DualSpace::new(2, &[(0, 1), (1, 0)], vec![1, 0]).is_err());
    }

    #[test]
    fn counterexample_space_is_other() {
        // m1, m2 minimal; Q < R body chain; U1 above everything, U2 misses R
        let (m1, m2, q, r, u1, u2) = (0, 1, 2, 3, 4, 5);
        let x = DualSpace::new(
            6,
            &[(m1, q), (q, r), (r, u1), (q, u2), (m2, r), (m2, u2)],
            vec![u1, u2, r, q, m1, m2],
        )
        .unwrap();
        assert!(x.is_kleene_space());
        assert_eq!(x.space_type(), SpaceType::Other);
        assert_eq!(sets::to_vec(&x.body()), vec![q, r]);
    }

    #[test]
    fn components_of_two_fixed_points() {
        let x = DualSpace::new(2, &[], vec![0, 1]).unwrap();
        assert_eq!(x.phi_components().len(), 2);
        let swapped = DualSpace::new(2, &[], vec![1, 0]).unwrap();
        assert_eq!(swapped.phi_components().len(), 1);
    }

    #[test]
    fn dot_names_points_in_order() {
        let x = dual_space(&chain(4));
        let dot = x.to_dot();
        assert!(dot.contains("P0 -> P1;"));
        assert!(dot.contains("P0 -> P2 [style=dashed"));
        assert!(!dot.contains("P0 -> P2;"));
    }

    #[test]
    fn roundtrip_on_chains() {
        for n in 2..7 {
            assert!(roundtrip_isomorphic(&chain(n)));
        }
    }
}
