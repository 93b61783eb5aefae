//! Isomorphism search between finite pm-algebras.
//!
//! A lattice isomorphism of finite distributive lattices is fixed by its
//! action on join-irreducibles, so the search backtracks over those only,
//! pruned by per-element profiles, and then checks `′` and `*` on the
//! extension.

use super::FiniteAlgebra;
use crate::error::{cap_exceeded, Result};

type Profile = (usize, usize, usize, bool, bool, usize, usize);

fn profiles(alg: &FiniteAlgebra) -> Vec<Profile> {
    let heights = alg.lattice().heights();
    alg.elements()
        .map(|x| {
            (
                heights[x],
                alg.lattice().below(x).count_ones(..),
                alg.lattice().above(x).count_ones(..),
                alg.neg(x) == x,
                alg.star(x) == alg.bottom(),
                heights[alg.neg(x)],
                heights[alg.star(x)],
            )
        })
        .collect()
}

pub fn is_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    find_isomorphism(a, b).is_some()
}

pub fn is_isomorphic_capped(a: &FiniteAlgebra, b: &FiniteAlgebra, cap: usize) -> Result<bool> {
    let n = a.size().max(b.size());
    if n > cap {
        return Err(cap_exceeded("is_isomorphic", n, cap));
    }
    Ok(is_isomorphic(a, b))
}

/// An isomorphism `a → b` as an image table, if one exists.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Vec<usize>> {
    if a.size() != b.size() {
        return None;
    }
    let pa = profiles(a);
    let pb = profiles(b);
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    let mut ja = a.lattice().join_irreducibles();
    let jb = b.lattice().join_irreducibles();
    if ja.len() != jb.len() {
        return None;
    }
    ja.sort_by_key(|&x| (pa[x].0, x));
    let candidates: Vec<Vec<usize>> = ja
        .iter()
        .map(|&x| jb.iter().copied().filter(|&y| pb[y] == pa[x]).collect())
        .collect();
    let mut search = Search {
        a,
        b,
        ja: &ja,
        candidates: &candidates,
        image: Vec::with_capacity(ja.len()),
        used: vec![false; b.size()],
    };
    search.run()
}

struct Search<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    ja: &'a [usize],
    candidates: &'a [Vec<usize>],
    image: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn run(&mut self) -> Option<Vec<usize>> {
        let depth = self.image.len();
        if depth == self.ja.len() {
            return self.extend();
        }
        let x = self.ja[depth];
        for &y in &self.candidates[depth] {
            if self.used[y] {
                continue;
            }
            let consistent = self.ja[..depth].iter().zip(&self.image).all(|(&px, &py)| {
                self.a.leq(px, x) == self.b.leq(py, y) && self.a.leq(x, px) == self.b.leq(y, py)
            });
            if !consistent {
                continue;
            }
            self.used[y] = true;
            self.image.push(y);
            if let Some(found) = self.run() {
                return Some(found);
            }
            self.image.pop();
            self.used[y] = false;
        }
        None
    }

    fn extend(&self) -> Option<Vec<usize>> {
        let (a, b) = (self.a, self.b);
        let map: Vec<usize> = a
            .elements()
            .map(|x| {
                self.ja
                    .iter()
                    .zip(&self.image)
                    .filter(|(&j, _)| a.leq(j, x))
                    .fold(b.bottom(), |acc, (_, &y)| b.join(acc, y))
            })
            .collect();
        let mut hit = vec![false; b.size()];
        for &y in &map {
            if std::mem::replace(&mut hit[y], true) {
                return None;
            }
        }
        let preserves = a.elements().all(|x| {
            map[a.neg(x)] == b.neg(map[x])
                && map[a.star(x)] == b.star(map[x])
                && a.elements().all(|y| a.leq(x, y) == b.leq(map[x], map[y]))
        });
        preserves.then_some(map)
    }
}
