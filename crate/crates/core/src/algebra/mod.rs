//! Finite pseudocomplemented De Morgan algebras (pm-algebras).
//!
//! An algebra is stored as an explicit partial order with cached meet and
//! join tables, plus the De Morgan negation `′` and the pseudocomplement `*`
//! as lookup tables over element indices.

mod decompose;
mod iso;
mod lattice;

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use decompose::{decompose_into_simples, SimpleFactor};
pub use iso::{find_isomorphism, is_isomorphic, is_isomorphic_capped};
pub use lattice::Lattice;

/// Soft cap on the element count for cubic-or-worse checks.
pub const DEFAULT_ELEMENT_CAP: usize = 4096;

/// On-disk algebra document. Arrays are 0-indexed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub elements: usize,
    pub covers: Vec<[usize; 2]>,
    pub neg: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl AlgebraFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("algebra file serializes")
    }

    fn check_structure(&self) -> Result<()> {
        let n = self.elements;
        if n == 0 {
            return Err(Error::Malformed("`elements` must be at least 1".into()));
        }
        for (i, &[lo, hi]) in self.covers.iter().enumerate() {
            if lo >= n || hi >= n {
                return Err(Error::Malformed(format!(
                    "covers[{i}] = [{lo}, {hi}] refers past {n} elements"
                )));
            }
        }
        check_map("neg", &self.neg, n)?;
        if let Some(star) = &self.star {
            check_map("star", star, n)?;
        }
        if let Some(names) = &self.names {
            if names.len() != n {
                return Err(Error::Malformed(format!(
                    "`names` has {} entries, expected {n}",
                    names.len()
                )));
            }
        }
        Ok(())
    }
}

fn check_map(field: &str, map: &[usize], n: usize) -> Result<()> {
    if map.len() != n {
        return Err(Error::Malformed(format!(
            "`{field}` has {} entries, expected {n}",
            map.len()
        )));
    }
    if let Some((i, &v)) = map.iter().enumerate().find(|(_, &v)| v >= n) {
        return Err(Error::Malformed(format!("{field}[{i}] = {v} is out of range")));
    }
    Ok(())
}

/// One failed axiom with the least witness tuple found for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<usize>,
}

impl Violation {
    pub fn new(axiom: &str, witness: impl IntoIterator<Item = usize>) -> Self {
        Violation {
            axiom: axiom.to_string(),
            witness: witness.into_iter().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport {
            passed: violations.is_empty(),
            violations,
        }
    }

    pub fn has(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn summary(&self) -> String {
        if self.passed {
            return "all axioms hold".into();
        }
        self.violations
            .iter()
            .map(|v| format!("{} {:?}", v.axiom, v.witness))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Checks raw algebra data against the pm-algebra axioms.
///
/// Returns `Err` only for structural problems (bad indices, wrong array
/// lengths); axiom failures are listed in the report.
pub fn validate(file: &AlgebraFile) -> Result<ValidationReport> {
    validate_capped(file, DEFAULT_ELEMENT_CAP)
}

pub fn validate_capped(file: &AlgebraFile, cap: usize) -> Result<ValidationReport> {
    file.check_structure()?;
    if file.elements > cap {
        return Err(crate::error::cap_exceeded("validate", file.elements, cap));
    }
    let covers: Vec<(usize, usize)> = file.covers.iter().map(|&[a, b]| (a, b)).collect();
    let lattice = match Lattice::from_covers(file.elements, &covers) {
        Ok(l) => l,
        Err(violations) => return Ok(ValidationReport::from_violations(violations)),
    };
    Ok(ValidationReport::from_violations(operation_violations(
        &lattice,
        &file.neg,
        file.star.as_deref(),
    )))
}

fn operation_violations(lattice: &Lattice, neg: &[usize], star: Option<&[usize]>) -> Vec<Violation> {
    let n = lattice.size();
    let mut out = Vec::new();
    if let Some((x, y, z)) = lattice.distributivity_witness() {
        out.push(Violation::new("distributivity", [x, y, z]));
    }
    if let Some(x) = (0..n).find(|&x| neg[neg[x]] != x) {
        out.push(Violation::new("involution", [x]));
    }
    'dm: for x in 0..n {
        for y in 0..n {
            if neg[lattice.meet(x, y)] != lattice.join(neg[x], neg[y]) {
                out.push(Violation::new("de-morgan", [x, y]));
                break 'dm;
            }
        }
    }
    if neg[lattice.bottom()] != lattice.top() {
        out.push(Violation::new("negation-of-zero", [lattice.bottom()]));
    }
    match star {
        Some(star) => {
            'pc: for (a, &sa) in star.iter().enumerate() {
                for b in 0..n {
                    let annihilates = lattice.meet(a, b) == lattice.bottom();
                    if annihilates != lattice.leq(b, sa) {
                        out.push(Violation::new("pseudocomplement", [a, b]));
                        break 'pc;
                    }
                }
            }
        }
        None => {
            if let Err(a) = lattice.pseudocomplements() {
                out.push(Violation::new("pseudocomplement-exists", [a]));
            }
        }
    }
    out
}

/// `a* = max{b : a ∧ b = 0}` for every element.
pub fn compute_star(lattice: &Lattice) -> Result<Vec<usize>> {
    lattice.pseudocomplements().map_err(Error::NotPseudocomplemented)
}

/// A validated finite pm-algebra. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    lattice: Lattice,
    neg: Vec<usize>,
    star: Vec<usize>,
    names: Option<Vec<String>>,
}

impl FiniteAlgebra {
    /// Equips a lattice with a negation and (optionally) a pseudocomplement.
    /// A missing `star` is computed from the order; a supplied one is checked.
    pub fn new(lattice: Lattice, neg: Vec<usize>, star: Option<Vec<usize>>) -> Result<Self> {
        let n = lattice.size();
        check_map("neg", &neg, n)?;
        if let Some(s) = &star {
            check_map("star", s, n)?;
        }
        let violations = operation_violations(&lattice, &neg, star.as_deref());
        if !violations.is_empty() {
            return Err(Error::InvalidAlgebra(ValidationReport::from_violations(violations)));
        }
        let star = match star {
            Some(s) => s,
            None => compute_star(&lattice)?,
        };
        Ok(FiniteAlgebra {
            lattice,
            neg,
            star,
            names: None,
        })
    }

    pub fn from_file(file: &AlgebraFile) -> Result<Self> {
        Self::from_file_capped(file, DEFAULT_ELEMENT_CAP)
    }

    pub fn from_file_capped(file: &AlgebraFile, cap: usize) -> Result<Self> {
        let report = validate_capped(file, cap)?;
        if !report.passed {
            return Err(Error::InvalidAlgebra(report));
        }
        let covers: Vec<(usize, usize)> = file.covers.iter().map(|&[a, b]| (a, b)).collect();
        let lattice = Lattice::from_covers(file.elements, &covers)
            .map_err(|v| Error::InvalidAlgebra(ValidationReport::from_violations(v)))?;
        let star = match &file.star {
            Some(s) => s.clone(),
            None => compute_star(&lattice)?,
        };
        Ok(FiniteAlgebra {
            lattice,
            neg: file.neg.clone(),
            star,
            names: file.names.clone(),
        })
    }

    pub fn to_file(&self) -> AlgebraFile {
        AlgebraFile {
            elements: self.size(),
            covers: self.lattice.covers().into_iter().map(|(a, b)| [a, b]).collect(),
            neg: self.neg.clone(),
            star: Some(self.star.clone()),
            names: self.names.clone(),
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.size(), "one name per element");
        self.names = Some(names);
        self
    }

    pub fn without_names(mut self) -> Self {
        self.names = None;
        self
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn size(&self) -> usize {
        self.lattice.size()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    pub fn is_trivial(&self) -> bool {
        self.size() == 1
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.lattice.leq(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.lattice.meet(a, b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.lattice.join(a, b)
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn star(&self, a: usize) -> usize {
        self.star[a]
    }

    pub fn neg_map(&self) -> &[usize] {
        &self.neg
    }

    pub fn star_map(&self) -> &[usize] {
        &self.star
    }

    pub fn bottom(&self) -> usize {
        self.lattice.bottom()
    }

    pub fn top(&self) -> usize {
        self.lattice.top()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name(&self, a: usize) -> String {
        match &self.names {
            Some(names) => names[a].clone(),
            None => a.to_string(),
        }
    }

    /// Least pair `(a, b)` violating `a ∧ a′ ≤ b ∨ b′`, if any.
    pub fn kleene_witness(&self) -> Option<(usize, usize)> {
        for a in self.elements() {
            let lhs = self.meet(a, self.neg(a));
            for b in self.elements() {
                if !self.leq(lhs, self.join(b, self.neg(b))) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_kleene(&self) -> bool {
        self.kleene_witness().is_none()
    }

    /// `{a : a* = 0}`
    pub fn dense_elements(&self) -> Vec<usize> {
        self.elements().filter(|&a| self.star(a) == self.bottom()).collect()
    }

    pub fn least_dense(&self) -> Option<usize> {
        let dense = self.dense_elements();
        dense
            .iter()
            .copied()
            .find(|&d| dense.iter().all(|&e| self.leq(d, e)))
    }

    /// `{x : x′ = x}`
    pub fn fixed_points(&self) -> Vec<usize> {
        self.elements().filter(|&a| self.neg(a) == a).collect()
    }

    /// Elements of the closed interval `[lo, hi]`.
    pub fn interval(&self, lo: usize, hi: usize) -> FixedBitSet {
        let mut set = self.lattice.above(lo).clone();
        set.intersect_with(self.lattice.below(hi));
        set
    }

    /// Componentwise product; `(a, b)` has index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteAlgebra) -> FiniteAlgebra {
        let n2 = other.size();
        let n = self.size() * n2;
        let lattice = self.lattice.product(&other.lattice);
        let neg = (0..n).map(|x| self.neg(x / n2) * n2 + other.neg(x % n2)).collect();
        let star = (0..n).map(|x| self.star(x / n2) * n2 + other.star(x % n2)).collect();
        let names = (0..n)
            .map(|x| format!("({},{})", self.name(x / n2), other.name(x % n2)))
            .collect();
        FiniteAlgebra {
            lattice,
            neg,
            star,
            names: Some(names),
        }
    }

    /// Relabels elements: old element `x` becomes `perm[x]`.
    pub fn permuted(&self, perm: &[usize]) -> FiniteAlgebra {
        let n = self.size();
        assert_eq!(perm.len(), n);
        let mut inv = vec![0; n];
        for (x, &p) in perm.iter().enumerate() {
            inv[p] = x;
        }
        let lattice = Lattice::from_leq(n, |a, b| self.leq(inv[a], inv[b]))
            .expect("relabelling preserves the lattice");
        let neg = (0..n).map(|y| perm[self.neg(inv[y])]).collect();
        let star = (0..n).map(|y| perm[self.star(inv[y])]).collect();
        let names = self
            .names
            .as_ref()
            .map(|names| (0..n).map(|y| names[inv[y]].clone()).collect());
        FiniteAlgebra {
            lattice,
            neg,
            star,
            names,
        }
    }

    /// The subalgebra on `members`, which must be closed under all
    /// operations. Element `i` of the result is `members[i]`.
    pub fn restrict(&self, members: &[usize]) -> Result<FiniteAlgebra> {
        let n = self.size();
        let mut index = vec![usize::MAX; n];
        for (i, &m) in members.iter().enumerate() {
            index[m] = i;
        }
        let closed = |x: usize| index[x] != usize::MAX;
        let ops_closed = members.iter().all(|&a| {
            closed(self.neg(a))
                && closed(self.star(a))
                && members
                    .iter()
                    .all(|&b| closed(self.meet(a, b)) && closed(self.join(a, b)))
        });
        if !ops_closed || !closed(self.bottom()) || !closed(self.top()) {
            return Err(Error::Domain("element set is not closed under the operations".into()));
        }
        let lattice = Lattice::from_leq(members.len(), |a, b| self.leq(members[a], members[b]))
            .expect("a subalgebra is a lattice");
        let neg = members.iter().map(|&a| index[self.neg(a)]).collect();
        let star = members.iter().map(|&a| index[self.star(a)]).collect();
        let names = members.iter().map(|&a| self.name(a)).collect();
        Ok(FiniteAlgebra {
            lattice,
            neg,
            star,
            names: Some(names),
        })
    }

    /// Assembles an algebra from parts already known to be valid.
    pub(crate) fn from_trusted(lattice: Lattice, neg: Vec<usize>, star: Vec<usize>) -> Self {
        FiniteAlgebra {
            lattice,
            neg,
            star,
            names: None,
        }
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>8} {:>8} {:>8}", "x", "x'", "x*")?;
        for a in self.elements() {
            writeln!(
                f,
                "{:>8} {:>8} {:>8}",
                self.name(a),
                self.name(self.neg(a)),
                self.name(self.star(a))
            )?;
        }
        Ok(())
    }
}
