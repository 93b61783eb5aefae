//! Equational bases of the subvarieties of Kleene pm-algebras and membership
//! deciders built on them.

use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::duality::dual_space;
use crate::error::{cap_exceeded, Error, Result};

use super::builtin::{beta, c, discriminator, gamma, t};
use super::{holds_capped, holds_over, CheckOutcome, CompiledTerm, Identity, Term, DEFAULT_EVAL_CAP};

fn x() -> Term {
    Term::var("x")
}

fn y() -> Term {
    Term::var("y")
}

/// `x ∧ x′ ≤ y ∨ y′`
pub fn kleene_law() -> Identity {
    Identity::leq(x().meet(x().neg()), y().join(y().neg()))
}

/// `C(x)′ ≤ C(x)`
pub fn pk0_law() -> Identity {
    Identity::leq(c(x()).neg(), c(x()))
}

/// `C(x) ∧ C(x)′ ≤ C(y)`
pub fn pk1_law() -> Identity {
    Identity::leq(t(x()), c(y()))
}

/// `x* ∧ γ(x, y) ≈ x*`
pub fn bpk_law() -> Identity {
    Identity::leq(x().star(), gamma(x(), y()))
}

/// `γ(x, y) ≈ γ(y, x)`
pub fn bpk1_law() -> Identity {
    Identity::new(gamma(x(), y()), gamma(y(), x()))
}

/// `C(x) ∧ C(x)′ ≈ C(x)′`
pub fn bpk0_law() -> Identity {
    Identity::new(t(x()), c(x()).neg())
}

/// `x* ≤ C(y) ∨ T(x)*`, the alternative form of the BPK law.
pub fn bpk_law_alternative() -> Identity {
    Identity::leq(x().star(), c(y()).join(t(x()).star()))
}

/// `β_n ≈ 1`
pub fn beta_law(n: usize) -> Result<Identity> {
    Ok(Identity::new(beta(n)?, Term::One))
}

/// Which join of varieties a [`JoinFlag`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum JoinKind {
    /// `BPK₀ ∨ V(B(n,3))`: BPK plus `C(y)′ ≤ C(y) ∨ β_n`.
    Bpk0,
    /// `BPK₁ ∨ V(B(n,3))`: BPK plus `C(y) ∧ C(y)′ ≤ C(z) ∨ β_n`.
    Bpk1,
}

impl JoinKind {
    pub fn label(self) -> &'static str {
        match self {
            JoinKind::Bpk0 => "BPK0",
            JoinKind::Bpk1 => "BPK1",
        }
    }

    /// The identity with `w` standing for the value of `β_n`.
    fn law(self) -> Identity {
        let w = Term::var("w");
        match self {
            JoinKind::Bpk0 => Identity::leq(c(y()).neg(), c(y()).join(w)),
            JoinKind::Bpk1 => Identity::leq(t(y()), c(Term::var("z")).join(w)),
        }
    }
}

/// How `β_n ≈ 1` is decided.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum BetaRoute {
    /// Every point of the dual lies below at most `n` maximal points.
    #[default]
    Dual,
    /// Exhaustive evaluation over all `n`-tuples.
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipQuery {
    /// Pairs `(n, m)` for the varieties `V(B(n, m))`, `m ∈ {1, 2, 3}`.
    pub generated: Vec<(usize, usize)>,
    /// Pairs `(kind, n)` for the join varieties.
    pub joins: Vec<(JoinKind, usize)>,
    pub beta_route: BetaRoute,
    pub eval_cap: u64,
}

impl Default for MembershipQuery {
    fn default() -> Self {
        let mut generated = Vec::new();
        let mut joins = Vec::new();
        for n in 1..=3 {
            for m in 1..=3 {
                generated.push((n, m));
            }
            joins.push((JoinKind::Bpk0, n));
            joins.push((JoinKind::Bpk1, n));
        }
        MembershipQuery {
            generated,
            joins,
            beta_route: BetaRoute::Dual,
            eval_cap: DEFAULT_EVAL_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratedFlag {
    pub n: usize,
    pub m: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinFlag {
    pub kind: JoinKind,
    pub n: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub pk: bool,
    pub pk0: bool,
    pub pk1: bool,
    pub bpk: bool,
    pub bpk0: bool,
    pub bpk1: bool,
    pub generated: Vec<GeneratedFlag>,
    pub joins: Vec<JoinFlag>,
}

impl Membership {
    /// Named flags in a fixed order.
    pub fn rows(&self) -> Vec<(String, bool)> {
        let mut rows = vec![
            ("PK".to_string(), self.pk),
            ("PK0".to_string(), self.pk0),
            ("PK1".to_string(), self.pk1),
            ("BPK".to_string(), self.bpk),
            ("BPK0".to_string(), self.bpk0),
            ("BPK1".to_string(), self.bpk1),
        ];
        for g in &self.generated {
            rows.push((format!("V(B({},{}))", g.n, g.m), g.holds));
        }
        for j in &self.joins {
            rows.push((format!("{} v V(B({},3))", j.kind.label(), j.n), j.holds));
        }
        rows
    }
}

/// Decides `L ⊨ β_n ≈ 1`.
pub fn satisfies_beta(alg: &FiniteAlgebra, n: usize, route: BetaRoute, cap: u64) -> Result<bool> {
    if n == 0 {
        return Err(Error::Domain("beta requires n >= 1".into()));
    }
    match route {
        BetaRoute::Dual => Ok(dual_space(alg).max_fan() <= n),
        BetaRoute::Exhaustive => Ok(holds_capped(alg, &beta_law(n)?, cap)?.holds()),
    }
}

/// The set of values taken by `β_n` on `L`, as a sorted list.
pub fn beta_values(alg: &FiniteAlgebra, n: usize, cap: u64) -> Result<Vec<usize>> {
    let term = beta(n)?;
    let vars = term.variables();
    let total = (alg.size() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if total > cap {
        return Err(cap_exceeded("beta value set", total, cap));
    }
    let compiled = CompiledTerm::new(&term, &vars)?;
    let mut seen = vec![false; alg.size()];
    let mut values = vec![alg.bottom(); n];
    let mut stack = Vec::new();
    let size = alg.size();
    if size == 0 {
        return Ok(Vec::new());
    }
    loop {
        seen[compiled.eval(alg, &values, &mut stack)] = true;
        let mut i = n;
        loop {
            if i == 0 {
                return Ok((0..size).filter(|&v| seen[v]).collect());
            }
            i -= 1;
            values[i] += 1;
            if values[i] < size {
                break;
            }
            values[i] = 0;
        }
    }
}

/// Decides membership in `BPK₀ ∨ V(B(n,3))` or `BPK₁ ∨ V(B(n,3))` given BPK.
///
/// The `n`-variable subterm `β_n` is evaluated once into its value set; the
/// remaining identity is checked with a fresh variable over that set.
pub fn satisfies_join(alg: &FiniteAlgebra, kind: JoinKind, n: usize, cap: u64) -> Result<CheckOutcome> {
    let law = kind.law();
    let values = beta_values(alg, n, cap)?;
    let vars = law.variables();
    let all: Vec<usize> = alg.elements().collect();
    let domains: Vec<Vec<usize>> = vars
        .iter()
        .map(|v| if v == "w" { values.clone() } else { all.clone() })
        .collect();
    holds_over(alg, &law, &vars, &domains, cap)
}

pub fn variety_membership(alg: &FiniteAlgebra) -> Result<Membership> {
    variety_membership_with(alg, &MembershipQuery::default())
}

pub fn variety_membership_with(alg: &FiniteAlgebra, query: &MembershipQuery) -> Result<Membership> {
    let cap = query.eval_cap;
    let check = |id: Identity| -> Result<bool> { Ok(holds_capped(alg, &id, cap)?.holds()) };
    let pk = check(kleene_law())?;
    let pk0 = pk && check(pk0_law())?;
    let pk1 = pk && check(pk1_law())?;
    let bpk = pk && check(bpk_law())?;
    let bpk1 = pk && check(bpk1_law())?;
    let bpk0 = bpk && check(bpk0_law())?;
    let mut generated = Vec::new();
    for &(n, m) in &query.generated {
        let base = match m {
            1 => bpk0,
            2 => bpk1,
            3 => bpk,
            _ => return Err(Error::Domain(format!("chain length {m} not in 1..=3"))),
        };
        let holds = base && satisfies_beta(alg, n, query.beta_route, cap)?;
        generated.push(GeneratedFlag { n, m, holds });
    }
    let mut joins = Vec::new();
    for &(kind, n) in &query.joins {
        let holds = bpk && satisfies_join(alg, kind, n, cap)?.holds();
        joins.push(JoinFlag { kind, n, holds });
    }
    Ok(Membership {
        pk,
        pk0,
        pk1,
        bpk,
        bpk0,
        bpk1,
        generated,
        joins,
    })
}

/// Membership in BPK₀ by its equational basis.
pub fn in_bpk0(alg: &FiniteAlgebra) -> Result<bool> {
    let check = |id: Identity| -> Result<bool> { Ok(holds_capped(alg, &id, DEFAULT_EVAL_CAP)?.holds()) };
    Ok(check(kleene_law())? && check(bpk_law())? && check(bpk0_law())?)
}

/// Membership in BPK₀ by the basis built from `C`: PK, the alternative BPK law
/// and `C(x)′ ≤ C(x)`.
pub fn in_bpk0_alternative(alg: &FiniteAlgebra) -> Result<bool> {
    let check = |id: Identity| -> Result<bool> { Ok(holds_capped(alg, &id, DEFAULT_EVAL_CAP)?.holds()) };
    Ok(check(kleene_law())? && check(bpk_law_alternative())? && check(pk0_law())?)
}

/// First triple on which `t(a, b, c)` does not act as the discriminator.
pub fn discriminator_failure(alg: &FiniteAlgebra) -> Result<Option<[usize; 3]>> {
    let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let term = CompiledTerm::new(
        &discriminator(Term::var("x"), Term::var("y"), Term::var("z")),
        &vars,
    )?;
    let mut stack = Vec::new();
    for a in alg.elements() {
        for b in alg.elements() {
            for c in alg.elements() {
                let expected = if a == b { c } else { a };
                if term.eval(alg, &[a, b, c], &mut stack) != expected {
                    return Ok(Some([a, b, c]));
                }
            }
        }
    }
    Ok(None)
}

/// Whether the discriminator term acts as such on a simple member of BPK₀.
pub fn discriminator_check(alg: &FiniteAlgebra) -> Result<bool> {
    if !in_bpk0(alg)? || !crate::congruence::is_simple(alg) {
        return Err(Error::Domain("discriminator check requires a simple algebra in BPK0".into()));
    }
    Ok(discriminator_failure(alg)?.is_none())
}
