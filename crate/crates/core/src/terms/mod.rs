//! Terms over `{0, 1, ∧, ∨, ′, *}`, identities, and exhaustive checking of
//! identities on finite algebras.

pub mod builtin;
mod parser;
pub mod variety;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::error::{cap_exceeded, Error, Result};

pub use parser::{parse, parse_identity, parse_term, Parsed};

/// Default bound on `|L|^(#variables)` for exhaustive checks.
pub const DEFAULT_EVAL_CAP: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Star(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn meet(self, other: Term) -> Term {
        Term::Meet(Box::new(self), Box::new(other))
    }

    pub fn join(self, other: Term) -> Term {
        Term::Join(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Term {
        Term::Neg(Box::new(self))
    }

    pub fn star(self) -> Term {
        Term::Star(Box::new(self))
    }

    /// Variables in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Zero | Term::One => {}
            Term::Meet(a, b) | Term::Join(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Neg(a) | Term::Star(a) => a.collect_vars(out),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Zero | Term::One => 1,
            Term::Meet(a, b) | Term::Join(a, b) => 1 + a.size() + b.size(),
            Term::Neg(a) | Term::Star(a) => 1 + a.size(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let (own, wrap) = match self {
            Term::Join(..) => (1, prec > 1),
            Term::Meet(..) => (2, prec > 2),
            _ => (3, false),
        };
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Term::Var(v) => f.write_str(v)?,
            Term::Zero => f.write_str("0")?,
            Term::One => f.write_str("1")?,
            Term::Join(a, b) => {
                a.fmt_prec(f, own)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, own + 1)?;
            }
            Term::Meet(a, b) => {
                a.fmt_prec(f, own)?;
                f.write_str(" & ")?;
                b.fmt_prec(f, own + 1)?;
            }
            Term::Neg(a) => {
                a.fmt_prec(f, 3)?;
                f.write_str("'")?;
            }
            Term::Star(a) => {
                a.fmt_prec(f, 3)?;
                f.write_str("*")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// An identity `lhs ≈ rhs`. Inequalities `s ≤ t` are stored as `s ∧ t ≈ s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    pub fn leq(lower: Term, upper: Term) -> Self {
        Identity {
            lhs: lower.clone().meet(upper),
            rhs: lower,
        }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut vars = self.lhs.variables();
        for v in self.rhs.variables() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ {}", self.lhs, self.rhs)
    }
}

pub type Assignment = BTreeMap<String, usize>;

/// Evaluates a term by structural recursion.
pub fn eval(alg: &FiniteAlgebra, term: &Term, assignment: &Assignment) -> Result<usize> {
    Ok(match term {
        Term::Var(v) => *assignment
            .get(v)
            .ok_or_else(|| Error::UnboundVariable(v.clone()))?,
        Term::Zero => alg.bottom(),
        Term::One => alg.top(),
        Term::Meet(a, b) => alg.meet(eval(alg, a, assignment)?, eval(alg, b, assignment)?),
        Term::Join(a, b) => alg.join(eval(alg, a, assignment)?, eval(alg, b, assignment)?),
        Term::Neg(a) => alg.neg(eval(alg, a, assignment)?),
        Term::Star(a) => alg.star(eval(alg, a, assignment)?),
    })
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Var(usize),
    Zero,
    One,
    Meet,
    Join,
    Neg,
    Star,
}

/// A term flattened to postfix over numbered variable slots.
#[derive(Clone, Debug)]
pub struct CompiledTerm {
    ops: Vec<Op>,
}

impl CompiledTerm {
    pub fn new(term: &Term, variables: &[String]) -> Result<Self> {
        let mut ops = Vec::with_capacity(term.size());
        compile_into(term, variables, &mut ops)?;
        Ok(CompiledTerm { ops })
    }

    pub fn eval(&self, alg: &FiniteAlgebra, values: &[usize], stack: &mut Vec<usize>) -> usize {
        stack.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Var(i) => values[i],
                Op::Zero => alg.bottom(),
                Op::One => alg.top(),
                Op::Meet => {
                    let b = stack.pop().expect("stack");
                    let a = stack.pop().expect("stack");
                    alg.meet(a, b)
                }
                Op::Join => {
                    let b = stack.pop().expect("stack");
                    let a = stack.pop().expect("stack");
                    alg.join(a, b)
                }
                Op::Neg => {
                    let a = stack.pop().expect("stack");
                    alg.neg(a)
                }
                Op::Star => {
                    let a = stack.pop().expect("stack");
                    alg.star(a)
                }
            };
            stack.push(v);
        }
        stack.pop().expect("non-empty term")
    }
}

fn compile_into(term: &Term, variables: &[String], ops: &mut Vec<Op>) -> Result<()> {
    match term {
        Term::Var(v) => {
            let i = variables
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::UnboundVariable(v.clone()))?;
            ops.push(Op::Var(i));
        }
        Term::Zero => ops.push(Op::Zero),
        Term::One => ops.push(Op::One),
        Term::Meet(a, b) => {
            compile_into(a, variables, ops)?;
            compile_into(b, variables, ops)?;
            ops.push(Op::Meet);
        }
        Term::Join(a, b) => {
            compile_into(a, variables, ops)?;
            compile_into(b, variables, ops)?;
            ops.push(Op::Join);
        }
        Term::Neg(a) => {
            compile_into(a, variables, ops)?;
            ops.push(Op::Neg);
        }
        Term::Star(a) => {
            compile_into(a, variables, ops)?;
            ops.push(Op::Star);
        }
    }
    Ok(())
}

/// Result of an exhaustive identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub variables: Vec<String>,
    /// Least failing assignment (first variable most significant).
    pub counterexample: Option<Vec<usize>>,
}

impl CheckOutcome {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn witness(&self) -> Option<Assignment> {
        self.counterexample
            .as_ref()
            .map(|values| self.variables.iter().cloned().zip(values.iter().copied()).collect())
    }
}

pub fn holds(alg: &FiniteAlgebra, identity: &Identity) -> Result<CheckOutcome> {
    holds_capped(alg, identity, DEFAULT_EVAL_CAP)
}

pub fn holds_capped(alg: &FiniteAlgebra, identity: &Identity, cap: u64) -> Result<CheckOutcome> {
    let vars = identity.variables();
    let domain: Vec<usize> = alg.elements().collect();
    let domains = vec![domain; vars.len()];
    holds_over(alg, identity, &vars, &domains, cap)
}

/// Checks `identity` with variable `vars[i]` ranging over `domains[i]`.
///
/// Assignments are scanned in lexicographic order of domain positions; the
/// reported counterexample is the least one whatever the thread schedule.
pub fn holds_over(
    alg: &FiniteAlgebra,
    identity: &Identity,
    vars: &[String],
    domains: &[Vec<usize>],
    cap: u64,
) -> Result<CheckOutcome> {
    assert_eq!(vars.len(), domains.len());
    let lhs = CompiledTerm::new(&identity.lhs, vars)?;
    let rhs = CompiledTerm::new(&identity.rhs, vars)?;
    let total = domains
        .iter()
        .try_fold(1u64, |acc, d| acc.checked_mul(d.len() as u64))
        .unwrap_or(u64::MAX);
    if total > cap {
        return Err(cap_exceeded("identity check", total, cap));
    }
    let outcome = |counterexample| CheckOutcome {
        variables: vars.to_vec(),
        counterexample,
    };
    if domains.iter().any(|d| d.is_empty()) {
        return Ok(outcome(None));
    }
    if vars.is_empty() {
        let mut stack = Vec::new();
        let ok = lhs.eval(alg, &[], &mut stack) == rhs.eval(alg, &[], &mut stack);
        return Ok(outcome((!ok).then(Vec::new)));
    }
    let found = (0..domains[0].len()).into_par_iter().find_map_first(|first| {
        let mut pos = vec![0usize; vars.len()];
        pos[0] = first;
        let mut values: Vec<usize> = pos.iter().zip(domains).map(|(&p, d)| d[p]).collect();
        let mut stack = Vec::new();
        loop {
            if lhs.eval(alg, &values, &mut stack) != rhs.eval(alg, &values, &mut stack) {
                return Some(values);
            }
            // odometer over positions 1.., position 0 fixed
            let mut i = vars.len() - 1;
            loop {
                if i == 0 {
                    return None;
                }
                pos[i] += 1;
                if pos[i] < domains[i].len() {
                    values[i] = domains[i][pos[i]];
                    break;
                }
                pos[i] = 0;
                values[i] = domains[i][0];
                i -= 1;
            }
        }
    });
    Ok(outcome(found))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_si, two_chain, SiDescriptor};

    #[test]
    fn display_round_trips_through_parser() {
        for text in ["x & (y | z)", "(x & y)' | z*", "x | (y | z)", "(x | y) & z'*", "0 | 1'"] {
            let t = parse_term(text).unwrap();
            assert_eq!(t.to_string(), text);
        }
    }

    #[test]
    fn eval_basic() {
        let two = two_chain();
        let c = builtin::c(Term::var("x"));
        let a: Assignment = [("x".to_string(), two.top())].into();
        assert_eq!(eval(&two, &c, &a).unwrap(), two.top());
        let a: Assignment = [("x".to_string(), 0)].into();
        assert_eq!(eval(&two, &Term::var("x"), &a).unwrap(), 0);
        assert!(matches!(
            eval(&two, &Term::var("y"), &a),
            Err(Error::UnboundVariable(v)) if v == "y"
        ));
    }

    #[test]
    fn t_of_d_is_below_d_negation_on_four_chain() {
        let l = build_si(SiDescriptor::new(1, 2).unwrap());
        let d = l.least_dense().unwrap();
        let a: Assignment = [("x".to_string(), d)].into();
        let t = eval(&l, &builtin::t(Term::var("x")), &a).unwrap();
        assert!(l.leq(t, l.neg(d)));
    }

    #[test]
    fn trivial_identity_holds() {
        let l = build_si(SiDescriptor::new(2, 1).unwrap());
        let id = parse_identity("x ~ x").unwrap();
        assert!(holds(&l, &id).unwrap().holds());
    }

    #[test]
    fn kleene_law_on_b21() {
        let l = build_si(SiDescriptor::new(2, 1).unwrap());
        let id = parse_identity("x & x' <= y | y'").unwrap();
        assert!(holds(&l, &id).unwrap().holds());
    }

    #[test]
    fn pk0_law_fails_on_four_chain_with_least_witness() {
        let l = build_si(SiDescriptor::new(1, 2).unwrap());
        let id = parse_identity("C(x)' <= C(x)").unwrap();
        let out = holds(&l, &id).unwrap();
        assert!(!out.holds());
        let x = out.counterexample.clone().unwrap()[0];
        // brute-force: the least failing element
        let expected = l
            .elements()
            .find(|&x| {
                let a: Assignment = [("x".to_string(), x)].into();
                eval(&l, &id.lhs, &a).unwrap() != eval(&l, &id.rhs, &a).unwrap()
            })
            .unwrap();
        assert_eq!(x, expected);
    }

    #[test]
    fn cap_is_enforced() {
        let l = build_si(SiDescriptor::new(2, 1).unwrap());
        let id = parse_identity("x & y & z ~ z & y & x").unwrap();
        assert!(matches!(holds_capped(&l, &id, 100), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn ground_identities() {
        let l = two_chain();
        assert!(holds(&l, &parse_identity("0' ~ 1").unwrap()).unwrap().holds());
        let out = holds(&l, &parse_identity("0 ~ 1").unwrap()).unwrap();
        assert_eq!(out.counterexample, Some(vec![]));
    }
}
