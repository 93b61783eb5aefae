//! Named term operations.

use crate::error::{Error, Result};

use super::Term;

/// `C(x) = (x ∧ x′) ∨ (x ∧ x′)*`
pub fn c(x: Term) -> Term {
    let m = x.clone().meet(x.neg());
    m.clone().join(m.star())
}

/// `T(x) = C(x) ∧ C(x)′`
pub fn t(x: Term) -> Term {
    let cx = c(x);
    cx.clone().meet(cx.neg())
}

/// `γ(x, y) = T(x)* ∨ C(y)`
pub fn gamma(x: Term, y: Term) -> Term {
    t(x).star().join(c(y))
}

/// `F(x) = T(x)* ∧ x**`
pub fn f(x: Term) -> Term {
    t(x.clone()).star().meet(x.star().star())
}

/// `a⁺ = a′*′`
pub fn plus(a: Term) -> Term {
    a.neg().star().neg()
}

/// `a → b = (a* ∨ b**)** ∧ ((a ∨ a*)⁺ ∨ a* ∨ b ∨ b*)`
pub fn heyting_imp(a: Term, b: Term) -> Term {
    let left = a.clone().star().join(b.clone().star().star()).star().star();
    let right = plus(a.clone().join(a.clone().star()))
        .join(a.star())
        .join(b.clone())
        .join(b.star());
    left.meet(right)
}

/// Ternary discriminator `t(x, y, z)`: `z` when `x = y`, otherwise `x`, on
/// simple members of the variety it is built for.
pub fn discriminator(x: Term, y: Term, z: Term) -> Term {
    let eq = heyting_imp(x.clone(), y.clone()).meet(heyting_imp(y, x.clone()));
    let fe = f(eq);
    fe.clone().meet(z).join(fe.star().meet(x))
}

/// `β_n` on the given arguments; `args.len()` must be at least 1.
pub fn beta_of(args: Vec<Term>) -> Result<Term> {
    if args.is_empty() {
        return Err(Error::Domain("beta requires n >= 1".into()));
    }
    let conj = |replace: Option<usize>| {
        args.iter()
            .enumerate()
            .map(|(j, a)| if Some(j) == replace { a.clone().star() } else { a.clone() })
            .reduce(Term::meet)
            .expect("non-empty")
    };
    let mut out = conj(None).star();
    for i in 0..args.len() {
        out = out.join(conj(Some(i)).star());
    }
    Ok(out)
}

/// `β_n(x0, …, x{n-1})`.
pub fn beta(n: usize) -> Result<Term> {
    beta_of((0..n).map(|i| Term::var(&format!("x{i}"))).collect())
}

/// Looks up a named operation applied to the variables `x, y, z`.
///
/// `beta` takes its arity from `n` and uses variables `x0..`.
pub fn builtin(name: &str, n: Option<usize>) -> Result<Term> {
    let (x, y, z) = (Term::var("x"), Term::var("y"), Term::var("z"));
    Ok(match name {
        "C" => c(x),
        "T" => t(x),
        "gamma" => gamma(x, y),
        "F" => f(x),
        "plus" => plus(x),
        "heyting_imp" => heyting_imp(x, y),
        "discriminator" => discriminator(x, y, z),
        "beta" => beta(n.ok_or_else(|| Error::Domain("beta requires n".into()))?)?,
        other => return Err(Error::Domain(format!("unknown builtin `{other}`"))),
    })
}

pub const BUILTIN_NAMES: &[&str] = &[
    "C",
    "T",
    "gamma",
    "F",
    "plus",
    "heyting_imp",
    "discriminator",
    "beta",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_one_shape() {
        let b = beta(1).unwrap();
        assert_eq!(b.to_string(), "x0* | x0**");
    }

    #[test]
    fn beta_zero_rejected() {
        assert!(beta(0).is_err());
        assert!(builtin("beta", None).is_err());
        assert!(builtin("nope", None).is_err());
    }

    #[test]
    fn beta_variables() {
        assert_eq!(beta(3).unwrap().variables(), vec!["x0", "x1", "x2"]);
    }

    #[test]
    fn all_names_resolve() {
        for name in BUILTIN_NAMES {
            builtin(name, Some(2)).unwrap();
        }
    }
}
