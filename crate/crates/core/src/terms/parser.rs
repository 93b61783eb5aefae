use crate::error::{Error, Result};

use super::builtin;
use super::{Identity, Term};

/// Either a bare term or an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Term(Term),
    Identity(Identity),
}

peg::parser! {
    grammar dsl() for str {
        rule _ = quiet!{[' ' | '\t' | '\r' | '\n']*}

        rule ident() -> String
            = s:$(['a'..='z'] ['a'..='z' | '0'..='9']*) { s.to_string() }

        rule number() -> usize
            = n:$(['0'..='9']+) {? n.parse().or(Err("number")) }

        rule args() -> Vec<Term> = "(" _ a:(expr() ** (_ "," _)) _ ")" { a }

        rule one(name: &'static str) -> Term
            = a:args() {? match <[Term; 1]>::try_from(a) {
                Ok([x]) => Ok(x),
                Err(_) => Err(name),
            } }

        rule atom() -> Term
            = "C" _ x:one("one argument") { builtin::c(x) }
            / "T" _ x:one("one argument") { builtin::t(x) }
            / "F" _ x:one("one argument") { builtin::f(x) }
            / "P" _ x:one("one argument") { builtin::plus(x) }
            / "G" _ a:args() {? match <[Term; 2]>::try_from(a) {
                Ok([x, y]) => Ok(builtin::gamma(x, y)),
                Err(_) => Err("two arguments"),
            } }
            / "D" _ a:args() {? match <[Term; 3]>::try_from(a) {
                Ok([x, y, z]) => Ok(builtin::discriminator(x, y, z)),
                Err(_) => Err("three arguments"),
            } }
            / "B" _ "{" _ n:number() _ "}" _ a:args() {?
                if n == 0 { Err("n >= 1") }
                else if a.len() != n { Err("n arguments") }
                else { builtin::beta_of(a).map_err(|_| "n >= 1") }
            }
            / "0" !['0'..='9'] { Term::Zero }
            / "1" !['0'..='9'] { Term::One }
            / v:ident() { Term::Var(v) }
            / "(" _ e:expr() _ ")" { e }

        pub rule expr() -> Term = precedence!{
            x:@ _ "->" _ y:(@) { builtin::heyting_imp(x, y) }
            --
            x:(@) _ "|" _ y:@ { x.join(y) }
            --
            x:(@) _ "&" _ y:@ { x.meet(y) }
            --
            x:@ _ "'" { x.neg() }
            x:@ _ "*" { x.star() }
            --
            a:atom() { a }
        }

        pub rule term() -> Term = _ t:expr() _ { t }

        pub rule identity() -> Identity
            = _ l:expr() _ "<=" _ r:expr() _ { Identity::leq(l, r) }
            / _ l:expr() _ "~" _ r:expr() _ { Identity::new(l, r) }

        pub rule either() -> super::Parsed
            = i:identity() { super::Parsed::Identity(i) }
            / t:term() { super::Parsed::Term(t) }
    }
}

fn syntax(e: peg::error::ParseError<peg::str::LineCol>) -> Error {
    Error::Syntax {
        offset: e.location.offset,
        expected: e.expected.to_string(),
    }
}

pub fn parse_term(text: &str) -> Result<Term> {
    dsl::term(text).map_err(syntax)
}

pub fn parse_identity(text: &str) -> Result<Identity> {
    dsl::identity(text).map_err(syntax)
}

/// Parses an identity if the text contains `~` or `<=`, otherwise a term.
pub fn parse(text: &str) -> Result<Parsed> {
    dsl::either(text).map_err(syntax)
}
