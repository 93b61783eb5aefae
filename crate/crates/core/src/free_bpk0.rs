//! Exact direct decomposition of finitely generated free algebras in BPK₀.
//!
//! The free algebra on `n` generators is `∏ B_k^{M_k}` over `0 ≤ k ≤ 2ⁿ`,
//! where `M_k` counts surjections onto `B_k` up to automorphism. The counts
//! come from a recurrence over `g(n, k)`, the number of surjections from the
//! free Boolean algebra on `n` generators onto the Boolean lattice with `k`
//! atoms that send no generator to the top. They are checked against a
//! direct enumeration of generating tuples.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, FromPrimitive, One, ToPrimitive, Zero};

use crate::algebra::FiniteAlgebra;
use crate::constructions::{build_si, closure, SiDescriptor};
use crate::error::{cap_exceeded, Error, Result};

/// Largest generator count for [`CountTable::free_decomposition`].
pub const MAX_FREE_GENERATORS: u32 = 10;

/// Default bit budget for [`CountTable::free_size`].
pub const DEFAULT_SIZE_BITS: f64 = 1_000_000.0;

/// Default bound on `|B_k|ⁿ` for [`oracle_sur_count`].
pub const DEFAULT_ORACLE_CAP: u64 = 100_000_000;

/// Natural-number scalar for the counting tables. Every operation is checked;
/// overflow surfaces as [`Error::Overflow`].
pub trait Count:
    Clone
    + Ord
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + CheckedDiv
    + FromPrimitive
    + ToPrimitive
{
}

impl<T> Count for T where
    T: Clone
        + Ord
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + CheckedDiv
        + FromPrimitive
        + ToPrimitive
{
}

fn lift<T: Count>(v: u128) -> Result<T> {
    T::from_u128(v).ok_or(Error::Overflow("conversion"))
}

fn add<T: Count>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow("addition"))
}

fn mul<T: Count>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow("multiplication"))
}

fn pow<T: Count>(base: &T, mut exp: u64) -> Result<T> {
    let mut acc = T::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(&acc, &b)?;
        }
        exp >>= 1;
        if exp > 0 {
            b = mul(&b, &b)?;
        }
    }
    Ok(acc)
}

fn binomial(n: u32, i: u32) -> u128 {
    let i = i.min(n - i);
    (0..i).fold(1u128, |acc, j| acc * u128::from(n - j) / u128::from(j + 1))
}

fn two_pow(n: u32) -> Result<u64> {
    1u64.checked_shl(n).filter(|_| n < 64).ok_or(Error::Overflow("2^n"))
}

/// One row of a free decomposition: `B_k` with its cardinality and exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorCount<T> {
    pub k: u64,
    pub size: T,
    pub multiplicity: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeDecomposition<T> {
    pub n: u32,
    pub factors: Vec<FactorCount<T>>,
}

impl<T: Count> FreeDecomposition<T> {
    pub fn multiplicity(&self, k: u64) -> Option<&T> {
        self.factors.iter().find(|f| f.k == k).map(|f| &f.multiplicity)
    }

    pub fn multiplicities(&self) -> Vec<T> {
        self.factors.iter().map(|f| f.multiplicity.clone()).collect()
    }
}

impl<T: Count> fmt::Display for FreeDecomposition<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .filter(|c| !c.multiplicity.is_zero())
            .map(|c| match c.k {
                0 => format!("2^{}", c.multiplicity),
                1 => format!("3^{}", c.multiplicity),
                k => format!("B{k}^{}", c.multiplicity),
            })
            .collect();
        f.write_str(&parts.join(" x "))
    }
}

/// Memoized `g(n, k)` plus falling factorials of `2ⁿ`.
#[derive(Clone, Debug, Default)]
pub struct CountTable<T> {
    g: HashMap<(u32, u64), T>,
    falling: HashMap<u32, Vec<T>>,
}

impl<T: Count> CountTable<T> {
    pub fn new() -> Self {
        CountTable {
            g: HashMap::new(),
            falling: HashMap::new(),
        }
    }

    /// `2ⁿ!/(2ⁿ−k)!`, the number of injections of `k` points into `2ⁿ`.
    pub fn falling_factorial(&mut self, n: u32, k: u64) -> Result<T> {
        let top = two_pow(n)?;
        if k > top {
            return Ok(T::zero());
        }
        let row = self.falling.entry(n).or_insert_with(|| vec![T::one()]);
        while (row.len() as u64) <= k {
            let j = row.len() as u64 - 1;
            let next = mul(row.last().expect("non-empty"), &lift(u128::from(top - j))?)?;
            row.push(next);
        }
        Ok(row[k as usize].clone())
    }

    /// `g(n, k) = 2ⁿ!/(2ⁿ−k)! − Σ_{i=1}^{n} C(n,i) g(n−i, k)`, with
    /// `g(n, k) = 0` for `k > 2ⁿ` taking precedence over `g(0, k) = 1`.
    pub fn g(&mut self, n: u32, k: u64) -> Result<T> {
        if k == 0 {
            return Err(Error::Domain("g(n, k) requires k >= 1".into()));
        }
        if n < 64 && k > two_pow(n)? {
            return Ok(T::zero());
        }
        if n == 0 {
            return Ok(T::one());
        }
        if let Some(v) = self.g.get(&(n, k)) {
            return Ok(v.clone());
        }
        let mut sub = T::zero();
        for i in 1..=n {
            let term = mul(&lift(binomial(n, i))?, &self.g(n - i, k)?)?;
            sub = add(&sub, &term)?;
        }
        let value = self
            .falling_factorial(n, k)?
            .checked_sub(&sub)
            .ok_or_else(|| Error::Consistency(format!("g({n},{k}) would be negative")))?;
        self.g.insert((n, k), value.clone());
        Ok(value)
    }

    /// `f(n, k, i) = C(n, i) · g(n − i, k)`
    pub fn f(&mut self, n: u32, k: u64, i: u32) -> Result<T> {
        if i > n {
            return Err(Error::Domain(format!("f(n,k,i) requires i <= n, got i = {i}")));
        }
        mul(&lift(binomial(n, i))?, &self.g(n - i, k)?)
    }

    /// `Σ_i 2^{n−i} f(n, k, i)`, the number of generating `n`-tuples of `B_k`.
    ///
    /// For `k = 1` the `i = 0` term is dropped: `B_1` has no atoms below the
    /// fixed point to fill, so every tuple must use the fixed point.
    pub fn sur_count(&mut self, n: u32, k: u64) -> Result<T> {
        if k == 0 {
            return Err(Error::Domain("sur_count requires k >= 1".into()));
        }
        let start = u32::from(k == 1);
        let mut total = T::zero();
        for i in start..=n {
            let weight = lift(1u128 << (n - i))?;
            total = add(&total, &mul(&weight, &self.f(n, k, i)?)?)?;
        }
        Ok(total)
    }

    /// `|M_k|`: `2ⁿ` for `k = 0`, `3ⁿ − 2ⁿ` for `k = 1`, and
    /// `sur_count(n, k) / k!` otherwise, with the division required exact.
    pub fn m_k(&mut self, n: u32, k: u64) -> Result<T> {
        match k {
            0 => lift(u128::from(two_pow(n)?)),
            1 => {
                let three = pow(&lift::<T>(3)?, u64::from(n))?;
                let two = pow(&lift::<T>(2)?, u64::from(n))?;
                three.checked_sub(&two).ok_or(Error::Overflow("subtraction"))
            }
            _ => {
                let sur = self.sur_count(n, k)?;
                let mut fact = T::one();
                for j in 2..=k {
                    fact = mul(&fact, &lift(u128::from(j))?)?;
                }
                let q = sur.checked_div(&fact).ok_or(Error::Overflow("division"))?;
                if mul(&q, &fact)? != sur {
                    return Err(Error::Consistency(format!(
                        "sur_count({n},{k}) = {sur} is not divisible by {k}!"
                    )));
                }
                Ok(q)
            }
        }
    }

    /// Factor table for `0 ≤ k ≤ 2ⁿ`.
    pub fn free_decomposition(&mut self, n: u32) -> Result<FreeDecomposition<T>> {
        if n == 0 {
            return Err(Error::Domain("free decomposition requires n >= 1".into()));
        }
        if n > MAX_FREE_GENERATORS {
            return Err(cap_exceeded("free decomposition generators", n, MAX_FREE_GENERATORS));
        }
        let mut factors = Vec::new();
        for k in 0..=two_pow(n)? {
            let size = factor_size(k)?;
            factors.push(FactorCount {
                k,
                size,
                multiplicity: self.m_k(n, k)?,
            });
        }
        Ok(FreeDecomposition { n, factors })
    }

    /// `∏ |B_k|^{M_k}`, refused when its estimated bit length exceeds `max_bits`.
    pub fn free_size(&mut self, n: u32, max_bits: f64) -> Result<T> {
        let dec = self.free_decomposition(n)?;
        let bits: f64 = dec
            .factors
            .iter()
            .map(|f| f.multiplicity.to_f64().unwrap_or(f64::INFINITY) * f.size.to_f64().unwrap_or(f64::INFINITY).log2())
            .sum();
        if bits > max_bits {
            return Err(cap_exceeded("free algebra size bits", bits.ceil(), max_bits));
        }
        let mut acc = T::one();
        for f in &dec.factors {
            let e = f.multiplicity.to_u64().ok_or(Error::Overflow("exponent"))?;
            acc = mul(&acc, &pow(&f.size, e)?)?;
        }
        Ok(acc)
    }
}

/// `|B_k|`: 2 for `k = 0`, `2^{k+1} − 1` otherwise.
fn factor_size<T: Count>(k: u64) -> Result<T> {
    if k == 0 {
        return lift(2);
    }
    let two = lift::<T>(2)?;
    pow(&two, k + 1)?
        .checked_sub(&T::one())
        .ok_or(Error::Overflow("subtraction"))
}

/// The target of the surjection count: the 2-chain for `k = 0`, else `B_k`.
pub fn simple_target(k: usize) -> FiniteAlgebra {
    build_si(SiDescriptor::simple(k))
}

/// Subalgebras reached by adding one element at a time, with cached steps.
struct ClosureAutomaton<'a> {
    alg: &'a FiniteAlgebra,
    states: Vec<FixedBitSet>,
    index: HashMap<FixedBitSet, u32>,
    step: Vec<Vec<u32>>,
}

const UNKNOWN: u32 = u32::MAX;

impl<'a> ClosureAutomaton<'a> {
    fn new(alg: &'a FiniteAlgebra) -> Self {
        let mut a = ClosureAutomaton {
            alg,
            states: Vec::new(),
            index: HashMap::new(),
            step: Vec::new(),
        };
        a.intern(closure(alg, []));
        a
    }

    fn intern(&mut self, set: FixedBitSet) -> u32 {
        if let Some(&id) = self.index.get(&set) {
            return id;
        }
        let id = self.states.len() as u32;
        self.index.insert(set.clone(), id);
        self.states.push(set);
        self.step.push(vec![UNKNOWN; self.alg.size()]);
        id
    }

    fn next(&mut self, state: u32, x: usize) -> u32 {
        let cached = self.step[state as usize][x];
        if cached != UNKNOWN {
            return cached;
        }
        let cur = &self.states[state as usize];
        let target = if cur.contains(x) {
            state
        } else {
            let set = closure(self.alg, cur.ones().chain([x]));
            self.intern(set)
        };
        self.step[state as usize][x] = target;
        target
    }

    fn is_full(&self, state: u32) -> bool {
        self.states[state as usize].count_ones(..) == self.alg.size()
    }
}

fn check_tuple_cap(alg: &FiniteAlgebra, n: u32, cap: u64) -> Result<()> {
    let total = (alg.size() as u64).checked_pow(n).unwrap_or(u64::MAX);
    if total > cap {
        return Err(cap_exceeded("generating-tuple enumeration", total, cap));
    }
    Ok(())
}

/// Number of `n`-tuples over `alg` that generate all of `alg`.
pub fn count_generating_tuples(alg: &FiniteAlgebra, n: u32, cap: u64) -> Result<u64> {
    check_tuple_cap(alg, n, cap)?;
    let mut auto = ClosureAutomaton::new(alg);
    fn walk(auto: &mut ClosureAutomaton<'_>, state: u32, left: u32) -> u64 {
        if left == 0 {
            return u64::from(auto.is_full(state));
        }
        let mut total = 0;
        for x in 0..auto.alg.size() {
            let s = auto.next(state, x);
            total += walk(auto, s, left - 1);
        }
        total
    }
    Ok(walk(&mut auto, 0, n))
}

/// The generating `n`-tuples of `alg` in lexicographic order.
pub fn generating_tuples(alg: &FiniteAlgebra, n: u32, cap: u64) -> Result<Vec<Vec<usize>>> {
    check_tuple_cap(alg, n, cap)?;
    let mut auto = ClosureAutomaton::new(alg);
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn walk(auto: &mut ClosureAutomaton<'_>, state: u32, left: u32, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if auto.is_full(state) {
                out.push(prefix.clone());
            }
            return;
        }
        for x in 0..auto.alg.size() {
            let s = auto.next(state, x);
            prefix.push(x);
            walk(auto, s, left - 1, prefix, out);
            prefix.pop();
        }
    }
    walk(&mut auto, 0, n, &mut prefix, &mut out);
    Ok(out)
}

/// Surjections from the free algebra on `n` generators onto `B_k`, counted
/// as generating `n`-tuples of `B_k`.
pub fn oracle_sur_count(n: u32, k: usize) -> Result<u64> {
    oracle_sur_count_capped(n, k, DEFAULT_ORACLE_CAP)
}

pub fn oracle_sur_count_capped(n: u32, k: usize, cap: u64) -> Result<u64> {
    count_generating_tuples(&simple_target(k), n, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    type Table = CountTable<BigUint>;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn g_values() {
        let mut t = Table::new();
        assert_eq!(t.g(0, 1).unwrap(), big(1));
        assert_eq!(t.g(0, 2).unwrap(), big(0));
        assert_eq!(t.g(1, 2).unwrap(), big(2));
        assert_eq!(t.g(2, 2).unwrap(), big(8));
        assert_eq!(t.g(1, 3).unwrap(), big(0));
        assert!(t.g(1, 0).is_err());
    }

    #[test]
    fn f_values() {
        let mut t = Table::new();
        assert_eq!(t.f(1, 2, 0).unwrap(), big(2));
        assert_eq!(t.f(1, 2, 1).unwrap(), big(0));
        assert_eq!(t.f(2, 2, 1).unwrap(), big(4));
        for k in 1..4 {
            assert_eq!(t.f(3, k, 3).unwrap(), t.g(0, k).unwrap());
        }
        assert!(t.f(1, 2, 2).is_err());
    }

    #[test]
    fn sur_and_m_values() {
        let mut t = Table::new();
        assert_eq!(t.sur_count(1, 2).unwrap(), big(4));
        assert_eq!(t.sur_count(2, 2).unwrap(), big(40));
        assert_eq!(t.sur_count(2, 4).unwrap(), big(96));
        assert_eq!(t.m_k(1, 2).unwrap(), big(2));
        assert_eq!(t.m_k(2, 3).unwrap(), big(16));
        assert_eq!(t.m_k(3, 2).unwrap(), big(158));
        for n in 1..=4 {
            assert_eq!(t.m_k(n, 1).unwrap(), t.sur_count(n, 1).unwrap());
        }
    }

    #[test]
    fn partition_identity() {
        let mut t = Table::new();
        for n in 0..=4u32 {
            for k in 1..=(1u64 << n) {
                let mut sum = big(0);
                for i in 0..=n {
                    sum += t.f(n, k, i).unwrap();
                }
                assert_eq!(sum, t.falling_factorial(n, k).unwrap(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn decomposition_display() {
        let mut t = Table::new();
        assert_eq!(t.free_decomposition(1).unwrap().to_string(), "2^2 x 3^1 x B2^2");
        assert_eq!(
            t.free_decomposition(2).unwrap().to_string(),
            "2^4 x 3^5 x B2^20 x B3^16 x B4^4"
        );
        assert!(t.free_decomposition(0).is_err());
        assert!(t.free_decomposition(11).is_err());
    }

    #[test]
    fn free_size_one() {
        let mut t = Table::new();
        assert_eq!(t.free_size(1, DEFAULT_SIZE_BITS).unwrap(), big(588));
        assert!(t.free_size(3, 100.0).is_err());
    }

    #[test]
    fn narrow_scalars_agree_or_overflow() {
        let mut wide = CountTable::<u128>::new();
        let mut exact = Table::new();
        let a = wide.free_decomposition(3).unwrap();
        let b = exact.free_decomposition(3).unwrap();
        for (x, y) in a.factors.iter().zip(&b.factors) {
            assert_eq!(big(x.multiplicity as u64), y.multiplicity);
        }
        let mut narrow = CountTable::<u64>::new();
        assert!(matches!(narrow.g(6, 64), Err(Error::Overflow(_))));
    }

    #[test]
    fn oracle_small() {
        assert_eq!(oracle_sur_count(1, 2).unwrap(), 4);
        assert_eq!(oracle_sur_count(2, 2).unwrap(), 40);
        assert_eq!(oracle_sur_count(2, 1).unwrap(), 5);
        assert_eq!(oracle_sur_count(2, 0).unwrap(), 4);
        assert!(oracle_sur_count_capped(3, 2, 100).is_err());
        let tuples = generating_tuples(&simple_target(2), 1, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(tuples.len(), 4);
    }
}
