//! Direct decomposition of finite members of BPK₀ into simple factors.

use serde::Serialize;

use super::FiniteAlgebra;
use crate::duality::{dual_space, upset_algebra};
use crate::error::{Error, Result};
use crate::terms::variety::in_bpk0;

/// A simple factor `B_k`: `k = 0` is the 2-chain, otherwise `k` is the number
/// of maximal points of the factor's dual.
#[derive(Clone, Debug, Serialize)]
pub struct SimpleFactor {
    pub k: usize,
    #[serde(skip)]
    pub algebra: FiniteAlgebra,
}

/// Splits `alg` along the φ-components of its dual. Factors are sorted by
/// `k`; the trivial algebra has no factors.
pub fn decompose_into_simples(alg: &FiniteAlgebra) -> Result<Vec<SimpleFactor>> {
    if !in_bpk0(alg)? {
        return Err(Error::Domain("decomposition into simples requires BPK0".into()));
    }
    let space = dual_space(alg);
    let mut factors = Vec::new();
    for component in space.phi_components() {
        let sub = space.restrict(&component)?;
        let k = if sub.len() == 1 {
            0
        } else {
            sub.max_points().count_ones(..)
        };
        let algebra = upset_algebra(&sub)?.algebra;
        factors.push(SimpleFactor { k, algebra });
    }
    factors.sort_by_key(|f| f.k);
    Ok(factors)
}
