//! Computation with finite pseudocomplemented De Morgan algebras.
//!
//! Every algebra is an explicit table over element indices. Most questions
//! are answered twice: once through the dual poset of prime filters and once
//! by direct enumeration, so the two routes can be compared.

pub mod algebra;
pub mod congruence;
pub mod constructions;
pub mod duality;
pub mod error;
pub mod free_bpk0;
pub mod sets;
pub mod terms;

pub use algebra::{AlgebraFile, FiniteAlgebra, Lattice, ValidationReport, Violation};
pub use congruence::{classify, congruence_lattice, Classification, Congruence, CSubset};
pub use constructions::{build_si, SiDescriptor};
pub use duality::{dual_space, DualSpace, SpaceType};
pub use error::{Error, Result};
pub use free_bpk0::{Count, CountTable, FactorCount, FreeDecomposition};
pub use terms::{Identity, Term};

/// Exact natural numbers used for free-algebra counts.
pub type Natural = num_bigint::BigUint;
/// Count table over exact naturals.
pub type ExactCountTable = CountTable<Natural>;
/// Free decomposition with exact multiplicities.
pub type ExactDecomposition = FreeDecomposition<Natural>;
/// Count table over 128-bit integers; overflow is reported, not wrapped.
pub type WideCountTable = CountTable<u128>;
