//! The counting engine.
//!
//! Vertex counts `V(1^{i_1} ... k^{i_k})` via the fixed point of the operator
//! `A`, an independent fiber recursion, and for three distinct values the
//! binomial-sum formula, the coefficient formula and the four-term
//! recurrence. Also the slice polynomials `g_s`, `h_s` and their tables.

mod cache;
mod formulas;
mod multiplicity;
mod operator;
mod tables;

pub use cache::{CacheError, CountCache, CACHE_FORMAT, CACHE_VERSION};
pub use formulas::{
    binomial, binomial_formula_v, coeff_theorem_v, g_polynomial, h_polynomial, recurrence_v3, reflect, HPath,
};
pub use multiplicity::MultiplicityVector;
pub use operator::{a_infinity, a_infinity_raw, apply_a, count_by_fiber_recursion, vertex_count};
pub use tables::{tri_table, TableVariant, TriTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CountError {
    #[error("partition is not weakly increasing: {0} > {1}")]
    NotMonotone(i64, i64),
    #[error("malformed multiplicity vector {0:?}")]
    BadMultiplicity(String),
    #[error("formula needs k, l, m > 0, got ({0}, {1}, {2})")]
    NonPositive(i64, i64, i64),
    #[error("degree must be at least 1, got {0}")]
    InvalidDegree(u32),
    #[error("expected an integer coefficient, got {0}")]
    NonIntegral(String),
    #[error("exact division by 1+xz left remainder {0}")]
    Indivisible(String),
    #[error("monomial {0} lies outside the table")]
    OutsideTable(String),
}
