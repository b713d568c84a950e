//! Vertex counts of Gelfand-Zetlin polytopes, computed exactly by several
//! independent routes, together with exact verification of the generating
//! functions those counts satisfy.
//!
//! * [`polycore`]: sparse polynomials and truncated power series.
//! * [`counting`]: the degree-lowering operator and its fixed point, the
//!   fiber recursion, closed formulas for three distinct values and the
//!   triangular tables.
//! * [`oracle`]: exact vertex enumeration from the defining inequalities.
//! * [`genfun`]: exponential and ordinary generating functions, their
//!   closed forms and residual checks.

pub mod counting;
pub mod genfun;
pub mod oracle;
pub mod polycore;

pub use counting::{a_infinity, CountCache, MultiplicityVector};
pub use polycore::{Monomial, SparsePoly, TruncSeries};
