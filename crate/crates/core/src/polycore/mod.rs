//! Exact sparse polynomials and truncated power series.
//!
//! Variables are identified by 1-based index. Polynomials carry integer
//! coefficients; series carry rationals, since integration and square roots
//! introduce denominators.

mod monomial;
mod poly;
mod series;

pub use monomial::Monomial;
pub use poly::SparsePoly;
pub use series::{SeriesError, TruncSeries};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Formats a rational as `p/q` in lowest terms with `q > 0`, or as `p` when
/// the denominator is one.
pub fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the output of [`fmt_rational`].
pub fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(n, d))
        }
    }
}
