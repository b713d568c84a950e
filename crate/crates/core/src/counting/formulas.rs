//! Closed formulas and recurrences for partitions with three distinct values,
//! `V_{k,l,m} = V(1^k 2^l 3^m)`, and the homogeneous slices `g_s`, `h_s` of
//! their generating function. Polynomials in this module use `x = x1` and
//! `z = x2`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::CountError;
use crate::polycore::{Monomial, SparsePoly, TruncSeries};

/// `C(n, r)`, zero outside `0 <= r <= n`.
pub fn binomial(n: i64, r: i64) -> BigInt {
    if n < 0 || r < 0 || r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn check_positive(k: i64, l: i64, m: i64) -> Result<(), CountError> {
    if k <= 0 || l <= 0 || m <= 0 {
        return Err(CountError::NonPositive(k, l, m));
    }
    Ok(())
}

/// `C(s,k) C(s,m) + 2 * sum_{i=1..k} (-1)^i C(s,k-i) C(s,m-i)` with
/// `s = k + l + m`, valid for `k, l, m > 0`.
pub fn binomial_formula_v(k: i64, l: i64, m: i64) -> Result<BigInt, CountError> {
    check_positive(k, l, m)?;
    let s = k + l + m;
    let mut acc = binomial(s, k) * binomial(s, m);
    for i in 1..=k {
        let term = binomial(s, k - i) * binomial(s, m - i) * BigInt::from(2);
        if i % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    Ok(acc)
}

fn x() -> SparsePoly {
    SparsePoly::var(1)
}

fn z() -> SparsePoly {
    SparsePoly::var(2)
}

fn xz() -> SparsePoly {
    &x() * &z()
}

/// `(1+x)^s (1+z)^s - (x+z)^s`.
fn theorem_bracket(s: u32) -> SparsePoly {
    let one = SparsePoly::one();
    &(&(&one + &x()).pow(s) * &(&one + &z()).pow(s)) - &(&x() + &z()).pow(s)
}

/// Coefficient of `x^k z^m` in `(1-xz)/(1+xz) * bracket_s`, expanded as a
/// truncated power series.
pub fn coeff_theorem_v(k: i64, l: i64, m: i64) -> Result<BigInt, CountError> {
    check_positive(k, l, m)?;
    let s = (k + l + m) as u32;
    let cap = (k + m) as u32;
    let bracket = TruncSeries::from_poly(2, cap, &theorem_bracket(s));
    let one = TruncSeries::one(2, cap);
    let xz = TruncSeries::from_poly(2, cap, &xz());
    let factor = &(&one - &xz) * &(&one + &xz).inv().expect("constant term 1");
    let c = (&factor * &bracket).coeff_dense(&[k as u32, m as u32]);
    integral(c)
}

fn integral(c: BigRational) -> Result<BigInt, CountError> {
    if !c.is_integer() {
        return Err(CountError::NonIntegral(c.to_string()));
    }
    Ok(c.to_integer())
}

/// `V_{k,l,m}` from the four-term recurrence with two-value boundary data
/// `V_{a,b} = C(a+b, a)`.
pub fn recurrence_v3(k: u32, l: u32, m: u32) -> BigUint {
    let mut memo = HashMap::new();
    recurrence_memo(k, l, m, &mut memo)
}

fn recurrence_memo(k: u32, l: u32, m: u32, memo: &mut HashMap<(u32, u32, u32), BigUint>) -> BigUint {
    if k == 0 || l == 0 || m == 0 {
        let (a, b) = match (k, l, m) {
            (0, l, m) => (l, m),
            (k, 0, m) => (k, m),
            (k, l, _) => (k, l),
        };
        return binomial(i64::from(a + b), i64::from(a))
            .to_biguint()
            .expect("binomials are nonnegative");
    }
    if let Some(v) = memo.get(&(k, l, m)) {
        return v.clone();
    }
    let v = recurrence_memo(k - 1, l, m, memo)
        + recurrence_memo(k, l - 1, m, memo)
        + recurrence_memo(k, l, m - 1, memo)
        + recurrence_memo(k - 1, l + 1, m - 1, memo);
    memo.insert((k, l, m), v.clone());
    v
}

/// `g_s`, whose coefficient of `x^k z^m` is `V_{k, s-k-m, m}`, from
/// `g_0 = 1` and `g_{t+1} = (1+x+z) g_t + trunc_{<=t}(xz g_t)`.
pub fn g_polynomial(s: u32) -> SparsePoly {
    let step = &(&SparsePoly::one() + &x()) + &z();
    let mut g = SparsePoly::one();
    for t in 0..s {
        g = &(&step * &g) + &(&xz() * &g).truncate(t);
    }
    g
}

/// Which of the three constructions of `h_s` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HPath {
    /// `g_s(x,z) - (xz)^s g_s(1/z, 1/x)`.
    Definition,
    /// `h_1 = 1 - xz`, `h_{t+1} = (1+x)(1+z) h_t + (1-xz)(x+z)^t`.
    Recurrence,
    /// `(1-xz) * bracket_s / (1+xz)` by exact polynomial division.
    ClosedForm,
}

impl HPath {
    pub const ALL: [HPath; 3] = [HPath::Definition, HPath::Recurrence, HPath::ClosedForm];
}

/// The substitution `p(x,z) -> (xz)^s p(1/z, 1/x)`, i.e. the monomial map
/// `x^a z^b -> x^(s-b) z^(s-a)`. `None` if some exponent exceeds `s`.
pub fn reflect(p: &SparsePoly, s: u32) -> Option<SparsePoly> {
    let mut out = SparsePoly::zero();
    for (m, c) in p.terms() {
        let (a, b) = (m.exponent(1), m.exponent(2));
        if a > s || b > s || m.max_var() > 2 {
            return None;
        }
        out.add_term(Monomial::from_dense(&[s - b, s - a]), c.clone());
    }
    Some(out)
}

pub fn h_polynomial(s: u32, path: HPath) -> Result<SparsePoly, CountError> {
    if s == 0 {
        return Err(CountError::InvalidDegree(s));
    }
    let one = SparsePoly::one();
    match path {
        HPath::Definition => {
            let g = g_polynomial(s);
            let r = reflect(&g, s).expect("deg g_s <= s");
            Ok(&g - &r)
        }
        HPath::Recurrence => {
            let factor = &(&one + &x()) * &(&one + &z());
            let one_minus_xz = &one - &xz();
            let mut h = one_minus_xz.clone();
            for t in 1..s {
                h = &(&h * &factor) + &(&one_minus_xz * &(&x() + &z()).pow(t));
            }
            Ok(h)
        }
        HPath::ClosedForm => {
            let numerator = &(&one - &xz()) * &theorem_bracket(s);
            numerator
                .div_exact(&(&one + &xz()))
                .map_err(|r| CountError::Indivisible(r.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(&[u32], i64)]) -> SparsePoly {
        SparsePoly::from_terms(
            terms
                .iter()
                .map(|(e, c)| (Monomial::from_dense(e), BigInt::from(*c))),
        )
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, 6), BigInt::zero());
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(60, 30), "118264581564861424".parse::<BigInt>().unwrap());
    }

    #[test]
    fn binomial_sum_examples() {
        assert_eq!(binomial_formula_v(1, 1, 1).unwrap(), BigInt::from(7));
        assert_eq!(binomial_formula_v(1, 2, 1).unwrap(), BigInt::from(14));
        assert_eq!(binomial_formula_v(2, 1, 1).unwrap(), BigInt::from(16));
        assert!(matches!(binomial_formula_v(0, 1, 1), Err(CountError::NonPositive(..))));
        assert!(binomial_formula_v(1, 0, 1).is_err());
        assert!(binomial_formula_v(1, 1, -2).is_err());
    }

    #[test]
    fn coefficient_theorem_examples() {
        assert_eq!(coeff_theorem_v(1, 1, 1).unwrap(), BigInt::from(7));
        assert_eq!(coeff_theorem_v(1, 1, 2).unwrap(), binomial_formula_v(1, 1, 2).unwrap());
        for (k, l, m) in [(1, 2, 3), (2, 2, 1), (3, 1, 4)] {
            assert_eq!(coeff_theorem_v(k, l, m).unwrap(), coeff_theorem_v(m, l, k).unwrap());
        }
        assert!(coeff_theorem_v(1, 0, 1).is_err());
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(recurrence_v3(1, 1, 1), BigUint::from(7u32));
        assert_eq!(recurrence_v3(0, 2, 3), BigUint::from(10u32));
        assert_eq!(recurrence_v3(4, 0, 0), BigUint::one());
        assert_eq!(recurrence_v3(2, 1, 1), BigUint::from(16u32));
    }

    #[test]
    fn g_examples() {
        let step = poly(&[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(g_polynomial(0), SparsePoly::one());
        assert_eq!(g_polynomial(1), step);
        assert_eq!(g_polynomial(2), step.pow(2));
        let g3 = g_polynomial(3);
        assert_eq!(g3, &step.pow(3) + &poly(&[(&[1, 1], 1)]));
        assert_eq!(g3.coeff(&Monomial::from_dense(&[1, 1])), BigInt::from(7));
    }

    #[test]
    fn h_examples() {
        let h1 = poly(&[(&[0, 0], 1), (&[1, 1], -1)]);
        let h2 = poly(&[
            (&[0, 0], 1),
            (&[1, 0], 2),
            (&[0, 1], 2),
            (&[2, 1], -2),
            (&[1, 2], -2),
            (&[2, 2], -1),
        ]);
        for path in HPath::ALL {
            assert_eq!(h_polynomial(1, path).unwrap(), h1, "{path:?}");
            assert_eq!(h_polynomial(2, path).unwrap(), h2, "{path:?}");
        }
        assert!(h_polynomial(0, HPath::Recurrence).is_err());
    }

    #[test]
    fn h_is_skew_under_reflection() {
        for s in 1..=12 {
            let h = h_polynomial(s, HPath::Recurrence).unwrap();
            assert_eq!(reflect(&h, s).unwrap(), -&h, "s = {s}");
        }
    }

    #[test]
    fn reflect_rejects_high_degree() {
        assert!(reflect(&SparsePoly::var(1).pow(3), 2).is_none());
    }
}
