//! Generating functions of the vertex counts and exact checks of the
//! identities they satisfy.
//!
//! `E_k = sum V(i) z^i / i!` and `G_k = sum V(i) y^i` are built from
//! [`a_infinity`] up to a total degree. Closed forms are evaluated
//! structurally in the truncated ring (inverses, square roots, products),
//! and each check is reported as an exact residual.

use std::fmt::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::counting::{
    a_infinity, binomial, g_polynomial, h_polynomial, recurrence_v3, tri_table, CountCache, CountError, HPath,
    MultiplicityVector, TableVariant, TriTable,
};
use crate::polycore::{fmt_rational, Monomial, SeriesError, SparsePoly, TruncSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenFunError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("coefficient of {0} is not a nonnegative integer: {1}")]
    NotACount(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Exponential,
    Ordinary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesBuildSpec {
    pub k: usize,
    pub cap: u32,
    pub kind: SeriesKind,
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn exps_factorial(exps: &[u32]) -> BigInt {
    exps.iter().fold(BigInt::one(), |acc, &e| acc * factorial(e))
}

/// Truncation of `E_k` or `G_k`. The counts are requested concurrently
/// against the shared cache.
pub fn build_series(spec: &SeriesBuildSpec, cache: &CountCache) -> Result<TruncSeries, GenFunError> {
    if spec.k == 0 {
        return Err(GenFunError::InvalidParams("k must be at least 1".into()));
    }
    let counts: Vec<(Vec<u32>, BigUint)> = MultiplicityVector::all_up_to(spec.k, spec.cap)
        .into_par_iter()
        .map(|m| {
            let v = a_infinity(&m, cache);
            (m.parts().to_vec(), v)
        })
        .collect();
    let terms = counts.into_iter().map(|(exps, v)| {
        let v = BigInt::from(v);
        let c = match spec.kind {
            SeriesKind::Ordinary => BigRational::from_integer(v),
            SeriesKind::Exponential => BigRational::new(v, exps_factorial(&exps)),
        };
        (Monomial::from_dense(&exps), c)
    });
    Ok(TruncSeries::from_terms(spec.k, spec.cap, terms))
}

pub fn build_e(k: usize, cap: u32, cache: &CountCache) -> Result<TruncSeries, GenFunError> {
    build_series(&SeriesBuildSpec { k, cap, kind: SeriesKind::Exponential }, cache)
}

pub fn build_g(k: usize, cap: u32, cache: &CountCache) -> Result<TruncSeries, GenFunError> {
    build_series(&SeriesBuildSpec { k, cap, kind: SeriesKind::Ordinary }, cache)
}

/// Outcome of one exact check: the nonzero coefficients of a residual plus
/// any other failed conditions. Passes only when both are empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualReport {
    pub check: String,
    pub k: Option<usize>,
    pub cap: u32,
    /// Number of coefficients compared (0 when not meaningful).
    pub compared: usize,
    pub nonzero: Vec<(Vec<u32>, BigRational)>,
    pub failures: Vec<String>,
}

impl ResidualReport {
    fn new(check: &str, k: Option<usize>, cap: u32) -> Self {
        ResidualReport {
            check: check.to_string(),
            k,
            cap,
            compared: 0,
            nonzero: Vec::new(),
            failures: Vec::new(),
        }
    }

    fn from_residual(check: &str, k: Option<usize>, cap: u32, residual: &TruncSeries, compared: usize) -> Self {
        let mut r = ResidualReport::new(check, k, cap);
        r.absorb(residual, compared);
        r
    }

    fn absorb(&mut self, residual: &TruncSeries, compared: usize) {
        self.compared += compared;
        let n = residual.nvars();
        self.nonzero
            .extend(residual.terms().map(|(m, c)| (m.to_dense(n), c.clone())));
    }

    fn absorb_poly(&mut self, residual: &SparsePoly, nvars: usize, compared: usize) {
        self.compared += compared;
        self.nonzero.extend(
            residual
                .terms()
                .map(|(m, c)| (m.to_dense(nvars), BigRational::from_integer(c.clone()))),
        );
    }

    pub fn pass(&self) -> bool {
        self.nonzero.is_empty() && self.failures.is_empty()
    }

    pub fn max_abs(&self) -> BigRational {
        self.nonzero
            .iter()
            .map(|(_, c)| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nonzero: Vec<_> = self
            .nonzero
            .iter()
            .map(|(e, c)| json!({"exponents": e, "coefficient": fmt_rational(c)}))
            .collect();
        json!({
            "check": self.check,
            "k": self.k,
            "cap": self.cap,
            "compared": self.compared,
            "pass": self.pass(),
            "max_abs_residual": fmt_rational(&self.max_abs()),
            "nonzero": nonzero,
            "failures": self.failures,
        })
    }
}

fn check_k_cap(k: usize, cap: u32) -> Result<(), GenFunError> {
    if k == 0 || cap < k as u32 {
        return Err(GenFunError::InvalidParams(format!("need k >= 1 and cap >= k, got k={k}, cap={cap}")));
    }
    Ok(())
}

/// Applies `op` along the chain `(op_1 + op_2)(op_2 + op_3)...(op_{k-1} + op_k)`.
fn chain_operator<F>(series: &TruncSeries, k: usize, op: F) -> Result<TruncSeries, SeriesError>
where
    F: Fn(&TruncSeries, u32) -> Result<TruncSeries, SeriesError>,
{
    let mut f = series.clone();
    for j in 1..k as u32 {
        f = op(&f, j)?.checked_add(&op(&f, j + 1)?)?;
    }
    Ok(f)
}

fn full_operator<F>(series: &TruncSeries, k: usize, op: F) -> Result<TruncSeries, SeriesError>
where
    F: Fn(&TruncSeries, u32) -> Result<TruncSeries, SeriesError>,
{
    let mut f = series.clone();
    for j in 1..=k as u32 {
        f = op(&f, j)?;
    }
    Ok(f)
}

/// `(d_1 ... d_k - (d_1 + d_2) ... (d_{k-1} + d_k)) E`. The result is known
/// up to degree `cap - k`.
pub fn pde_residual(e: &TruncSeries, k: usize) -> Result<TruncSeries, SeriesError> {
    let lhs = full_operator(e, k, TruncSeries::d_dz)?;
    let rhs = chain_operator(e, k, TruncSeries::d_dz)?;
    lhs.checked_sub(&rhs)
}

/// Same as [`pde_residual`] with divided differences in place of derivatives.
pub fn dde_residual(g: &TruncSeries, k: usize) -> Result<TruncSeries, SeriesError> {
    let lhs = full_operator(g, k, TruncSeries::divdiff)?;
    let rhs = chain_operator(g, k, TruncSeries::divdiff)?;
    lhs.checked_sub(&rhs)
}

fn coefficient_slots(nvars: usize, cap: u32) -> usize {
    MultiplicityVector::all_up_to(nvars, cap).len()
}

pub fn verify_pde_e(k: usize, cap: u32, cache: &CountCache) -> Result<ResidualReport, GenFunError> {
    check_k_cap(k, cap)?;
    let e = build_e(k, cap, cache)?;
    let res = pde_residual(&e, k)?;
    Ok(ResidualReport::from_residual("pde", Some(k), cap, &res, coefficient_slots(k, res.cap())))
}

pub fn verify_dde_g(k: usize, cap: u32, cache: &CountCache) -> Result<ResidualReport, GenFunError> {
    check_k_cap(k, cap)?;
    let g = build_g(k, cap, cache)?;
    let res = dde_residual(&g, k)?;
    Ok(ResidualReport::from_residual("dde", Some(k), cap, &res, coefficient_slots(k, res.cap())))
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The two roots of `y = (x+y)(y+z)` viewed as a quadratic in `y`, as series
/// in `x = x1` and `z = x3` (three variables, `y = x2` unused). `lambda` has
/// constant term 1 and `mu` constant term 0.
#[derive(Debug, Clone)]
pub struct G3Roots {
    pub sqrt_discriminant: TruncSeries,
    pub lambda: TruncSeries,
    pub mu: TruncSeries,
}

pub fn g3_roots(cap: u32) -> Result<G3Roots, GenFunError> {
    let one = TruncSeries::one(3, cap);
    let x = TruncSeries::var(3, cap, 1);
    let z = TruncSeries::var(3, cap, 3);
    let x_plus_z = &x + &z;
    let x_minus_z = &x - &z;
    let disc = &(&one - &x_plus_z.scale(&rat(2))) + &(&x_minus_z * &x_minus_z);
    let root = disc.sqrt()?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let base = &one - &x_plus_z;
    Ok(G3Roots {
        lambda: (&base + &root).scale(&half),
        mu: (&base - &root).scale(&half),
        sqrt_discriminant: root,
    })
}

fn integral_nonnegative(series: &TruncSeries) -> Result<(), GenFunError> {
    for (m, c) in series.terms() {
        if !c.is_integer() || c.is_negative() {
            return Err(GenFunError::NotACount(m.to_string(), fmt_rational(c)));
        }
    }
    Ok(())
}

/// `G_3(x, y, z) = lambda / ((1 - x - z)(lambda - y))`, in variables
/// `x = x1`, `y = x2`, `z = x3`. Every coefficient must be a nonnegative
/// integer.
pub fn closed_form_g3(cap: u32) -> Result<TruncSeries, GenFunError> {
    let roots = g3_roots(cap)?;
    let one = TruncSeries::one(3, cap);
    let x = TruncSeries::var(3, cap, 1);
    let y = TruncSeries::var(3, cap, 2);
    let z = TruncSeries::var(3, cap, 3);
    let denom = &(&(&one - &x) - &z) * &(&roots.lambda - &y);
    let g = &roots.lambda * &denom.inv()?;
    integral_nonnegative(&g)?;
    Ok(g)
}

/// Numerator and denominator of the rational-radical expression for `G_3`:
/// `N = 2xz - y(1-x-z) - y sqrt(D)` and `Q = 2(1-x-z)((x+y)(y+z) - y)`.
/// `Q` has no constant term, so the quotient is checked as `N = Q * G`.
pub fn g3_printed_parts(cap: u32) -> Result<(TruncSeries, TruncSeries), GenFunError> {
    let roots = g3_roots(cap)?;
    let one = TruncSeries::one(3, cap);
    let x = TruncSeries::var(3, cap, 1);
    let y = TruncSeries::var(3, cap, 2);
    let z = TruncSeries::var(3, cap, 3);
    let one_minus = &(&one - &x) - &z;
    let numer = &(&(&x * &z).scale(&rat(2)) - &(&y * &one_minus)) - &(&y * &roots.sqrt_discriminant);
    let denom = (&one_minus * &(&(&(&x + &y) * &(&y + &z)) - &y)).scale(&rat(2));
    Ok((numer, denom))
}

/// All checks on `G_3` at total degree `cap`.
pub fn verify_g3(cap: u32, cache: &CountCache) -> Result<Vec<ResidualReport>, GenFunError> {
    let built = build_g(3, cap, cache)?;
    let mut reports = Vec::new();

    let mut eq = ResidualReport::new("g3-closed-form", Some(3), cap);
    match closed_form_g3(cap) {
        Ok(closed) => eq.absorb(&(&closed - &built), coefficient_slots(3, cap)),
        Err(e) => eq.failures.push(e.to_string()),
    }
    reports.push(eq);

    // Q has order one, so degrees <= cap of G are pinned down by N = Q G at
    // degree cap + 1.
    let (numer, denom) = g3_printed_parts(cap + 1)?;
    let g_closed = closed_form_g3(cap + 1)?;
    let mut printed = ResidualReport::new("g3-printed-quotient", Some(3), cap);
    printed.absorb(&(&numer - &(&denom * &g_closed)), coefficient_slots(3, cap + 1));
    printed.absorb(&(&g_closed.truncate(cap) - &built), 0);
    reports.push(printed);

    let roots = g3_roots(cap)?;
    let one = TruncSeries::one(3, cap);
    let x = TruncSeries::var(3, cap, 1);
    let z = TruncSeries::var(3, cap, 3);
    let sum = &(&roots.lambda + &roots.mu) - &(&(&one - &x) - &z);
    let prod = &(&roots.lambda * &roots.mu) - &(&x * &z);
    let mut vieta = ResidualReport::new("g3-root-pair", Some(3), cap);
    vieta.absorb(&sum, coefficient_slots(2, cap));
    vieta.absorb(&prod, coefficient_slots(2, cap));
    if roots.lambda.constant_term() != BigRational::one() || !roots.mu.constant_term().is_zero() {
        vieta.failures.push("root normalization at x = z = 0".into());
    }
    reports.push(vieta);

    let slice = built.set_zero(2)?;
    let expected = (&(&one - &x) - &z).inv()?;
    reports.push(ResidualReport::from_residual(
        "g3-y0-slice",
        Some(3),
        cap,
        &(&slice - &expected),
        coefficient_slots(2, cap),
    ));
    Ok(reports)
}

/// `e^{z1 + z2} * sum_n (z1 z2)^n / (n!)^2`.
pub fn closed_form_e2(cap: u32) -> TruncSeries {
    let z1 = TruncSeries::var(2, cap, 1);
    let z2 = TruncSeries::var(2, cap, 2);
    let lin = &z1 + &z2;
    let prod = &z1 * &z2;
    let mut exp = TruncSeries::zero(2, cap);
    let mut bessel = TruncSeries::zero(2, cap);
    let mut lin_pow = TruncSeries::one(2, cap);
    let mut prod_pow = TruncSeries::one(2, cap);
    for n in 0..=cap {
        let f = factorial(n);
        exp = &exp + &lin_pow.scale(&BigRational::new(BigInt::one(), f.clone()));
        bessel = &bessel + &prod_pow.scale(&BigRational::new(BigInt::one(), &f * &f));
        lin_pow = &lin_pow * &lin;
        prod_pow = &prod_pow * &prod;
    }
    &exp * &bessel
}

pub fn verify_e2(cap: u32, cache: &CountCache) -> Result<Vec<ResidualReport>, GenFunError> {
    let built = build_e(2, cap, cache)?;
    let closed = closed_form_e2(cap);
    let slots = coefficient_slots(2, cap);
    let eq = ResidualReport::from_residual("e2-bessel", Some(2), cap, &(&closed - &built), slots);

    let mut diag = ResidualReport::new("e2-binomial", Some(2), cap);
    diag.compared = slots;
    for d in 0..=cap {
        for i in 0..=d {
            let j = d - i;
            let scaled = closed.coeff_dense(&[i, j]) * BigRational::from_integer(factorial(i) * factorial(j));
            let want = BigRational::from_integer(binomial(i64::from(d), i64::from(i)));
            if scaled != want {
                diag.nonzero.push((vec![i, j], scaled - want));
            }
        }
    }
    Ok(vec![eq, diag])
}

/// `H = y(1 - xz) / ((1 - y(x+z))(1 - y(1+x)(1+z)))` in variables `x = x1`,
/// `z = x2`, `y = x3`, truncated at total degree `3 * smax` so that the
/// coefficients of `y^s` are complete for every `s <= smax`.
pub fn closed_form_h(smax: u32) -> TruncSeries {
    let cap = 3 * smax;
    let one = TruncSeries::one(3, cap);
    let x = TruncSeries::var(3, cap, 1);
    let z = TruncSeries::var(3, cap, 2);
    let y = TruncSeries::var(3, cap, 3);
    let first = &one - &(&y * &(&x + &z));
    let second = &one - &(&(&y * &(&one + &x)) * &(&one + &z));
    let numer = &y * &(&one - &(&x * &z));
    &(&numer * &first.inv().expect("unit")) * &second.inv().expect("unit")
}

/// Coefficient of `y^s` in a series in `(x, z, y)`, as a polynomial in
/// `x = x1`, `z = x2`.
pub fn y_slice(series: &TruncSeries, s: u32) -> Result<SparsePoly, GenFunError> {
    let mut out = SparsePoly::zero();
    for (m, c) in series.terms() {
        if m.exponent(3) != s {
            continue;
        }
        if !c.is_integer() {
            return Err(GenFunError::NotACount(m.to_string(), fmt_rational(c)));
        }
        out.add_term(Monomial::from_dense(&[m.exponent(1), m.exponent(2)]), c.to_integer());
    }
    Ok(out)
}

/// `H - y((1+x)(1+z) H + (1-xz) / (1 - y(x+z)))`; the constant of the
/// linear equation is zero because `h_0 = 0`.
pub fn h_linear_equation_residual(smax: u32) -> TruncSeries {
    let h = closed_form_h(smax);
    let cap = h.cap();
    let one = TruncSeries::one(3, cap);
    let x = TruncSeries::var(3, cap, 1);
    let z = TruncSeries::var(3, cap, 2);
    let y = TruncSeries::var(3, cap, 3);
    let geometric = (&one - &(&y * &(&x + &z))).inv().expect("unit");
    let inner = &(&(&(&one + &x) * &(&one + &z)) * &h) + &(&(&one - &(&x * &z)) * &geometric);
    &h - &(&y * &inner)
}

fn lift(p: &SparsePoly, s: u32) -> SparsePoly {
    p.mul_monomial(&Monomial::var_pow(3, s))
}

/// Checks on the slice polynomials for `1 <= s <= smax`: the three routes to
/// `h_s`, the `y^s` coefficients of `H`, the linear equation for `H`, the
/// coefficients of `g_s` against the recurrence, and the table properties.
/// Residual exponents are `(k, m, s)`.
pub fn verify_h(smax: u32) -> Result<Vec<ResidualReport>, GenFunError> {
    if smax == 0 {
        return Err(GenFunError::InvalidParams("need s >= 1".into()));
    }
    let mut paths = ResidualReport::new("h-three-paths", None, smax);
    let mut hser = ResidualReport::new("h-series-slices", None, smax);
    let mut gcoef = ResidualReport::new("g-vs-recurrence", None, smax);
    let mut tables = ResidualReport::new("tables", None, smax);
    let series = closed_form_h(smax);
    for s in 1..=smax {
        let rec = h_polynomial(s, HPath::Recurrence)?;
        let def = h_polynomial(s, HPath::Definition)?;
        let closed = h_polynomial(s, HPath::ClosedForm)?;
        paths.absorb_poly(&lift(&(&def - &rec), s), 3, rec.len());
        paths.absorb_poly(&lift(&(&closed - &rec), s), 3, rec.len());
        hser.absorb_poly(&lift(&(&y_slice(&series, s)? - &rec), s), 3, rec.len());

        let g = g_polynomial(s);
        for k in 0..=s {
            for m in 0..=s - k {
                let want = BigInt::from(recurrence_v3(k, s - k - m, m));
                let got = g.coeff(&Monomial::from_dense(&[k, m]));
                if got != want {
                    gcoef.nonzero.push((vec![k, m, s], BigRational::from_integer(got - want)));
                }
                gcoef.compared += 1;
            }
        }

        let plain = tri_table(s, TableVariant::Plain)?;
        let skew = tri_table(s, TableVariant::Skew)?;
        tables.absorb_poly(&lift(&(&plain.to_polynomial() - &g), s), 3, 0);
        tables.absorb_poly(&lift(&(&skew.to_polynomial() - &rec), s), 3, 0);
        tables.failures.extend(plain_boundary_failures(&plain));
        if !skew.is_skew_symmetric() {
            tables.failures.push(format!("skew table {s} is not skew-symmetric"));
        }
        tables.compared += plain.entries().count() + skew.entries().count();
    }
    let mut lin = ResidualReport::new("h-linear-equation", None, smax);
    let res = h_linear_equation_residual(smax);
    lin.absorb(&res, coefficient_slots(3, res.cap()));
    Ok(vec![paths, hser, lin, gcoef, tables])
}

/// The three edges of `T^s` hold binomials: `C(s, m)` for `k = 0`, `C(s, k)`
/// for `m = 0` and on the diagonal `k + m = s`.
fn plain_boundary_failures(t: &TriTable) -> Vec<String> {
    let s = t.s();
    let mut out = Vec::new();
    for i in 0..=s {
        let want = binomial(i64::from(s), i64::from(i));
        for (k, m) in [(0, i), (i, 0), (i, s - i)] {
            if t.entry(k, m) != Some(&want) {
                out.push(format!("T^{s} boundary cell ({k},{m}) is not C({s},{i})"));
            }
        }
    }
    out
}

/// `V(1^a 2^b 3^c 4^d)` for all `a + b + c + d <= cap`, in graded order.
pub fn g4_explore(cap: u32, cache: &CountCache) -> Vec<(MultiplicityVector, BigUint)> {
    MultiplicityVector::all_up_to(4, cap)
        .into_par_iter()
        .map(|m| {
            let v = a_infinity(&m, cache);
            (m, v)
        })
        .collect()
}

/// CSV dump with a header `i1,...,in,coefficient`, graded order.
pub fn series_to_csv(series: &TruncSeries) -> String {
    let n = series.nvars();
    let mut out = String::new();
    let header: Vec<String> = (1..=n).map(|i| format!("i{i}")).collect();
    writeln!(out, "{},coefficient", header.join(",")).expect("write to string");
    for (m, c) in series.terms() {
        let e: Vec<String> = m.to_dense(n).iter().map(u32::to_string).collect();
        writeln!(out, "{},{}", e.join(","), fmt_rational(c)).expect("write to string");
    }
    out
}

pub fn series_to_json(series: &TruncSeries) -> serde_json::Value {
    let n = series.nvars();
    let terms: Vec<_> = series
        .terms()
        .map(|(m, c)| json!({"exponents": m.to_dense(n), "coefficient": fmt_rational(c)}))
        .collect();
    json!({"nvars": n, "cap": series.cap(), "terms": terms})
}
