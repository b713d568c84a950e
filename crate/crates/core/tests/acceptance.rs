use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use gzcount::counting::{
    a_infinity, apply_a, binomial, binomial_formula_v, coeff_theorem_v, count_by_fiber_recursion, CountCache,
    MultiplicityVector,
};
use gzcount::genfun::{build_g, closed_form_g3, verify_dde_g, verify_e2, verify_g3, verify_h, verify_pde_e};
use gzcount::oracle::{oracle_count, GzShape, OracleConfig};
use gzcount::polycore::{Monomial, SparsePoly, TruncSeries};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mv(parts: &[u32]) -> MultiplicityVector {
    MultiplicityVector::new(parts.to_vec())
}

fn compositions(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn closed_forms_small_k() -> Outcome {
    let cache = CountCache::new();
    for a in 0..=20 {
        let v = a_infinity(&mv(&[a]), &cache);
        ensure(v.is_one(), || format!("V(1^{a}) = {v}"))?;
    }
    for i in 0..=20u32 {
        for j in 0..=20 - i {
            let v = BigInt::from(a_infinity(&mv(&[i, j]), &cache));
            let want = binomial(i64::from(i + j), i64::from(i));
            ensure(v == want, || format!("V(1^{i} 2^{j}) = {v}, expected {want}"))?;
        }
    }
    Ok("231 two-value shapes and 21 one-value shapes".into())
}

fn five_way() -> Outcome {
    let cache = CountCache::new();
    let m = mv(&[1, 1, 1]);
    let values = [
        ("a_infinity", BigInt::from(a_infinity(&m, &cache))),
        ("fiber", BigInt::from(count_by_fiber_recursion(&m))),
        (
            "oracle",
            BigInt::from(oracle_count(&GzShape::new(vec![1, 2, 3]).unwrap(), &OracleConfig::default()).map_err(|e| e.to_string())?),
        ),
        ("coefficient", coeff_theorem_v(1, 1, 1).map_err(|e| e.to_string())?),
        ("binomial sum", binomial_formula_v(1, 1, 1).map_err(|e| e.to_string())?),
    ];
    let seven = BigInt::from(7);
    for (name, v) in &values {
        ensure(*v == seven, || format!("{name} gives {v}"))?;
    }
    Ok("all five give 7".into())
}

fn oracle_equivalence() -> Outcome {
    let cache = CountCache::new();
    let config = OracleConfig::default();
    let mut shapes = 0;
    for n in 1..=5 {
        for parts in compositions(n) {
            let m = mv(&parts);
            let shape = GzShape::new(m.to_partition()).unwrap();
            let oracle = BigUint::from(oracle_count(&shape, &config).map_err(|e| e.to_string())?);
            let a = a_infinity(&m, &cache);
            let fiber = count_by_fiber_recursion(&m);
            ensure(oracle == a && a == fiber, || format!("{m}: oracle {oracle}, a_infinity {a}, fiber {fiber}"))?;
            shapes += 1;
        }
    }
    ensure(shapes == 31, || format!("{shapes} shapes"))?;
    Ok("31 shapes".into())
}

fn report_all(reports: &[gzcount::genfun::ResidualReport]) -> Outcome {
    let mut compared = 0;
    for r in reports {
        ensure(r.pass(), || format!("{} k={:?}: {}", r.check, r.k, r.to_json()))?;
        compared += r.compared;
    }
    Ok(format!("{} reports, {compared} coefficients compared", reports.len()))
}

fn pde() -> Outcome {
    let cache = CountCache::new();
    let reports: Result<Vec<_>, _> = (1..=4).map(|k| verify_pde_e(k, 8, &cache)).collect();
    report_all(&reports.map_err(|e| e.to_string())?)
}

fn dde() -> Outcome {
    let cache = CountCache::new();
    let reports: Result<Vec<_>, _> = (1..=4).map(|k| verify_dde_g(k, 8, &cache)).collect();
    report_all(&reports.map_err(|e| e.to_string())?)
}

fn g3() -> Outcome {
    let cache = CountCache::new();
    let closed = closed_form_g3(10).map_err(|e| e.to_string())?;
    for (m, c) in closed.terms() {
        ensure(c.is_integer() && *c >= BigRational::zero(), || format!("coefficient of {m} is {c}"))?;
    }
    report_all(&verify_g3(10, &cache).map_err(|e| e.to_string())?)
}

fn e2() -> Outcome {
    let cache = CountCache::new();
    report_all(&verify_e2(12, &cache).map_err(|e| e.to_string())?)
}

fn slices() -> Outcome {
    report_all(&verify_h(12).map_err(|e| e.to_string())?)
}

fn three_value() -> Outcome {
    let cache = CountCache::new();
    let mut n = 0;
    for s in 3..=10u32 {
        for k in 1..s {
            for l in 1..s - k {
                let m = s - k - l;
                let (ki, li, mi) = (i64::from(k), i64::from(l), i64::from(m));
                let coeff = coeff_theorem_v(ki, li, mi).map_err(|e| e.to_string())?;
                let sum = binomial_formula_v(ki, li, mi).map_err(|e| e.to_string())?;
                let a = BigInt::from(a_infinity(&mv(&[k, l, m]), &cache));
                ensure(coeff == sum && sum == a, || format!("({k},{l},{m}): {coeff} / {sum} / {a}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} triples"))
}

fn degree_drop() -> Result<usize, String> {
    let mut n = 0;
    for m in MultiplicityVector::all_up_to(4, 5) {
        if m.total() == 0 {
            continue;
        }
        let mono = Monomial::from_dense(m.parts());
        let image = apply_a(&SparsePoly::term(mono.clone(), BigInt::one()));
        ensure(!image.is_zero(), || format!("A({mono}) = 0"))?;
        for (t, c) in image.terms() {
            ensure(t.degree() + 1 == mono.degree() && *c > BigInt::zero(), || {
                format!("A({mono}) has term {c}*{t}")
            })?;
        }
        n += 1;
    }
    Ok(n)
}

fn operator_laws() -> Result<usize, String> {
    let cache = CountCache::new();
    let mut samples = vec![build_g(3, 6, &cache).map_err(|e| e.to_string())?];
    samples.push(closed_form_g3(6).map_err(|e| e.to_string())?);
    let mut mixed = TruncSeries::zero(3, 6);
    for (i, m) in MultiplicityVector::all_up_to(3, 6).iter().enumerate() {
        let c = BigRational::new(BigInt::from(i as i64 % 7 - 3), BigInt::from(i as i64 % 5 + 1));
        mixed.add_term(Monomial::from_dense(m.parts()), c);
    }
    samples.push(mixed);
    let err = |e: gzcount::polycore::SeriesError| e.to_string();
    let mut n = 0;
    for f in &samples {
        for i in 1..=3 {
            let y = Monomial::var(i);
            let rebuilt = &f.set_zero(i).map_err(err)? + &f.divdiff(i).map_err(err)?.mul_monomial(&y);
            ensure(rebuilt == *f, || format!("reconstruction in variable {i}"))?;
            ensure(f.mul_monomial(&y).divdiff(i).map_err(err)? == *f, || format!("divdiff after shift in {i}"))?;
            ensure(f.integrate(i).map_err(err)?.d_dz(i).map_err(err)? == *f, || format!("integrate then differentiate in {i}"))?;
            let back = f.d_dz(i).map_err(err)?.integrate(i).map_err(err)?;
            let want = f.set_zero(i).map_err(err)?.truncate(back.cap());
            ensure(&f.truncate(back.cap()) - &back == want, || format!("differentiate then integrate in {i}"))?;
            for j in 1..=3 {
                let dij = f.d_dz(i).map_err(err)?.d_dz(j).map_err(err)?;
                let dji = f.d_dz(j).map_err(err)?.d_dz(i).map_err(err)?;
                ensure(dij == dji, || format!("derivatives {i},{j} do not commute"))?;
                let ddij = f.divdiff(i).map_err(err)?.divdiff(j).map_err(err)?;
                let ddji = f.divdiff(j).map_err(err)?.divdiff(i).map_err(err)?;
                ensure(ddij == ddji, || format!("divided differences {i},{j} do not commute"))?;
                n += 2;
            }
            n += 4;
        }
    }
    Ok(n)
}

fn truncation() -> Result<usize, String> {
    let cache = CountCache::new();
    let mut n = 0;
    for k in 1..=3 {
        let big = build_g(k, 9, &cache).map_err(|e| e.to_string())?;
        for c in 0..9 {
            ensure(big.truncate(c) == build_g(k, c, &cache).map_err(|e| e.to_string())?, || {
                format!("G_{k} at cap {c}")
            })?;
            n += 1;
        }
    }
    let big = closed_form_g3(9).map_err(|e| e.to_string())?;
    for c in 0..9 {
        ensure(big.truncate(c) == closed_form_g3(c).map_err(|e| e.to_string())?, || format!("closed G_3 at cap {c}"))?;
        n += 1;
    }
    Ok(n)
}

fn reversal() -> Result<usize, String> {
    let cache = CountCache::new();
    let mut n = 0;
    for total in 0..=8 {
        for parts in compositions(total) {
            let m = mv(&parts);
            let a = a_infinity(&m, &cache);
            let r = a_infinity(&m.reversed(), &cache);
            ensure(a == r, || format!("{m}: {a} vs reversed {r}"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn zero_normalization() -> Result<usize, String> {
    let cache = CountCache::new();
    let config = OracleConfig::default();
    let mut n = 0;
    for m in MultiplicityVector::all_up_to(4, 4) {
        if m.is_compressed() || !m.is_canonical() {
            continue;
        }
        let shape = GzShape::new(m.to_partition()).unwrap();
        let oracle = BigUint::from(oracle_count(&shape, &config).map_err(|e| e.to_string())?);
        let a = a_infinity(&m, &cache);
        ensure(a == oracle, || format!("{m}: a_infinity {a}, oracle {oracle}"))?;
        n += 1;
    }
    Ok(n)
}

fn cache_roundtrip_and_tamper() -> Result<usize, String> {
    let cache = CountCache::new();
    for m in MultiplicityVector::all_up_to(3, 6) {
        a_infinity(&m, &cache);
    }
    let text = cache.to_json();
    let back = gzcount::counting::CountCache::from_json(&text).map_err(|e| e.to_string())?;
    ensure(back.snapshot() == cache.snapshot(), || "in-memory roundtrip".into())?;

    let path = std::env::temp_dir().join(format!("gzcount-acceptance-{}.json", std::process::id()));
    cache.save(&path).map_err(|e| e.to_string())?;
    let loaded = CountCache::load(&path).map_err(|e| e.to_string());
    let _ = std::fs::remove_file(&path);
    ensure(loaded?.snapshot() == cache.snapshot(), || "file roundtrip".into())?;

    let edit = |f: &dyn Fn(&mut serde_json::Value)| {
        let mut v: serde_json::Value = serde_json::from_str(&text).expect("cache json");
        f(&mut v);
        v.to_string()
    };
    let tampered = edit(&|v| v["entries"]["1,1,1"] = "8".into());
    let bad = CountCache::from_json(&tampered).map_err(|e| e.to_string())?;
    let m = mv(&[1, 1, 1]);
    ensure(a_infinity(&m, &bad) != count_by_fiber_recursion(&m), || "tampered value not detected".into())?;

    for broken in [
        edit(&|v| v["entries"]["1,0,1"] = "7".into()),
        edit(&|v| v["entries"]["1,1,1"] = "-7".into()),
        edit(&|v| v["entries"]["1,1,1"] = 7.into()),
        edit(&|v| v["version"] = 2.into()),
    ] {
        ensure(CountCache::from_json(&broken).is_err(), || format!("accepted {broken:.60}"))?;
    }
    Ok(cache.len())
}

fn properties() -> Outcome {
    let a = degree_drop()?;
    let b = operator_laws()?;
    let c = truncation()?;
    let d = reversal()?;
    let e = zero_normalization()?;
    let f = cache_roundtrip_and_tamper()?;
    Ok(format!(
        "A on {a} monomials, {b} operator laws, {c} truncations, {d} reversals, {e} shapes with gaps, cache of {f}"
    ))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "closed forms for one and two values", limit: Duration::from_secs(1), run: closed_forms_small_k },
        Criterion { id: 2, name: "five-way agreement at (1,1,1)", limit: Duration::from_secs(1), run: five_way },
        Criterion { id: 3, name: "oracle equivalence for totals up to 5", limit: Duration::from_secs(120), run: oracle_equivalence },
        Criterion { id: 4, name: "differential equation for E_k, k <= 4, cap 8", limit: Duration::from_secs(60), run: pde },
        Criterion { id: 5, name: "difference equation for G_k, k <= 4, cap 8", limit: Duration::from_secs(60), run: dde },
        Criterion { id: 6, name: "closed form of G_3 to degree 10", limit: Duration::from_secs(30), run: g3 },
        Criterion { id: 7, name: "Bessel form of E_2 to degree 12", limit: Duration::from_secs(10), run: e2 },
        Criterion { id: 8, name: "slice polynomials and tables for s <= 12", limit: Duration::from_secs(30), run: slices },
        Criterion { id: 9, name: "three-value formulas for s <= 10", limit: Duration::from_secs(30), run: three_value },
        Criterion { id: 10, name: "property suites", limit: Duration::from_secs(60), run: properties },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; took longer than {:?}", c.limit)),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} criterion {:>2}: {} [{:.3} s] {detail}", c.id, c.name, elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
