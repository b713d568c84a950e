use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::{CountCache, CountError, MultiplicityVector};
use crate::polycore::{Monomial, SparsePoly};

/// The degree-lowering operator `A`.
///
/// A monomial with support `j_1 < ... < j_k` is written as
/// `x_{j_1} ... x_{j_k} * f`, and its image is
/// `(x_{j_1} + x_{j_2}) ... (x_{j_{k-1}} + x_{j_k}) * f`. The product is empty
/// (equal to 1) when `k = 1`, and `A(1) = 1`. Extended linearly.
pub fn apply_a(p: &SparsePoly) -> SparsePoly {
    let mut out = SparsePoly::zero();
    for (m, c) in p.terms() {
        if m.is_one() {
            out.add_term(Monomial::one(), c.clone());
            continue;
        }
        let support: Vec<u32> = m.support().collect();
        let rest = m.div(&m.squarefree_part()).expect("squarefree part divides");
        let mut image = SparsePoly::term(rest, c.clone());
        for w in support.windows(2) {
            image = &image * &(&SparsePoly::var(w[0]) + &SparsePoly::var(w[1]));
        }
        out = &out + &image;
    }
    out
}

/// `A^infinity(x_1^{i_1} ... x_k^{i_k})`, which is the number of vertices of
/// the polytope of `1^{i_1} ... k^{i_k}`.
///
/// Applies `A` to one monomial at a time and recurses into each monomial of
/// the image; results are memoized in `cache` under the compressed vector.
pub fn a_infinity(m: &MultiplicityVector, cache: &CountCache) -> BigUint {
    a_infinity_key(m.compressed().parts(), cache)
}

fn a_infinity_key(key: &[u32], cache: &CountCache) -> BigUint {
    if key.is_empty() {
        return BigUint::one();
    }
    if let Some(v) = cache.get(key) {
        return v;
    }
    let image = apply_a(&SparsePoly::term(Monomial::from_dense(key), BigInt::one()));
    let mut total = BigUint::zero();
    for (mono, c) in image.terms() {
        // Support of the image is an ordered subset of the original support,
        // so the exponents in variable order are already a compressed key.
        let sub: Vec<u32> = mono.exponents().collect();
        let c = c.to_biguint().expect("A has nonnegative coefficients");
        total += c * a_infinity_key(&sub, cache);
    }
    cache.insert_if_absent(key.to_vec(), total)
}

/// `A^infinity` without zero stripping: the memo is keyed by the dense
/// exponent vector exactly as given, zeros included.
pub fn a_infinity_raw(exps: &[u32], memo: &mut HashMap<Vec<u32>, BigUint>) -> BigUint {
    if exps.iter().all(|&e| e == 0) {
        return BigUint::one();
    }
    if let Some(v) = memo.get(exps) {
        return v.clone();
    }
    let image = apply_a(&SparsePoly::term(Monomial::from_dense(exps), BigInt::one()));
    let mut total = BigUint::zero();
    for (mono, c) in image.terms() {
        let sub = mono.to_dense(exps.len());
        total += c.to_biguint().expect("nonnegative") * a_infinity_raw(&sub, memo);
    }
    memo.insert(exps.to_vec(), total.clone());
    total
}

/// Vertex count of the polytope of a weakly increasing integer list.
pub fn vertex_count(partition: &[i64], cache: &CountCache) -> Result<BigUint, CountError> {
    let m = MultiplicityVector::from_partition(partition)?;
    Ok(a_infinity(&m, cache))
}

/// Coefficients `c_alpha` of `(x_1 + x_2) ... (x_{k-1} + x_k)`, obtained by
/// walking the vertices of the cube `[1,2] x ... x [k-1,k]`: at coordinate
/// `j` the vertex sits either at `j` (picking `x_j`) or at `j+1`.
fn cube_vertex_labels(k: usize) -> Vec<(Vec<u32>, BigUint)> {
    let mut tally: HashMap<Vec<u32>, BigUint> = HashMap::new();
    for corner in 0u64..(1u64 << (k - 1)) {
        let mut alpha = vec![0u32; k];
        for j in 0..k - 1 {
            let pick = if (corner >> j) & 1 == 0 { j } else { j + 1 };
            alpha[pick] += 1;
        }
        *tally.entry(alpha).or_default() += 1u32;
    }
    let mut out: Vec<_> = tally.into_iter().collect();
    out.sort();
    out
}

/// Vertex count by projecting onto the cube of the first-row coordinates at
/// the value boundaries and summing over its fibers: the fiber over the cube
/// vertex labelled `alpha` has the type of `1^{i_1-1+alpha_1} ... k^{i_k-1+alpha_k}`.
///
/// Self-contained: it shares neither the operator code nor the count cache
/// with [`a_infinity`].
pub fn count_by_fiber_recursion(m: &MultiplicityVector) -> BigUint {
    let mut memo = HashMap::new();
    let mut cubes = HashMap::new();
    fiber_count(m.compressed().parts(), &mut memo, &mut cubes)
}

fn fiber_count(
    mults: &[u32],
    memo: &mut HashMap<Vec<u32>, BigUint>,
    cubes: &mut HashMap<usize, Vec<(Vec<u32>, BigUint)>>,
) -> BigUint {
    // A single repeated value gives a point.
    if mults.len() <= 1 {
        return BigUint::one();
    }
    if let Some(v) = memo.get(mults) {
        return v.clone();
    }
    let k = mults.len();
    let labels = cubes.entry(k).or_insert_with(|| cube_vertex_labels(k)).clone();
    let mut total = BigUint::zero();
    for (alpha, c) in &labels {
        let fiber: Vec<u32> = mults
            .iter()
            .zip(alpha)
            .map(|(&i, &a)| i - 1 + a)
            .filter(|&e| e > 0)
            .collect();
        total += c * fiber_count(&fiber, memo, cubes);
    }
    memo.insert(mults.to_vec(), total.clone());
    total
}
