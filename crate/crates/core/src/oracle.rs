//! Ground-truth vertex enumeration straight from the interlacing
//! inequalities, in exact rational arithmetic.
//!
//! Pinned coordinates (whose two bounds coincide) are substituted out, the
//! rest of the polytope is checked to be full-dimensional by exhibiting an
//! interior point, and then every square subsystem of the remaining
//! inequalities with independent normals is solved and kept if feasible.
//! Subsets are walked depth-first in lexicographic order with an
//! incrementally maintained reduced echelon form, so dependent prefixes are
//! pruned early.

use std::collections::BTreeSet;
use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::polycore::fmt_rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("shape must have at least one entry")]
    EmptyShape,
    #[error("shape is not weakly increasing: {0} > {1}")]
    NotMonotone(i64, i64),
    #[error("ambient dimension {dim} exceeds the limit {limit}")]
    DimensionLimit { dim: usize, limit: usize },
    #[error("reduced polytope is not full-dimensional: {0}")]
    NotFullDimensional(String),
}

/// A weakly increasing top row `lambda_1 <= ... <= lambda_n`, `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GzShape {
    lambda: Vec<i64>,
}

impl GzShape {
    pub fn new(lambda: Vec<i64>) -> Result<Self, OracleError> {
        if lambda.is_empty() {
            return Err(OracleError::EmptyShape);
        }
        if let Some(w) = lambda.windows(2).find(|w| w[0] > w[1]) {
            return Err(OracleError::NotMonotone(w[0], w[1]));
        }
        Ok(GzShape { lambda })
    }

    pub fn lambda(&self) -> &[i64] {
        &self.lambda
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n() * (self.n() - 1) / 2
    }
}

/// One inequality `normal . u <= offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub normal: Vec<BigRational>,
    pub offset: BigRational,
}

impl Row {
    fn value(&self, point: &[BigRational]) -> BigRational {
        self.normal
            .iter()
            .zip(point)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, u)| a * u)
            .fold(BigRational::zero(), |acc, t| acc + t)
    }

    /// `offset - normal . point`, nonnegative exactly when satisfied.
    pub fn slack(&self, point: &[BigRational]) -> BigRational {
        &self.offset - self.value(point)
    }
}

/// Inequality description of the polytope. Coordinates `u_{i,j}`
/// (`1 <= i < n`, `1 <= j <= n - i`) are numbered row by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRep {
    pub dim: usize,
    pub rows: Vec<Row>,
    pub coords: Vec<(usize, usize)>,
    pub lambda: Vec<i64>,
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn coord_index(n: usize, i: usize, j: usize) -> usize {
    // Rows 1..i-1 hold (n-1) + (n-2) + ... + (n-i+1) coordinates.
    (1..i).map(|r| n - r).sum::<usize>() + (j - 1)
}

/// Two rows per coordinate: `a <= u_{i,j}` and `u_{i,j} <= b`, where `a`, `b`
/// are the upper-left and upper-right entries (row 0 is `lambda`).
pub fn build_hrep(shape: &GzShape) -> HRep {
    let n = shape.n();
    let dim = shape.ambient_dim();
    let lambda = shape.lambda();
    let mut coords = Vec::with_capacity(dim);
    let mut rows = Vec::with_capacity(2 * dim);
    for i in 1..n {
        for j in 1..=n - i {
            coords.push((i, j));
            let c = coord_index(n, i, j);
            let upper = |jj: usize| -> Result<usize, i64> {
                if i == 1 {
                    Err(lambda[jj - 1])
                } else {
                    Ok(coord_index(n, i - 1, jj))
                }
            };
            // a - u <= 0
            let mut normal = vec![BigRational::zero(); dim];
            normal[c] = -BigRational::one();
            let offset = match upper(j) {
                Ok(a) => {
                    normal[a] = BigRational::one();
                    BigRational::zero()
                }
                Err(a) => int(-a),
            };
            rows.push(Row { normal, offset });
            // u - b <= 0
            let mut normal = vec![BigRational::zero(); dim];
            normal[c] = BigRational::one();
            let offset = match upper(j + 1) {
                Ok(b) => {
                    normal[b] = -BigRational::one();
                    BigRational::zero()
                }
                Err(b) => int(b),
            };
            rows.push(Row { normal, offset });
        }
    }
    HRep {
        dim,
        rows,
        coords,
        lambda: lambda.to_vec(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest ambient dimension the enumerator accepts.
    pub max_dim: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_dim: 10 }
    }
}

/// Exact, deduplicated vertex coordinates in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexSet {
    pub points: BTreeSet<Vec<BigRational>>,
}

impl VertexSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Checks that every point satisfies every row and that its tight rows
    /// have full rank, i.e. the point is the unique solution of them.
    pub fn verify(&self, h: &HRep) -> bool {
        self.points.iter().all(|p| {
            if h.rows.iter().any(|r| r.slack(p).is_negative()) {
                return false;
            }
            let tight: Vec<Vec<BigRational>> = h
                .rows
                .iter()
                .filter(|r| r.slack(p).is_zero())
                .map(|r| r.normal.clone())
                .collect();
            rank(tight, h.dim) == h.dim
        })
    }

    /// One vertex per line, coordinates as exact rationals.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let cells: Vec<String> = p.iter().map(fmt_rational).collect();
            writeln!(out, "{}", cells.join(",")).expect("write to string");
        }
        out
    }

    pub fn to_json(&self, h: &HRep) -> serde_json::Value {
        let vertices: Vec<Vec<String>> = self
            .points
            .iter()
            .map(|p| p.iter().map(fmt_rational).collect())
            .collect();
        let coords: Vec<String> = h.coords.iter().map(|(i, j)| format!("u{i},{j}")).collect();
        json!({
            "lambda": h.lambda,
            "dim": h.dim,
            "coordinates": coords,
            "count": vertices.len(),
            "vertices": vertices,
        })
    }
}

fn rank(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> usize {
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = &row[col] / &pivot_row[col];
                for (x, p) in row[col..ncols].iter_mut().zip(&pivot_row[col..ncols]) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Midpoint refinement: every entry is the average of its two upper
/// neighbors. For a weakly increasing top row this is strictly interior in
/// every coordinate whose bounds differ.
fn midpoint_point(h: &HRep) -> Vec<BigRational> {
    let n = h.lambda.len();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut prev: Vec<BigRational> = h.lambda.iter().map(|&v| int(v)).collect();
    let mut point = Vec::with_capacity(h.dim);
    for _ in 1..n {
        let next: Vec<BigRational> = prev.windows(2).map(|w| (&w[0] + &w[1]) * &half).collect();
        point.extend(next.iter().cloned());
        prev = next;
    }
    point
}

struct Reduced {
    free: Vec<usize>,
    base: Vec<BigRational>,
    /// Augmented rows `[normal over free coordinates | offset]`.
    rows: Vec<Vec<BigRational>>,
}

fn reduce(h: &HRep) -> Result<Reduced, OracleError> {
    let lambda = &h.lambda;
    let mut base = vec![BigRational::zero(); h.dim];
    let mut free = Vec::new();
    for (idx, &(i, j)) in h.coords.iter().enumerate() {
        // u_{i,j} is squeezed between lambda_j and lambda_{i+j}.
        if lambda[j - 1] == lambda[i + j - 1] {
            base[idx] = int(lambda[j - 1]);
        } else {
            free.push(idx);
        }
    }

    let interior = midpoint_point(h);
    for (idx, v) in base.iter().enumerate() {
        if !free.contains(&idx) && &interior[idx] != v {
            return Err(OracleError::NotFullDimensional(format!(
                "pinned coordinate {:?} disagrees with the interior candidate",
                h.coords[idx]
            )));
        }
    }

    let mut seen = BTreeSet::new();
    let mut rows = Vec::new();
    for (r, row) in h.rows.iter().enumerate() {
        let involves_free = free.iter().any(|&c| !row.normal[c].is_zero());
        let slack = row.slack(&interior);
        if involves_free && !slack.is_positive() {
            return Err(OracleError::NotFullDimensional(format!(
                "row {r} is not strict at the interior candidate"
            )));
        }
        if !involves_free {
            if slack.is_negative() {
                return Err(OracleError::NotFullDimensional(format!("row {r} is infeasible")));
            }
            continue;
        }
        let mut aug: Vec<BigRational> = free.iter().map(|&c| row.normal[c].clone()).collect();
        // Free coordinates are zero in `base`, so this moves the pinned part to the offset.
        aug.push(row.slack(&base));
        if seen.insert(aug.clone()) {
            rows.push(aug);
        }
    }
    Ok(Reduced { free, base, rows })
}

/// Basis rows of the reduced echelon form: `(pivot column, augmented row)`.
type Echelon = Vec<(usize, Vec<BigRational>)>;

/// Adds `row` to the echelon form; `None` when it is dependent.
fn extend_echelon(basis: &Echelon, row: &[BigRational], d: usize) -> Option<Echelon> {
    let mut v = row.to_vec();
    for (p, b) in basis {
        if !v[*p].is_zero() {
            let f = v[*p].clone();
            for c in 0..=d {
                if !b[c].is_zero() {
                    let t = &f * &b[c];
                    v[c] -= t;
                }
            }
        }
    }
    let pivot = (0..d).find(|&c| !v[c].is_zero())?;
    let inv = v[pivot].recip();
    for c in v.iter_mut() {
        *c *= &inv;
    }
    let mut next = basis.clone();
    for (_, b) in next.iter_mut() {
        if !b[pivot].is_zero() {
            let f = b[pivot].clone();
            for c in 0..=d {
                if !v[c].is_zero() {
                    let t = &f * &v[c];
                    b[c] -= t;
                }
            }
        }
    }
    next.push((pivot, v));
    Some(next)
}

fn search(
    red: &Reduced,
    start: usize,
    basis: &Echelon,
    out: &mut BTreeSet<Vec<BigRational>>,
) {
    let d = red.free.len();
    if basis.len() == d {
        let mut x = vec![BigRational::zero(); d];
        for (p, b) in basis {
            x[*p] = b[d].clone();
        }
        let feasible = red.rows.iter().all(|r| {
            let lhs = r[..d]
                .iter()
                .zip(&x)
                .filter(|(a, _)| !a.is_zero())
                .fold(BigRational::zero(), |acc, (a, u)| acc + a * u);
            lhs <= r[d]
        });
        if feasible {
            let mut point = red.base.clone();
            for (k, &f) in red.free.iter().enumerate() {
                point[f] = x[k].clone();
            }
            out.insert(point);
        }
        return;
    }
    let need = d - basis.len();
    for j in start..red.rows.len() {
        if red.rows.len() - j < need {
            break;
        }
        if let Some(next) = extend_echelon(basis, &red.rows[j], d) {
            search(red, j + 1, &next, out);
        }
    }
}

/// Exact vertex set of the polytope described by `h`.
pub fn enumerate_vertices(h: &HRep, config: &OracleConfig) -> Result<VertexSet, OracleError> {
    if h.dim > config.max_dim {
        return Err(OracleError::DimensionLimit {
            dim: h.dim,
            limit: config.max_dim,
        });
    }
    let red = reduce(h)?;
    let d = red.free.len();
    if d == 0 {
        return Ok(VertexSet {
            points: BTreeSet::from([red.base.clone()]),
        });
    }
    let m = red.rows.len();
    let points = (0..m)
        .into_par_iter()
        .filter_map(|first| {
            let mut out = BTreeSet::new();
            let basis = extend_echelon(&Vec::new(), &red.rows[first], d)?;
            search(&red, first + 1, &basis, &mut out);
            Some(out)
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(VertexSet { points })
}

pub fn oracle_count(shape: &GzShape, config: &OracleConfig) -> Result<usize, OracleError> {
    Ok(enumerate_vertices(&build_hrep(shape), config)?.len())
}
