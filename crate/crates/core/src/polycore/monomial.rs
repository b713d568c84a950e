use std::cmp::Ordering;
use std::fmt;

/// A monomial `x_{v1}^{e1} ... x_{vr}^{er}` over 1-based variable indices.
///
/// Stored as `(variable, exponent)` pairs with strictly increasing variables
/// and positive exponents, so equal monomials have equal representations.
///
/// The ordering is graded: lower total degree first, then within a degree the
/// monomial with the larger power of the lowest-indexed variable comes first
/// (`1 < x < y < x^2 < xy < y^2` in two variables). This is a monomial order,
/// and it is the order every dump in the crate uses.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    /// The single variable `x_var`. Panics if `var == 0`.
    pub fn var(var: u32) -> Self {
        Monomial::var_pow(var, 1)
    }

    pub fn var_pow(var: u32, exp: u32) -> Self {
        assert!(var >= 1, "variable indices are 1-based");
        if exp == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: vec![(var, exp)],
        }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs; repeated
    /// variables are merged and zero exponents dropped.
    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut factors: Vec<(u32, u32)> = Vec::new();
        for (v, e) in pairs {
            assert!(v >= 1, "variable indices are 1-based");
            if e > 0 {
                factors.push((v, e));
            }
        }
        factors.sort_unstable();
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { factors: merged }
    }

    /// Dense exponent vector `(e_1, ..., e_n)` for variables `1..=n`.
    pub fn from_dense(exps: &[u32]) -> Self {
        Monomial {
            factors: exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i as u32 + 1, e))
                .collect(),
        }
    }

    /// Dense exponents for variables `1..=nvars`. Variables beyond `nvars`
    /// are ignored.
    pub fn to_dense(&self, nvars: usize) -> Vec<u32> {
        let mut out = vec![0; nvars];
        for &(v, e) in &self.factors {
            if (v as usize) <= nvars {
                out[v as usize - 1] = e;
            }
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, var: u32) -> u32 {
        self.factors
            .binary_search_by_key(&var, |&(v, _)| v)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// Variables that occur, in increasing order.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().map(|&(v, _)| v)
    }

    /// Exponents in order of increasing variable index.
    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().map(|&(_, e)| e)
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn max_var(&self) -> u32 {
        self.factors.last().map(|&(v, _)| v).unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { factors: out }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut j = 0;
        for &(v, e) in &self.factors {
            if j < other.factors.len() && other.factors[j].0 < v {
                return None;
            }
            if j < other.factors.len() && other.factors[j].0 == v {
                let oe = other.factors[j].1;
                j += 1;
                match e.cmp(&oe) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - oe)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.factors.len() {
            return None;
        }
        Some(Monomial { factors: out })
    }

    /// Raises or lowers the exponent of `var` by `delta`; `None` if it would
    /// go negative.
    pub fn shift(&self, var: u32, delta: i64) -> Option<Monomial> {
        let e = self.exponent(var) as i64 + delta;
        if e < 0 {
            return None;
        }
        let rest = self.factors.iter().copied().filter(|&(v, _)| v != var);
        Some(Monomial::from_pairs(rest.chain(std::iter::once((var, e as u32)))))
    }

    /// Product of the distinct variables of the support.
    pub fn squarefree_part(&self) -> Monomial {
        Monomial {
            factors: self.factors.iter().map(|&(v, _)| (v, 1)).collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // Walk variables in increasing order; the first variable whose
            // exponents differ decides, with the larger exponent sorting first.
            let (a, b) = (&self.factors, &other.factors);
            let (mut i, mut j) = (0, 0);
            loop {
                let ea = a.get(i);
                let eb = b.get(j);
                match (ea, eb) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Less,
                    (None, Some(_)) => return Ordering::Greater,
                    (Some(&(va, xa)), Some(&(vb, xb))) => {
                        if va < vb {
                            return Ordering::Less;
                        }
                        if vb < va {
                            return Ordering::Greater;
                        }
                        if xa != xb {
                            return xb.cmp(&xa);
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (n, &(v, e)) in self.factors.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{e}")?;
            }
        }
        Ok(())
    }
}
