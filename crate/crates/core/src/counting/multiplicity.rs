use std::fmt;
use std::str::FromStr;

use super::CountError;

/// Exponent vector `(i_1, ..., i_k)` of the partition `1^{i_1} ... k^{i_k}`.
///
/// The combinatorial type of the polytope only depends on the positive
/// entries, so counting keys use [`MultiplicityVector::compressed`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct MultiplicityVector(Vec<u32>);

impl MultiplicityVector {
    /// Wraps the entries as given, zeros included.
    pub fn new(mults: Vec<u32>) -> Self {
        MultiplicityVector(mults)
    }

    pub fn empty() -> Self {
        MultiplicityVector(Vec::new())
    }

    /// Multiplicities of the distinct values of a weakly increasing list.
    pub fn from_partition(lambda: &[i64]) -> Result<Self, CountError> {
        if let Some(w) = lambda.windows(2).find(|w| w[0] > w[1]) {
            return Err(CountError::NotMonotone(w[0], w[1]));
        }
        let mut out: Vec<u32> = Vec::new();
        let mut prev: Option<i64> = None;
        for &v in lambda {
            if prev == Some(v) {
                *out.last_mut().expect("nonempty") += 1;
            } else {
                out.push(1);
                prev = Some(v);
            }
        }
        Ok(MultiplicityVector(out))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Length of the underlying partition.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Leading and trailing zeros stripped.
    pub fn canonical(&self) -> Self {
        let start = self.0.iter().position(|&e| e > 0).unwrap_or(self.0.len());
        let end = self.0.iter().rposition(|&e| e > 0).map_or(start, |p| p + 1);
        MultiplicityVector(self.0[start..end].to_vec())
    }

    pub fn is_canonical(&self) -> bool {
        self.0.first().is_none_or(|&e| e > 0) && self.0.last().is_none_or(|&e| e > 0)
    }

    /// All zeros removed.
    pub fn compressed(&self) -> Self {
        MultiplicityVector(self.0.iter().copied().filter(|&e| e > 0).collect())
    }

    pub fn is_compressed(&self) -> bool {
        self.0.iter().all(|&e| e > 0)
    }

    pub fn reversed(&self) -> Self {
        MultiplicityVector(self.0.iter().rev().copied().collect())
    }

    /// The partition `1^{i_1} 2^{i_2} ...` as an explicit weakly increasing list.
    pub fn to_partition(&self) -> Vec<i64> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(j, &e)| std::iter::repeat_n(j as i64 + 1, e as usize))
            .collect()
    }

    /// All vectors of length `k` with entry sum at most `max_total`, in
    /// graded order (lower totals first, larger leading entries first).
    pub fn all_up_to(k: usize, max_total: u32) -> Vec<MultiplicityVector> {
        let mut out = Vec::new();
        for total in 0..=max_total {
            let mut cur = vec![0u32; k];
            fill_compositions(&mut cur, 0, total, &mut out);
        }
        out
    }
}

fn fill_compositions(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<MultiplicityVector>) {
    if pos + 1 >= cur.len() {
        if let Some(last) = cur.last_mut() {
            *last = left;
            out.push(MultiplicityVector(cur.clone()));
        } else if left == 0 {
            out.push(MultiplicityVector(Vec::new()));
        }
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        fill_compositions(cur, pos + 1, left - e, out);
    }
    cur[pos] = 0;
}

impl From<Vec<u32>> for MultiplicityVector {
    fn from(v: Vec<u32>) -> Self {
        MultiplicityVector(v)
    }
}

impl fmt::Display for MultiplicityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, e) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Strict parser for the `"2,1,1"` form: plain decimal entries, no spaces,
/// no signs, no leading zeros.
impl FromStr for MultiplicityVector {
    type Err = CountError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Ok(MultiplicityVector::empty());
        }
        let bad = || CountError::BadMultiplicity(s.to_string());
        let mut out = Vec::new();
        for tok in s.split(',') {
            let digits_ok = !tok.is_empty()
                && tok.bytes().all(|b| b.is_ascii_digit())
                && (tok == "0" || !tok.starts_with('0'));
            if !digits_ok {
                return Err(bad());
            }
            out.push(tok.parse::<u32>().map_err(|_| bad())?);
        }
        Ok(MultiplicityVector(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_forms() {
        let m = MultiplicityVector::new(vec![0, 2, 0, 1, 0]);
        assert_eq!(m.canonical().parts(), &[2, 0, 1]);
        assert_eq!(m.compressed().parts(), &[2, 1]);
        assert_eq!(m.total(), 3);
        assert!(!m.is_canonical());
        assert!(m.canonical().is_canonical());
        assert!(!m.canonical().is_compressed());
        assert_eq!(MultiplicityVector::new(vec![0, 0]).canonical(), MultiplicityVector::empty());
    }

    #[test]
    fn from_partition_counts_runs() {
        let m = MultiplicityVector::from_partition(&[0, 0, 1, 2, 2, 2]).unwrap();
        assert_eq!(m.parts(), &[2, 1, 3]);
        assert_eq!(m.to_partition(), vec![1, 1, 2, 3, 3, 3]);
        assert!(matches!(
            MultiplicityVector::from_partition(&[1, 3, 2]),
            Err(CountError::NotMonotone(3, 2))
        ));
    }

    #[test]
    fn parse_is_strict() {
        assert_eq!("2,1,1".parse::<MultiplicityVector>().unwrap().parts(), &[2, 1, 1]);
        for bad in ["2, 1", "02,1", "-1", "1,,2", "a"] {
            assert!(bad.parse::<MultiplicityVector>().is_err(), "{bad}");
        }
        let m = MultiplicityVector::new(vec![3, 0, 12]);
        assert_eq!(m.to_string().parse::<MultiplicityVector>().unwrap(), m);
    }

    #[test]
    fn compositions_enumerated_in_graded_order() {
        let all = MultiplicityVector::all_up_to(2, 2);
        let parts: Vec<_> = all.iter().map(|m| m.parts().to_vec()).collect();
        assert_eq!(
            parts,
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        assert_eq!(MultiplicityVector::all_up_to(4, 8).len(), 495);
    }
}
