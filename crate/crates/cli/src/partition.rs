//! Partition expressions: `1,1,2,3`, `1 1 2 3` or `1^2 2 3`.

use std::fmt;

const MAX_PARTS: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionExpr(Vec<i64>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError(String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseError {}

impl PartitionExpr {
    pub fn values(&self) -> &[i64] {
        &self.0
    }
}

fn int<T: std::str::FromStr>(tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse().map_err(|_| ParseError(format!("bad {what} '{tok}'")))
}

impl std::str::FromStr for PartitionExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut values = Vec::new();
        for tok in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let (value, mult) = match tok.split_once('^') {
                Some((v, m)) => (int::<i64>(v, "value")?, int::<u64>(m, "multiplicity")?),
                None => (int::<i64>(tok, "value")?, 1),
            };
            if mult == 0 {
                return Err(ParseError(format!("multiplicity must be positive in '{tok}'")));
            }
            if values.len() as u64 + mult > MAX_PARTS {
                return Err(ParseError(format!("more than {MAX_PARTS} parts")));
            }
            values.extend(std::iter::repeat_n(value, mult as usize));
        }
        if values.is_empty() {
            return Err(ParseError("empty partition".into()));
        }
        if let Some(w) = values.windows(2).find(|w| w[0] > w[1]) {
            return Err(ParseError(format!("values must be weakly increasing, found {} before {}", w[0], w[1])));
        }
        Ok(PartitionExpr(values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Vec<i64>, ParseError> {
        s.parse::<PartitionExpr>().map(|p| p.0)
    }

    #[test]
    fn forms() {
        assert_eq!(parse("1,1,2,3").unwrap(), vec![1, 1, 2, 3]);
        assert_eq!(parse("1 1 2 3").unwrap(), vec![1, 1, 2, 3]);
        assert_eq!(parse("1^2 2 3").unwrap(), vec![1, 1, 2, 3]);
        assert_eq!(parse(" 4^6 ").unwrap(), vec![4; 6]);
        assert_eq!(parse("-2^2, 0").unwrap(), vec![-2, -2, 0]);
    }

    #[test]
    fn rejects() {
        assert!(parse("").is_err());
        assert!(parse("3 2").is_err());
        assert!(parse("1^0 2").is_err());
        assert!(parse("1^-1").is_err());
        assert!(parse("a").is_err());
        assert!(parse("1^2^3").is_err());
        assert!(parse("1^5000").is_err());
    }
}
