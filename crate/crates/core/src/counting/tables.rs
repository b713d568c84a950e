use std::collections::BTreeMap;
use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;

use super::formulas::binomial;
use super::CountError;
use crate::polycore::{Monomial, SparsePoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableVariant {
    /// `T^s`: cells `k + m <= s`, the coefficients of `g_s`.
    Plain,
    /// The skew table: cells `0 <= k, m <= s`, the coefficients of `h_s`.
    Skew,
}

impl TableVariant {
    pub fn name(self) -> &'static str {
        match self {
            TableVariant::Plain => "plain",
            TableVariant::Skew => "skew",
        }
    }
}

/// Triangular table of integers indexed by the southwest corner `(k, m)` of
/// each cell. Every cell of the domain is stored, zeros included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriTable {
    s: u32,
    variant: TableVariant,
    entries: BTreeMap<(u32, u32), BigInt>,
}

fn in_domain(variant: TableVariant, s: u32, k: u32, m: u32) -> bool {
    match variant {
        TableVariant::Plain => k + m <= s,
        TableVariant::Skew => k <= s && m <= s,
    }
}

fn domain(variant: TableVariant, s: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..=s).flat_map(move |k| (0..=s).map(move |m| (k, m))).filter(move |&(k, m)| in_domain(variant, s, k, m))
}

impl TriTable {
    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn variant(&self) -> TableVariant {
        self.variant
    }

    pub fn entry(&self, k: u32, m: u32) -> Option<&BigInt> {
        self.entries.get(&(k, m))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.entries.iter()
    }

    fn get_or_zero(&self, k: i64, m: i64) -> BigInt {
        if k < 0 || m < 0 {
            return BigInt::zero();
        }
        self.entries.get(&(k as u32, m as u32)).cloned().unwrap_or_default()
    }

    /// Table holding the coefficients of `p` (in `x = x1`, `z = x2`).
    pub fn from_polynomial(s: u32, variant: TableVariant, p: &SparsePoly) -> Result<TriTable, CountError> {
        let mut entries: BTreeMap<(u32, u32), BigInt> = domain(variant, s).map(|c| (c, BigInt::zero())).collect();
        for (mono, c) in p.terms() {
            let cell = (mono.exponent(1), mono.exponent(2));
            match entries.get_mut(&cell) {
                Some(slot) if mono.max_var() <= 2 => *slot = c.clone(),
                _ => return Err(CountError::OutsideTable(mono.to_string())),
            }
        }
        Ok(TriTable { s, variant, entries })
    }

    pub fn to_polynomial(&self) -> SparsePoly {
        SparsePoly::from_terms(
            self.entries
                .iter()
                .map(|(&(k, m), c)| (Monomial::from_dense(&[k, m]), c.clone())),
        )
    }

    /// `entry(k, m) = -entry(s-m, s-k)` on the whole domain. This reflection
    /// fixes the cells with `k + m = s`, which are therefore zero.
    pub fn is_skew_symmetric(&self) -> bool {
        self.entries.iter().all(|(&(k, m), v)| {
            k <= self.s && m <= self.s && self.entries.get(&(self.s - m, self.s - k)) == Some(&-v)
        })
    }

    /// Grid with the southwest corner at the bottom left: one line per `m`
    /// from the top down, one column per `k`; cells outside the domain are
    /// empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for m in (0..=self.s).rev() {
            let row: Vec<String> = (0..=self.s)
                .map(|k| self.entries.get(&(k, m)).map(BigInt::to_string).unwrap_or_default())
                .collect();
            writeln!(out, "{}", row.join(",")).expect("write to string");
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<_> = self
            .entries
            .iter()
            .map(|(&(k, m), v)| json!({"k": k, "m": m, "value": v.to_string()}))
            .collect();
        json!({"s": self.s, "variant": self.variant.name(), "cells": cells})
    }
}

/// Builds `T^s` or its skew counterpart from the first table by the local
/// neighbor rules.
///
/// Plain: every old cell gains its west, south and southwest neighbors, and
/// the new diagonal `k + m = s + 1` holds the sum of its west and south
/// neighbors. Skew: every cell gains its west, south and southwest
/// neighbors, then each cell `(k, m)` on `k + m = s` gains `C(s, m)` and the
/// cell `(k+1, m+1)` loses it.
pub fn tri_table(s: u32, variant: TableVariant) -> Result<TriTable, CountError> {
    if s == 0 {
        return Err(CountError::InvalidDegree(s));
    }
    let first: BTreeMap<(u32, u32), BigInt> = match variant {
        TableVariant::Plain => [(0, 0), (1, 0), (0, 1)].into_iter().map(|c| (c, BigInt::one())).collect(),
        TableVariant::Skew => [((0, 0), 1), ((1, 0), 0), ((0, 1), 0), ((1, 1), -1)]
            .into_iter()
            .map(|(c, v)| (c, BigInt::from(v)))
            .collect(),
    };
    let mut table = TriTable { s: 1, variant, entries: first };
    while table.s < s {
        table = step(&table);
    }
    Ok(table)
}

fn step(old: &TriTable) -> TriTable {
    let s = old.s;
    let next = s + 1;
    let mut entries = BTreeMap::new();
    for (k, m) in domain(old.variant, next) {
        let (ki, mi) = (i64::from(k), i64::from(m));
        let west = old.get_or_zero(ki - 1, mi);
        let south = old.get_or_zero(ki, mi - 1);
        let value = match old.variant {
            TableVariant::Plain if k + m == next => west + south,
            _ => old.get_or_zero(ki, mi) + west + south + old.get_or_zero(ki - 1, mi - 1),
        };
        entries.insert((k, m), value);
    }
    if old.variant == TableVariant::Skew {
        for m in 0..=s {
            let k = s - m;
            let b = binomial(i64::from(s), i64::from(m));
            *entries.get_mut(&(k, m)).expect("in domain") += &b;
            *entries.get_mut(&(k + 1, m + 1)).expect("in domain") -= &b;
        }
    }
    TriTable { s: next, variant: old.variant, entries }
}
