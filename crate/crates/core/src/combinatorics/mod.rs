//! Exact integer combinatorics: derivative index lists, partitions,
//! contingency tables with fixed margins, Kostka numbers and factorial
//! products.

mod kostka;
mod tables;

pub use kostka::{hook_length_count, kostka, lambda_factorial_s, KostkaTable};
pub use tables::{
    compositions, enumerate_margin_tables, magic_square_count, table_pair_count, table_pair_sum,
    table_pair_sum_direct, ContingencyTable, MarginTables,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{invalid, Error, Result};
use crate::exact::factorial;

/// A non-empty list of derivative orders, one per characteristic-polynomial
/// factor of a joint moment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivativeIndex(Vec<u32>);

impl DerivativeIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return invalid("derivative index must have at least one entry");
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// `mu_1! mu_2! ...`
    pub fn factorial(&self) -> BigUint {
        self.0.iter().map(|&m| factorial(m)).product()
    }

    /// Sorted weakly decreasing with zeros dropped.
    pub fn to_partition(&self) -> PartitionShape {
        to_partition(&self.0)
    }

    /// Append zeros up to length `s`. Note that this changes the moment: each
    /// zero adds an undifferentiated factor.
    pub fn padded(&self, s: usize) -> Self {
        let mut v = self.0.clone();
        if v.len() < s {
            v.resize(s, 0);
        }
        Self(v)
    }
}

impl fmt::Display for DerivativeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for DerivativeIndex {
    type Err = Error;

    /// Accepts `"1,0,2"` (surrounding parentheses optional).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let entries = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<u32>().map_err(|_| {
                    Error::InvalidArgument(format!(
                        "derivative order {t:?} is not a non-negative integer"
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

/// A partition: weakly decreasing list of positive parts (possibly empty).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionShape(Vec<u32>);

impl PartitionShape {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return invalid("partition parts must be positive");
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid("partition parts must be weakly decreasing");
        }
        Ok(Self(parts))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `lambda_i`, zero past the last part (0-based `i`).
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Dominance order: equal sizes and every partial sum of `self` at
    /// least the matching partial sum of `other`.
    pub fn dominates(&self, other: &PartitionShape) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let (mut a, mut b) = (0u32, 0u32);
        for i in 0..self.len().max(other.len()) {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return false;
            }
        }
        true
    }

    /// `alpha_i = lambda_i + s - i` for `i = 1..s` (returned 0-based).
    pub fn alphas(&self, s: usize) -> Result<Vec<u32>> {
        if self.len() > s {
            return invalid(format!(
                "partition {self} has {} parts, more than s = {s}",
                self.len()
            ));
        }
        Ok((0..s).map(|i| self.part(i) + (s - 1 - i) as u32).collect())
    }
}

impl fmt::Display for PartitionShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for PartitionShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidArgument(format!("bad partition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

pub fn to_partition(entries: &[u32]) -> PartitionShape {
    let mut v: Vec<u32> = entries.iter().copied().filter(|&m| m > 0).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    PartitionShape(v)
}

/// Partitions of `n` with at most `max_len` parts, in reverse lexicographic
/// order (`(n)` first).
pub fn partitions(n: u32, max_len: usize) -> Vec<PartitionShape> {
    fn rec(rem: u32, max_part: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<PartitionShape>) {
        if rem == 0 {
            out.push(PartitionShape(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=max_part.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_len, &mut Vec::new(), &mut out);
    out
}

/// Pad both lists with zeros to a common length.
pub fn pad_to_common_length(
    mu: &DerivativeIndex,
    nu: &DerivativeIndex,
) -> (DerivativeIndex, DerivativeIndex) {
    let s = mu.len().max(nu.len());
    (mu.padded(s), nu.padded(s))
}
