//! Strict partitions, odd partitions and integer index vectors.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};

/// An integer sequence used as an extraction exponent. Generating-function
/// coefficients are defined for arbitrary vectors; strict partitions are the
/// strictly decreasing positive ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexVector(Vec<i64>);

impl IndexVector {
    pub fn new(entries: Vec<i64>) -> Self {
        IndexVector(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }

    pub fn is_strict_positive(&self) -> bool {
        self.is_strictly_decreasing() && self.0.iter().all(|&x| x > 0)
    }

    /// Strict partition followed by a single trailing zero.
    pub fn is_padded_strict(&self) -> bool {
        matches!(self.0.split_last(), Some((0, rest)) if IndexVector(rest.to_vec()).is_strict_positive())
    }

    /// Parses a comma-separated list; the empty string is the empty vector.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(IndexVector(Vec::new()));
        }
        s.split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad index entry {t:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(IndexVector)
    }

    pub fn with_trailing_zero(&self) -> Self {
        let mut v = self.0.clone();
        v.push(0);
        IndexVector(v)
    }
}

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<&StrictPartition> for IndexVector {
    fn from(p: &StrictPartition) -> Self {
        IndexVector(p.0.iter().map(|&x| x as i64).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrictPartition(Vec<u32>);

impl StrictPartition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Index(format!("{parts:?} is not a strict partition")));
        }
        Ok(StrictPartition(parts))
    }

    pub fn empty() -> Self {
        StrictPartition(Vec::new())
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

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let v = IndexVector::parse(s)?;
        if v.entries().iter().any(|&x| x <= 0) {
            return Err(Error::Index(format!("{v} has non-positive parts")));
        }
        Self::new(v.entries().iter().map(|&x| x as u32).collect())
    }

    /// Diagram containment `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Self) -> bool {
        self.len() <= other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All strict partitions contained in `self`, ordered by weight, then
    /// reverse lexicographically.
    pub fn subpartitions(&self) -> Vec<StrictPartition> {
        let max_weight = self.weight();
        let mut out: Vec<StrictPartition> =
            strict_partitions_up_to(max_weight).into_iter().filter(|p| p.is_contained_in(self)).collect();
        out.sort_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| b.0.cmp(&a.0)));
        out
    }
}

impl fmt::Display for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Strict partitions of `n`, reverse lexicographic.
pub fn strict_partitions_of(n: u32) -> Vec<StrictPartition> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<StrictPartition>) {
        if n == 0 {
            out.push(StrictPartition(prefix.clone()));
            return;
        }
        for p in (1..=max.min(n)).rev() {
            prefix.push(p);
            go(n - p, p - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Strict partitions of weight at most `n`, by weight.
pub fn strict_partitions_up_to(n: u32) -> Vec<StrictPartition> {
    (0..=n).flat_map(strict_partitions_of).collect()
}

/// All partitions of `n` as weakly decreasing part lists.
pub fn partitions_of(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Partition with odd parts, weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OddPartition(Vec<u32>);

impl OddPartition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p % 2 == 0) {
            return Err(Error::Index(format!("{parts:?} has even parts")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(OddPartition(parts))
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

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Multiplicity of part `i`.
    pub fn multiplicity(&self, i: u32) -> u32 {
        self.0.iter().filter(|&&p| p == i).count() as u32
    }

    /// `z = prod_i i^{m_i} m_i!`.
    pub fn z(&self) -> BigInt {
        let mut z = BigInt::from(1);
        let mut i = 0;
        while i < self.0.len() {
            let p = self.0[i];
            let m = self.multiplicity(p);
            for k in 1..=m {
                z *= BigInt::from(p) * BigInt::from(k);
            }
            i += m as usize;
        }
        z
    }
}

impl fmt::Display for OddPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Odd partitions of `n`.
pub fn odd_partitions_of(n: u32) -> Vec<OddPartition> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<OddPartition>) {
        if n == 0 {
            out.push(OddPartition(prefix.clone()));
            return;
        }
        let mut p = max.min(n);
        if p.is_multiple_of(2) {
            p = p.saturating_sub(1);
        }
        while p >= 1 {
            prefix.push(p);
            go(n - p, p, prefix, out);
            prefix.pop();
            if p < 2 {
                break;
            }
            p -= 2;
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Odd partitions of weight at most `n`, by weight.
pub fn odd_partitions_up_to(n: u32) -> Vec<OddPartition> {
    (0..=n).flat_map(odd_partitions_of).collect()
}
