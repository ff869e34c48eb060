//! Changemaker vectors and the subset-sum predicates built on them.
//!
//! A changemaker is a vector of positive integers whose subset sums cover
//! every integer from `0` to the total. Entries are kept non-increasing,
//! `σ₀ ≥ σ₁ ≥ … ≥ σₙ`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// Largest dimension accepted by the exponential subset-sum oracle.
pub const ORACLE_MAX_DIM: usize = 25;

/// A validated changemaker vector, stored non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Changemaker {
    entries: Vec<u64>,
}

/// `p = Σσᵢ²`, `|σ|₁ = Σσᵢ` and the number of odd entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DerivedScalars {
    pub p: u64,
    pub l1_norm: u64,
    pub odd_count: u64,
}

fn check_entries(entries: &[u64]) -> Result<()> {
    if entries.is_empty() {
        return invalid("changemaker entries must be non-empty");
    }
    if entries.contains(&0) {
        return invalid("changemaker entries must be positive");
    }
    Ok(())
}

/// True iff every integer in `[0, Σσᵢ]` is a subset sum of `entries`.
///
/// Uses the prefix criterion: after sorting increasingly, each entry is at
/// most one more than the sum of the entries before it.
pub fn is_changemaker(entries: &[u64]) -> Result<bool> {
    check_entries(entries)?;
    Ok(prefix_criterion(entries))
}

fn prefix_criterion(entries: &[u64]) -> bool {
    let mut sorted = entries.to_vec();
    sorted.sort_unstable();
    let mut reach = 0u64;
    for e in sorted {
        if e > reach + 1 {
            return false;
        }
        reach += e;
    }
    true
}

/// Exact set of subset sums, by enumerating all `2ⁿ` subsets.
pub fn reachable_sums(entries: &[u64]) -> Result<BTreeSet<u64>> {
    check_entries(entries)?;
    if entries.len() > ORACLE_MAX_DIM {
        return Err(Error::Capacity {
            what: "subset-sum oracle dimension",
            got: entries.len() as u64,
            limit: ORACLE_MAX_DIM as u64,
        });
    }
    let n = entries.len();
    let mut sums = BTreeSet::new();
    for mask in 0u32..(1u32 << n) {
        let s = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| entries[i])
            .sum();
        sums.insert(s);
    }
    Ok(sums)
}

impl Changemaker {
    /// Validates and sorts `entries` (any order accepted).
    pub fn new(mut entries: Vec<u64>) -> Result<Self> {
        check_entries(&entries)?;
        if !prefix_criterion(&entries) {
            return invalid(format!("{entries:?} is not a changemaker"));
        }
        entries.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Changemaker { entries })
    }

    /// The all-ones vector of length `m`.
    pub fn ones(m: usize) -> Result<Self> {
        Self::new(vec![1; m])
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn largest(&self) -> u64 {
        self.entries[0]
    }

    pub fn p(&self) -> u64 {
        self.entries.iter().map(|e| e * e).sum()
    }

    pub fn l1_norm(&self) -> u64 {
        self.entries.iter().sum()
    }

    pub fn odd_count(&self) -> u64 {
        self.entries.iter().filter(|e| *e % 2 == 1).count() as u64
    }

    pub fn derived_scalars(&self) -> DerivedScalars {
        DerivedScalars {
            p: self.p(),
            l1_norm: self.l1_norm(),
            odd_count: self.odd_count(),
        }
    }

    /// Whether the even entries split into two sub-multisets of equal sum.
    pub fn even_equal_partition(&self) -> bool {
        even_equal_partition(&self.entries)
    }
}

/// Subset-sum DP to half of the even-entry total.
pub fn even_equal_partition(entries: &[u64]) -> bool {
    let evens: Vec<usize> = entries
        .iter()
        .filter(|e| *e % 2 == 0)
        .map(|&e| e as usize)
        .collect();
    let total: usize = evens.iter().sum();
    if total % 2 == 1 {
        return false;
    }
    let half = total / 2;
    let mut reach = vec![false; half + 1];
    reach[0] = true;
    for e in evens {
        for s in (e..=half).rev() {
            if reach[s - e] {
                reach[s] = true;
            }
        }
    }
    reach[half]
}

impl fmt::Display for Changemaker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct SigmaJson {
    sigma: Vec<u64>,
}

impl Serialize for Changemaker {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SigmaJson {
            sigma: self.entries.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Changemaker {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SigmaJson::deserialize(deserializer)?;
        Changemaker::new(raw.sigma).map_err(serde::de::Error::custom)
    }
}
