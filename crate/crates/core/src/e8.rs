//! The lattice `−E8 ⊕ −ℤᵏ`, its short characteristic vectors and the
//! E8-changemaker predicate.
//!
//! E8 vectors use the even coordinate system: eight coordinates, all
//! integers or all half-integers, with even sum. Internally every
//! coordinate is stored doubled so the arithmetic stays in `i64`.
//! The pairing on `−E8 ⊕ −ℤᵏ` is minus the Euclidean dot product.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// Largest `k` accepted by predicates and by `short_set`.
pub const MAX_TAIL: usize = 20;
/// Largest `k` for which `deep_short_set` is materialised.
pub const MAX_DEEP_TAIL: usize = 12;
/// Largest `k` for the brute-force characteristic walk.
pub const MAX_WALK_TAIL: usize = 4;

fn check_tail(k: usize, limit: usize, what: &'static str) -> Result<()> {
    if k > limit {
        return Err(Error::Capacity {
            what,
            got: k as u64,
            limit: limit as u64,
        });
    }
    Ok(())
}

/// A vector of the E8 lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct E8Vector {
    doubled: [i64; 8],
}

impl E8Vector {
    pub const ZERO: E8Vector = E8Vector { doubled: [0; 8] };

    /// Builds a vector from twice its coordinates.
    pub fn from_doubled(doubled: [i64; 8]) -> Result<Self> {
        let parity = doubled[0].rem_euclid(2);
        if doubled.iter().any(|d| d.rem_euclid(2) != parity) {
            return invalid("E8 coordinates must be all integers or all half-integers");
        }
        if doubled.iter().sum::<i64>().rem_euclid(4) != 0 {
            return invalid("E8 coordinate sum must be even");
        }
        Ok(E8Vector { doubled })
    }

    pub fn from_integers(coords: [i64; 8]) -> Result<Self> {
        Self::from_doubled(coords.map(|c| 2 * c))
    }

    pub fn doubled(&self) -> [i64; 8] {
        self.doubled
    }

    pub fn is_zero(&self) -> bool {
        self.doubled == [0; 8]
    }

    pub fn is_half_integral(&self) -> bool {
        self.doubled[0].rem_euclid(2) == 1
    }

    /// Euclidean dot product; always an integer on E8.
    pub fn dot(&self, other: &E8Vector) -> i64 {
        let d: i64 = self
            .doubled
            .iter()
            .zip(&other.doubled)
            .map(|(a, b)| a * b)
            .sum();
        d / 4
    }

    /// The `−E8` form, `⟨u, v⟩ = −u·v`.
    pub fn pairing(&self, other: &E8Vector) -> i64 {
        -self.dot(other)
    }

    pub fn norm(&self) -> i64 {
        self.pairing(self)
    }

    pub fn scaled(&self, factor: i64) -> E8Vector {
        E8Vector {
            doubled: self.doubled.map(|d| d * factor),
        }
    }

    pub fn neg(&self) -> E8Vector {
        self.scaled(-1)
    }
}

fn fmt_coord(d: i64) -> String {
    if d % 2 == 0 {
        (d / 2).to_string()
    } else {
        format!("{d}/2")
    }
}

fn parse_coord(text: &str) -> Option<i64> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, "2")) => num.trim().parse::<i64>().ok(),
        Some(_) => None,
        None => text.parse::<i64>().ok().map(|v| 2 * v),
    }
}

impl fmt::Display for E8Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.doubled.iter().map(|&d| fmt_coord(d)).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coord {
    Int(i64),
    Text(String),
}

impl Serialize for E8Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coords: Vec<Coord> = self
            .doubled
            .iter()
            .map(|&d| {
                if d % 2 == 0 {
                    Coord::Int(d / 2)
                } else {
                    Coord::Text(fmt_coord(d))
                }
            })
            .collect();
        coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for E8Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<Coord>::deserialize(deserializer)?;
        if coords.len() != 8 {
            return Err(D::Error::custom(format!(
                "expected 8 coordinates, got {}",
                coords.len()
            )));
        }
        let mut doubled = [0i64; 8];
        for (slot, c) in doubled.iter_mut().zip(coords) {
            *slot = match c {
                Coord::Int(v) => 2 * v,
                Coord::Text(t) => parse_coord(&t)
                    .ok_or_else(|| D::Error::custom(format!("bad coordinate {t:?}")))?,
            };
        }
        E8Vector::from_doubled(doubled).map_err(D::Error::custom)
    }
}

/// The 240 vectors of norm `−2` in `−E8`.
pub fn roots() -> Vec<E8Vector> {
    let mut out = Vec::with_capacity(240);
    for i in 0..8 {
        for j in i + 1..8 {
            for si in [-2, 2] {
                for sj in [-2, 2] {
                    let mut d = [0i64; 8];
                    d[i] = si;
                    d[j] = sj;
                    out.push(E8Vector { doubled: d });
                }
            }
        }
    }
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            let d = std::array::from_fn(|i| if mask >> i & 1 == 1 { -1 } else { 1 });
            out.push(E8Vector { doubled: d });
        }
    }
    out
}

/// A vector of `−E8 ⊕ −ℤᵏ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SplitVector {
    pub e8: E8Vector,
    pub tail: Vec<i64>,
}

impl SplitVector {
    pub fn pairing(&self, other: &SplitVector) -> i64 {
        let tail: i64 = self.tail.iter().zip(&other.tail).map(|(a, b)| a * b).sum();
        self.e8.pairing(&other.e8) - tail
    }

    pub fn norm(&self) -> i64 {
        self.pairing(self)
    }

    /// Pairing with `τ = (s, σ)`.
    pub fn pair_with(&self, tau: &E8Changemaker) -> i64 {
        let tail: i64 = self
            .tail
            .iter()
            .zip(&tau.sigma)
            .map(|(&a, &b)| a * b as i64)
            .sum();
        self.e8.pairing(&tau.s) - tail
    }
}

/// `{a, a+2, …, b}`; empty when `a > b`.
pub fn pi_set(a: i64, b: i64) -> Result<BTreeSet<i64>> {
    if (a - b).rem_euclid(2) != 0 {
        return invalid(format!("{a} and {b} have different parity"));
    }
    Ok((a..=b).step_by(2).collect())
}

fn sign_vectors(k: usize) -> impl Iterator<Item = Vec<i64>> {
    (0u64..1 << k).map(move |mask| {
        (0..k)
            .map(|j| if mask >> j & 1 == 1 { -1 } else { 1 })
            .collect()
    })
}

/// `max ⟨c, c⟩` over characteristic vectors of `−E8 ⊕ −ℤᵏ`.
pub fn max_characteristic_norm(k: usize) -> i64 {
    -(k as i64)
}

/// Characteristic vectors of maximal norm: `{0} × {±1}ᵏ`.
pub fn short_set(k: usize) -> Result<Vec<SplitVector>> {
    check_tail(k, MAX_TAIL, "short_set dimension")?;
    Ok(sign_vectors(k)
        .map(|tail| SplitVector {
            e8: E8Vector::ZERO,
            tail,
        })
        .collect())
}

/// Number of characteristic vectors of norm `m − 8`.
pub fn deep_short_count(k: usize) -> u64 {
    (240 + k as u64) << k
}

/// Characteristic vectors of norm eight below the maximum: `(2v, ε)` for a
/// root `v` and signs `ε`, plus `(0, w)` with one entry `±3` and the rest `±1`.
pub fn deep_short_set(k: usize) -> Result<Vec<SplitVector>> {
    check_tail(k, MAX_DEEP_TAIL, "deep_short_set dimension")?;
    let mut out = Vec::with_capacity(deep_short_count(k) as usize);
    for v in roots() {
        let e8 = v.scaled(2);
        out.extend(sign_vectors(k).map(|tail| SplitVector { e8, tail }));
    }
    for j in 0..k {
        for mut tail in sign_vectors(k) {
            tail[j] *= 3;
            out.push(SplitVector {
                e8: E8Vector::ZERO,
                tail,
            });
        }
    }
    Ok(out)
}

// D8 simple roots plus the half-integer glue vector generate E8.
fn e8_generators() -> Vec<[i64; 8]> {
    let mut gens = Vec::new();
    for i in 0..7 {
        let mut d = [0i64; 8];
        d[i] = 2;
        d[i + 1] = -2;
        gens.push(d);
    }
    let mut d = [0i64; 8];
    d[6] = 2;
    d[7] = 2;
    gens.push(d);
    gens.push([1; 8]);
    gens
}

fn walk_e8(
    max_sq: i64,
    pos: usize,
    parity: i64,
    acc: &mut [i64; 8],
    sq: i64,
    out: &mut Vec<E8Vector>,
) {
    if pos == 8 {
        if acc.iter().sum::<i64>().rem_euclid(4) == 0 {
            out.push(E8Vector { doubled: *acc });
        }
        return;
    }
    let bound = ((max_sq - sq) as f64).sqrt() as i64 + 1;
    for d in -bound..=bound {
        if d.rem_euclid(2) != parity || sq + d * d > max_sq {
            continue;
        }
        acc[pos] = d;
        walk_e8(max_sq, pos + 1, parity, acc, sq + d * d, out);
    }
}

fn walk_tail(max_sq: i64, k: usize, acc: &mut Vec<i64>, sq: i64, out: &mut Vec<(Vec<i64>, i64)>) {
    if acc.len() == k {
        out.push((acc.clone(), sq));
        return;
    }
    let bound = ((max_sq - sq) as f64).sqrt() as i64 + 1;
    for x in -bound..=bound {
        if sq + x * x > max_sq {
            continue;
        }
        acc.push(x);
        walk_tail(max_sq, k, acc, sq + x * x, out);
        acc.pop();
    }
}

/// Every vector of `−E8 ⊕ −ℤᵏ` with `⟨c, c⟩ ≥ −bound` that is
/// characteristic, found by walking the lattice and testing `c·x ≡ x·x`
/// mod 2 on a generating set.
pub fn enumerate_characteristic(k: usize, bound: u64) -> Result<Vec<SplitVector>> {
    check_tail(k, MAX_WALK_TAIL, "characteristic walk dimension")?;
    if bound > 16 {
        return Err(Error::Capacity {
            what: "characteristic walk norm",
            got: bound,
            limit: 16,
        });
    }
    let bound = bound as i64;
    let mut e8s = Vec::new();
    for parity in 0..2 {
        walk_e8(4 * bound, 0, parity, &mut [0; 8], 0, &mut e8s);
    }
    let gens = e8_generators();
    let e8_char: Vec<(E8Vector, i64)> = e8s
        .into_iter()
        .filter(|c| {
            gens.iter().all(|g| {
                let cg: i64 = c.doubled.iter().zip(g).map(|(a, b)| a * b).sum();
                let gg: i64 = g.iter().map(|b| b * b).sum();
                (cg - gg).rem_euclid(8) == 0
            })
        })
        .map(|c| (c, -c.norm()))
        .collect();
    let mut tails = Vec::new();
    walk_tail(bound, k, &mut Vec::new(), 0, &mut tails);
    tails.retain(|(t, _)| t.iter().all(|x| x.rem_euclid(2) == 1));
    let mut out = Vec::new();
    for (e8, e_sq) in &e8_char {
        for (tail, t_sq) in &tails {
            if e_sq + t_sq <= bound {
                out.push(SplitVector {
                    e8: *e8,
                    tail: tail.clone(),
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `τ = (s, σ)` in `−E8 ⊕ −ℤᵏ` with `σ` non-negative and non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct E8Changemaker {
    s: E8Vector,
    sigma: Vec<u64>,
}

#[derive(Deserialize)]
struct E8ChangemakerRepr {
    s: E8Vector,
    sigma: Vec<u64>,
}

impl<'de> Deserialize<'de> for E8Changemaker {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = E8ChangemakerRepr::deserialize(deserializer)?;
        Ok(E8Changemaker::new(repr.s, repr.sigma))
    }
}

impl E8Changemaker {
    /// Sorts `sigma` non-increasing; zero entries are allowed.
    pub fn new(s: E8Vector, mut sigma: Vec<u64>) -> Self {
        sigma.sort_unstable_by(|a, b| b.cmp(a));
        E8Changemaker { s, sigma }
    }

    pub fn s(&self) -> &E8Vector {
        &self.s
    }

    pub fn sigma(&self) -> &[u64] {
        &self.sigma
    }

    pub fn tail_dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn l1_norm(&self) -> u64 {
        self.sigma.iter().sum()
    }

    /// `⟨τ, τ⟩`.
    pub fn norm(&self) -> i64 {
        self.s.norm() - self.sigma.iter().map(|&x| (x * x) as i64).sum::<i64>()
    }
}

/// `c(τ)` and `C(τ)`: the largest pairings with `short` and with the
/// norm-eight-lower characteristic set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairingMaxima {
    pub short_max: i64,
    pub deep_max: i64,
}

/// Both sets are closed under negation, so the maxima split per summand.
pub fn pairing_maxima(tau: &E8Changemaker) -> Result<PairingMaxima> {
    check_tail(tau.tail_dim(), MAX_TAIL, "E8-changemaker tail")?;
    let l1 = tau.l1_norm() as i64;
    let root_max = roots().iter().map(|v| v.dot(&tau.s)).max().unwrap_or(0);
    let top = tau.sigma.first().copied().unwrap_or(0) as i64;
    Ok(PairingMaxima {
        short_max: l1,
        deep_max: l1 + (2 * root_max).max(2 * top),
    })
}

fn signed_sums(values: impl Iterator<Item = u64>) -> HashSet<i64> {
    let mut sums = HashSet::from([0i64]);
    for v in values {
        let v = v as i64;
        sums = sums.iter().flat_map(|&s| [s + v, s - v]).collect();
    }
    sums
}

/// Outcome of the two E8-changemaker conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct E8Verdict {
    pub short_max: i64,
    pub deep_max: i64,
    pub short_condition: bool,
    pub deep_condition: bool,
    pub missing: Vec<i64>,
}

impl E8Verdict {
    pub fn holds(&self) -> bool {
        self.short_condition && self.deep_condition
    }
}

pub fn check_e8_changemaker(tau: &E8Changemaker) -> Result<E8Verdict> {
    let PairingMaxima {
        short_max,
        deep_max,
    } = pairing_maxima(tau)?;
    let all = signed_sums(tau.sigma.iter().copied());
    let short_condition =
        all.len() as i64 == short_max + 1 && all.iter().all(|v| v.abs() <= short_max);

    let root_values: BTreeSet<i64> = roots().iter().map(|v| 2 * v.dot(&tau.s)).collect();
    let without: Vec<HashSet<i64>> = (0..tau.tail_dim())
        .map(|j| {
            signed_sums(
                tau.sigma
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .map(|(_, &x)| x),
            )
        })
        .collect();
    let reachable = |t: i64| {
        root_values.iter().any(|a| all.contains(&(t - a)))
            || tau.sigma.iter().zip(&without).any(|(&x, rest)| {
                let three = 3 * x as i64;
                rest.contains(&(t - three)) || rest.contains(&(t + three))
            })
    };
    let missing: Vec<i64> = pi_set(short_max + 2, deep_max)?
        .into_iter()
        .filter(|&t| !reachable(t))
        .collect();
    Ok(E8Verdict {
        short_max,
        deep_max,
        short_condition,
        deep_condition: missing.is_empty(),
        missing,
    })
}

pub fn is_e8_changemaker(tau: &E8Changemaker) -> Result<bool> {
    Ok(check_e8_changemaker(tau)?.holds())
}

/// Which sphere a lens space surgery must come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoincareClass {
    PoincareRealized,
    S3Realized,
}

/// The genus threshold: `2g + r` for odd `p`, `2g` for even `p`.
pub fn poincare_threshold(genus: u64, r: u64, p: u64) -> u64 {
    if p % 2 == 1 {
        2 * genus + r
    } else {
        2 * genus
    }
}

pub fn classify_poincare(genus: u64, r: u64, p: u64) -> Result<PoincareClass> {
    if r == 0 || p == 0 {
        return invalid("r and p must be positive");
    }
    if r * r * p >= poincare_threshold(genus, r, p) {
        Ok(PoincareClass::PoincareRealized)
    } else {
        Ok(PoincareClass::S3Realized)
    }
}
