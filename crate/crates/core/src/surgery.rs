//! Slope bounds and changemaker reconstruction for surgeries of slope `r²p`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::changemaker::Changemaker;
use crate::coin::{t_sigma_sweep, v_sigma, v_sigma_table};
use crate::error::{invalid, Error, Result};
use crate::knot::{extract_relevant, Parity, RelevantView, VSequence};

fn tri(k: u64) -> u64 {
    k * (k + 1) / 2
}

/// A slope `r²p` with the changemaker behind it, once known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeCandidate {
    pub r: u64,
    pub p: u64,
    pub slope: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Changemaker>,
}

impl SlopeCandidate {
    pub fn new(r: u64, sigma: Changemaker) -> Self {
        let p = sigma.p();
        SlopeCandidate {
            r,
            p,
            slope: r * r * p,
            sigma: Some(sigma),
        }
    }
}

/// Range of slopes `r²p` allowed by `ν⁺`, and the matching range of `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlopeWindow {
    pub r: u64,
    pub nu_plus: u64,
    pub slope_min: u64,
    /// `None` for `r = 1`, where no upper bound is available.
    pub slope_max: Option<u64>,
    pub p_min: u64,
    pub p_max: Option<u64>,
}

impl SlopeWindow {
    pub fn contains_p(&self, p: u64) -> bool {
        p >= self.p_min && self.p_max.is_none_or(|hi| p <= hi)
    }

    pub fn is_empty(&self) -> bool {
        self.p_max.is_some_and(|hi| hi < self.p_min)
    }
}

/// `2ν⁺ + r ≤ r²p`, with `r²p ≤ 4ν⁺ + 5` for `r ≥ 2` and
/// `r²p ≤ 2r²ν⁺ / ((r−1)(r−2))` for `r ≥ 3`.
pub fn slope_window(nu_plus: u64, r: u64) -> Result<SlopeWindow> {
    if r == 0 {
        return invalid("r must be positive");
    }
    let r2 = r * r;
    let slope_min = 2 * nu_plus + r;
    let slope_max = match r {
        1 => None,
        2 => Some(4 * nu_plus + 5),
        _ => Some((4 * nu_plus + 5).min(2 * r2 * nu_plus / ((r - 1) * (r - 2)))),
    };
    Ok(SlopeWindow {
        r,
        nu_plus,
        slope_min,
        slope_max,
        p_min: slope_min.div_ceil(r2),
        p_max: slope_max.map(|s| s / r2),
    })
}

/// `2ν⁺ ≤ r²p − r|σ|₁ ≤ 2ν⁺ + 2(r−1)`.
pub fn slope_relation_holds(sigma: &Changemaker, r: u64, nu_plus: u64) -> bool {
    let gap = (r * r * sigma.p()) as i64 - (r * sigma.l1_norm()) as i64;
    let lo = 2 * nu_plus as i64;
    gap >= lo && gap <= lo + 2 * (r as i64 - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum V0Case {
    BothEven,
    EvenROddP,
    OddR,
}

/// How the slope `r²p` compares with `8V₀`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct V0Verdict {
    pub case: V0Case,
    pub slope: u64,
    pub lower: i64,
    pub upper: i64,
    pub in_range: bool,
    /// For odd `r`: whether the slope sits on the upper end.
    pub at_upper: Option<bool>,
    /// For odd `r`: whether the even entries split evenly.
    pub partition: Option<bool>,
    pub holds: bool,
}

pub fn check_v0_bounds(sigma: &Changemaker, r: u64, v0: u64) -> V0Verdict {
    let p = sigma.p();
    let slope = r * r * p;
    let eight = 8 * v0 as i64;
    let (case, lower, upper) = match (r % 2 == 0, p % 2 == 0) {
        (true, true) => (V0Case::BothEven, eight, eight),
        (true, false) => (
            V0Case::EvenROddP,
            eight - 2 * r as i64,
            eight + 2 * r as i64,
        ),
        (false, _) => {
            let odd = sigma.odd_count() as i64;
            (V0Case::OddR, eight - 3 * odd, eight + odd)
        }
    };
    let s = slope as i64;
    let in_range = lower <= s && s <= upper;
    let (at_upper, partition) = if case == V0Case::OddR {
        (Some(s == upper), Some(sigma.even_equal_partition()))
    } else {
        (None, None)
    };
    let holds = in_range && at_upper == partition;
    V0Verdict {
        case,
        slope,
        lower,
        upper,
        in_range,
        at_upper,
        partition,
        holds,
    }
}

fn parity_shift(r: u64, p: u64) -> u64 {
    (r % 2 == 0 && p % 2 == 1) as u64
}

/// The `|σ|₁` forced by `(r, p)` and `ν^{+rel}`, if it is a valid value.
fn forced_l1(r: u64, p: u64, nu_rel: u64) -> Option<u64> {
    let l1 = (r * p) as i64 - parity_shift(r, p) as i64 - 2 * nu_rel as i64;
    (l1 >= 1 && l1 as u64 <= p).then_some(l1 as u64)
}

/// Best score over plans costing exactly `c`, for each `c ≤ m`.
fn exact_cost_sweep(sigma: &Changemaker, m: u64) -> Vec<Option<u64>> {
    let m = m as usize;
    let mut best: Vec<Option<u64>> = vec![None; m + 1];
    best[0] = Some(0);
    for &s in sigma.entries() {
        let mut next = best.clone();
        let mut k = 1u64;
        while tri(k) as usize <= m {
            let cost = tri(k) as usize;
            for c in cost..=m {
                if let Some(v) = best[c - cost] {
                    let cand = v + k * s;
                    if next[c].is_none_or(|x| cand > x) {
                        next[c] = Some(cand);
                    }
                }
            }
            k += 1;
        }
        best = next;
    }
    best
}

/// Whether `σ` reproduces every necessary condition read off the view.
pub fn matches_view(sigma: &Changemaker, view: &RelevantView) -> bool {
    let p = sigma.p();
    let r = view.r;
    if view.parity_used && !view.parity.matches(p) {
        return false;
    }
    if forced_l1(r, p, view.nu_plus_rel) != Some(sigma.l1_norm()) {
        return false;
    }
    let v0 = view.v0();
    let t = t_sigma_sweep(sigma, v0);
    if (0..v0).any(|m| t[m as usize] != view.t_rel[m as usize]) {
        return false;
    }
    if r >= 2 {
        t[v0 as usize] == view.nu_plus_rel
    } else {
        exact_cost_sweep(sigma, v0)[v0 as usize].is_some_and(|best| best >= view.nu_plus_rel)
    }
}

struct Search<'a> {
    target: &'a [u64],
    /// Prefix DP must stay at or below the target up to this budget.
    checked_to: usize,
    found: Vec<Vec<u64>>,
}

impl Search<'_> {
    fn extend(&self, layer: &[u64], entry: u64) -> Option<Vec<u64>> {
        let mut next = layer.to_vec();
        let m = layer.len() - 1;
        let mut k = 1u64;
        while tri(k) as usize <= m {
            let cost = tri(k) as usize;
            for c in cost..=m {
                next[c] = next[c].max(layer[c - cost] + k * entry);
            }
            k += 1;
        }
        (0..=self.checked_to)
            .all(|c| next[c] <= self.target[c])
            .then_some(next)
    }

    fn dfs(&mut self, prefix: &mut Vec<u64>, layer: &[u64], sum_left: u64, sq_left: u64) {
        if sum_left == 0 {
            if sq_left == 0 {
                self.found.push(prefix.clone());
            }
            return;
        }
        let cap = prefix.last().copied().unwrap_or(u64::MAX);
        let mut hi = cap.min(sum_left).min(sum_left.div_ceil(2));
        while hi * hi > sq_left {
            hi -= 1;
        }
        for e in (1..=hi).rev() {
            let s = sum_left - e;
            let q = sq_left - e * e;
            if q < s || q > e * s || q % 2 != s % 2 {
                continue;
            }
            let Some(next) = self.extend(layer, e) else {
                continue;
            };
            prefix.push(e);
            self.dfs(prefix, &next, s, q);
            prefix.pop();
        }
    }
}

fn search_p(view: &RelevantView, p: u64) -> Vec<Changemaker> {
    let r = view.r;
    if view.parity_used && !view.parity.matches(p) {
        return Vec::new();
    }
    let Some(l1) = forced_l1(r, p, view.nu_plus_rel) else {
        return Vec::new();
    };
    let v0 = view.v0() as usize;
    let mut target = view.t_rel.clone();
    let checked_to = if r >= 2 {
        v0
    } else {
        // the top budget is only bounded through exact costs
        target[v0] = u64::MAX;
        v0.saturating_sub(1)
    };
    let mut search = Search {
        target: &target,
        checked_to,
        found: Vec::new(),
    };
    search.dfs(&mut Vec::new(), &vec![0; v0 + 1], l1, p);
    search
        .found
        .into_iter()
        .filter_map(|v| Changemaker::new(v).ok())
        .filter(|s| matches_view(s, view) && slope_relation_holds(s, r, view.source_nu_plus))
        .collect()
}

/// Every changemaker consistent with the view, sorted by `p` then
/// lexicographically.
///
/// `p_hint` pins `p`; `p_max` caps it. One of them is required for `r = 1`.
pub fn reconstruct_sigma(
    view: &RelevantView,
    p_hint: Option<u64>,
    p_max: Option<u64>,
) -> Result<Vec<(u64, Changemaker)>> {
    let r = view.r;
    let window = slope_window(view.source_nu_plus, r)?;
    let mut hi = window.p_max;
    if r >= 2 {
        let algebraic = (2 * view.nu_plus_rel + 1) / (r - 1);
        hi = Some(hi.map_or(algebraic, |h| h.min(algebraic)));
    }
    if let Some(cap) = p_max {
        hi = Some(hi.map_or(cap, |h| h.min(cap)));
    }
    let (lo, hi) = match p_hint {
        Some(p) => (p.max(window.p_min), hi.map_or(p, |h| h.min(p))),
        None => match hi {
            Some(h) => (window.p_min, h),
            None => return Err(Error::MissingBound("r = 1 needs p_hint or p_max".into())),
        },
    };
    let per_p: Vec<Vec<Changemaker>> = (lo..=hi)
        .into_par_iter()
        .map(|p| search_p(view, p))
        .collect();
    let mut out: Vec<(u64, Changemaker)> =
        per_p.into_iter().flatten().map(|s| (s.p(), s)).collect();
    out.sort();
    Ok(out)
}

/// Upper bound on the number of `(r, p)` slopes for a knot with `ν⁺ ≠ 0`.
pub fn count_bound(r: u64) -> u64 {
    match r {
        1 => 3,
        r if r % 2 == 0 => 2,
        _ => 1,
    }
}

/// Every `r` with `2ν⁺ ≤ r²p − r|σ|₁ ≤ 2ν⁺ + 2(r−1)`.
pub fn feasible_r(sigma: &Changemaker, nu_plus: u64) -> BTreeSet<u64> {
    let p = sigma.p();
    let mut out = BTreeSet::new();
    let mut r = 1u64;
    // r²p − r|σ|₁ ≥ r(r−1)p, which eventually passes 2ν⁺ + 2r
    while r * (r - 1) * p <= 2 * nu_plus + 2 * r {
        if slope_relation_holds(sigma, r, nu_plus) {
            out.insert(r);
        }
        r += 1;
    }
    out
}

/// `(4s+3, 2s+1, s+1, s, 1, …, 1)` with `s` trailing ones.
pub fn family_sigma(s: u64) -> Result<Changemaker> {
    if s < 2 {
        return invalid(format!("family parameter must be at least 2, got {s}"));
    }
    let mut v = vec![4 * s + 3, 2 * s + 1, s + 1, s];
    v.extend(std::iter::repeat_n(1, s as usize));
    Changemaker::new(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecoverMode {
    R1,
    Rge2,
}

/// Parameters of the family consistent with the V-sequence.
///
/// `R1` reads `s` off the number of entries equal to 1. `Rge2` takes the
/// three values around `√(b/11)` for the busiest value `b` among entries near
/// 300, keeping `s ≥ 5`. Every candidate is then checked against the
/// sequence at each feasible `r`.
pub fn family_recover_s(v: &VSequence, mode: RecoverMode) -> Vec<u64> {
    let raw: Vec<u64> = match mode {
        RecoverMode::R1 => {
            let ones = v.values().iter().filter(|&&x| x == 1).count() as u64;
            if ones >= 3 && (ones - 3) % 4 == 0 && (ones - 3) / 4 >= 2 {
                vec![(ones - 3) / 4]
            } else {
                Vec::new()
            }
        }
        RecoverMode::Rge2 => {
            let a = v.count_between(295, 300);
            if a == 0 {
                return Vec::new();
            }
            let Some(b) = busiest_value(v, a) else {
                return Vec::new();
            };
            let base = (b / 11).isqrt();
            (base..=base + 2).filter(|&s| s >= 5).collect()
        }
    };
    raw.into_iter()
        .filter(|&s| family_fits(v, s, mode))
        .collect()
}

/// Largest value taken by at least `a/2` indices.
fn busiest_value(v: &VSequence, a: u64) -> Option<u64> {
    let values = v.values();
    let top = *values.first()?;
    (1..=top)
        .rev()
        .find(|&b| 2 * values.iter().filter(|&&x| x == b).count() as u64 >= a)
}

fn family_fits(v: &VSequence, s: u64, mode: RecoverMode) -> bool {
    let Ok(sigma) = family_sigma(s) else {
        return false;
    };
    let p = sigma.p();
    let nu = v.nu_plus();
    let rs: Vec<u64> = match mode {
        RecoverMode::R1 => vec![1],
        RecoverMode::Rge2 => (2..).take_while(|r| r * r * p <= 4 * nu + 5).collect(),
    };
    rs.into_iter().any(|r| {
        extract_relevant(v, r, Parity::of(p)).is_ok_and(|view| matches_view(&sigma, &view))
    })
}

/// Union of the recoverable parameters over both modes, plus the small
/// values 2, 3 and 4 that fit the sequence at some `r`.
pub fn family_possible_s(v: &VSequence) -> BTreeSet<u64> {
    let mut out: BTreeSet<u64> = family_recover_s(v, RecoverMode::R1).into_iter().collect();
    out.extend(family_recover_s(v, RecoverMode::Rge2));
    let nu = v.nu_plus();
    for s in 2..=4 {
        let sigma = family_sigma(s).expect("s ≥ 2");
        let p = sigma.p();
        let fits = (1..)
            .take_while(|r| *r == 1 || r * r * p <= 4 * nu + 5)
            .any(|r| {
                extract_relevant(v, r, Parity::of(p)).is_ok_and(|view| matches_view(&sigma, &view))
            });
        if fits {
            out.insert(s);
        }
    }
    out
}

/// Values of `T^σ` at four budgets for the family member `s`, each against
/// its predicted value or bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyTReport {
    pub s: u64,
    pub t_295: u64,
    pub t_295_expected: u64,
    pub t_300: u64,
    pub t_300_expected: u64,
    pub low_budget: u64,
    pub t_low: u64,
    pub t_low_max: u64,
    pub high_budget: u64,
    pub t_high: u64,
    pub t_high_min: u64,
}

impl FamilyTReport {
    pub fn checks(&self) -> [(&'static str, bool); 4] {
        [
            ("t_295", self.t_295 == self.t_295_expected),
            ("t_300", self.t_300 == self.t_300_expected),
            ("t_low", self.t_low <= self.t_low_max),
            ("t_high", self.t_high >= self.t_high_min),
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }
}

pub fn verify_family_t(s: u64) -> Result<FamilyTReport> {
    if s < 5 {
        return invalid(format!("family checks need s ≥ 5, got {s}"));
    }
    let sigma = family_sigma(s)?;
    let low_budget = 11 * s * s - 33 * s + 24;
    let high_budget = low_budget + 1;
    let top = 300.max(high_budget);
    let t = t_sigma_sweep(&sigma, top);
    Ok(FamilyTReport {
        s,
        t_295: t[295],
        t_295_expected: 110 * s + 75,
        t_300: t[300],
        t_300_expected: 110 * s + 80,
        low_budget,
        t_low: t[low_budget as usize],
        t_low_max: 22 * s * s - 22 * s - 28,
        high_budget,
        t_high: t[high_budget as usize],
        t_high_min: 22 * s * s - 22 * s - 24,
    })
}

/// A V-sequence whose view at `r` (and the parity of `p`) is exactly the
/// relevant data of `σ`, with the gaps filled by descending as early as the
/// step-1 rule allows.
///
/// Fails when two consecutive samples differ by more than `r`.
pub fn synthesize_v(sigma: &Changemaker, r: u64) -> Result<VSequence> {
    if r == 0 {
        return invalid("r must be positive");
    }
    let p = sigma.p();
    let shift = parity_shift(r, p);
    let nu_rel = (r * p - shift - sigma.l1_norm()) / 2;
    let table = v_sigma_table(sigma);
    let samples: Vec<u64> = (0..nu_rel)
        .map(|i| v_sigma(&table, nu_rel - i))
        .chain(std::iter::once(0))
        .collect();
    let offset = if shift == 1 { r / 2 } else { 0 };
    let mut values = vec![samples[0]; offset as usize];
    for w in samples.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a - b > r {
            return invalid(format!("samples {a} -> {b} are more than {r} apart"));
        }
        values.extend((0..r).map(|t| a.saturating_sub(t).max(b)));
    }
    values.push(0);
    VSequence::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(v: &[u64]) -> Changemaker {
        Changemaker::new(v.to_vec()).unwrap()
    }

    fn seq(v: &[u64]) -> VSequence {
        VSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn windows() {
        let w = slope_window(1, 2).unwrap();
        assert_eq!((w.slope_min, w.slope_max), (4, Some(9)));
        assert_eq!((w.p_min, w.p_max), (1, Some(2)));
        let w = slope_window(1, 3).unwrap();
        assert_eq!((w.slope_min, w.slope_max), (5, Some(9)));
        assert_eq!((w.p_min, w.p_max), (1, Some(1)));
        let w = slope_window(0, 2).unwrap();
        assert_eq!((w.slope_min, w.slope_max), (2, Some(5)));
        assert_eq!((w.p_min, w.p_max), (1, Some(1)));
        let w = slope_window(3, 1).unwrap();
        assert_eq!((w.slope_min, w.slope_max, w.p_max), (7, None, None));
        assert!(slope_window(0, 3).unwrap().is_empty());
    }

    #[test]
    fn v0_examples() {
        let v = check_v0_bounds(&cm(&[1, 1]), 2, 1);
        assert_eq!(v.case, V0Case::BothEven);
        assert!(v.holds && v.slope == 8);
        let v = check_v0_bounds(&cm(&[2, 1]), 3, 6);
        assert_eq!((v.lower, v.slope, v.upper), (45, 45, 49));
        assert_eq!((v.at_upper, v.partition), (Some(false), Some(false)));
        assert!(v.holds);
        let v = check_v0_bounds(&cm(&[1]), 2, 0);
        assert_eq!((v.case, v.lower, v.upper), (V0Case::EvenROddP, -4, 4));
        assert!(v.holds);
    }

    #[test]
    fn trefoil_reconstruction() {
        let trefoil = seq(&[1, 0]);
        let view = extract_relevant(&trefoil, 1, Parity::Odd).unwrap();
        assert_eq!(
            reconstruct_sigma(&view, Some(5), None).unwrap(),
            vec![(5, cm(&[2, 1]))]
        );
        assert!(matches!(
            reconstruct_sigma(&view, None, None),
            Err(Error::MissingBound(_))
        ));

        let even = extract_relevant(&trefoil, 2, Parity::Even).unwrap();
        assert_eq!(
            reconstruct_sigma(&even, None, None).unwrap(),
            vec![(2, cm(&[1, 1]))]
        );
        let odd = extract_relevant(&trefoil, 2, Parity::Odd).unwrap();
        assert_eq!(
            reconstruct_sigma(&odd, None, None).unwrap(),
            vec![(1, cm(&[1]))]
        );
        let three = extract_relevant(&trefoil, 3, Parity::Odd).unwrap();
        assert_eq!(
            reconstruct_sigma(&three, None, None).unwrap(),
            vec![(1, cm(&[1]))]
        );
        let four = extract_relevant(&trefoil, 4, Parity::Odd).unwrap();
        assert!(reconstruct_sigma(&four, None, None).unwrap().is_empty());
    }

    #[test]
    fn small_v0_shapes() {
        let t25 = seq(&[1, 1, 0]);
        let view = extract_relevant(&t25, 2, Parity::Odd).unwrap();
        assert_eq!(view.v0(), 1);
        assert_eq!(
            reconstruct_sigma(&view, None, None).unwrap(),
            vec![(3, cm(&[1, 1, 1]))]
        );
        let t27 = seq(&[2, 1, 1, 0]);
        let view = extract_relevant(&t27, 4, Parity::Odd).unwrap();
        assert_eq!(view.v0(), 1);
        assert_eq!(
            reconstruct_sigma(&view, None, None).unwrap(),
            vec![(1, cm(&[1]))]
        );
    }

    #[test]
    fn counts_and_feasible() {
        assert_eq!([1, 2, 3, 4, 5].map(count_bound), [3, 2, 1, 2, 1]);
        assert_eq!(feasible_r(&cm(&[2, 1]), 1), BTreeSet::from([1]));
        assert_eq!(feasible_r(&cm(&[1]), 1), BTreeSet::from([2, 3]));
        assert_eq!(feasible_r(&cm(&[1]), 2), BTreeSet::from([3]));
    }

    #[test]
    fn family_members() {
        assert_eq!(family_sigma(2).unwrap(), cm(&[11, 5, 3, 2, 1, 1]));
        assert_eq!(family_sigma(5).unwrap(), cm(&[23, 11, 6, 5, 1, 1, 1, 1, 1]));
        assert!(family_sigma(1).is_err());
        for s in 2..12 {
            let sigma = family_sigma(s).unwrap();
            assert_eq!(sigma.p(), 22 * s * s + 31 * s + 11);
            assert_eq!(sigma.l1_norm(), 9 * s + 5);
        }
    }

    #[test]
    fn family_t_values() {
        let r5 = verify_family_t(5).unwrap();
        assert_eq!((r5.t_295, r5.t_300), (625, 630));
        assert_eq!((r5.low_budget, r5.t_low_max), (134, 412));
        assert_eq!((r5.high_budget, r5.t_high_min), (135, 416));
        assert!(r5.all_hold(), "{r5:?}");
        let r6 = verify_family_t(6).unwrap();
        assert_eq!((r6.t_295, r6.t_300), (735, 740));
        assert!(verify_family_t(4).is_err());
    }

    #[test]
    fn synthetic_round_trip() {
        let sigma = family_sigma(5).unwrap();
        for r in 2..=4 {
            let v = synthesize_v(&sigma, r).unwrap();
            let view = extract_relevant(&v, r, Parity::of(sigma.p())).unwrap();
            assert!(matches_view(&sigma, &view), "r={r}");
            assert!(slope_relation_holds(&sigma, r, v.nu_plus()), "r={r}");
            let found = family_recover_s(&v, RecoverMode::Rge2);
            assert!(found.contains(&5), "r={r} found={found:?}");
        }
    }

    #[test]
    fn recover_degenerate() {
        assert!(family_recover_s(&seq(&[1, 0]), RecoverMode::Rge2).is_empty());
        assert!(family_recover_s(&seq(&[1, 0]), RecoverMode::R1).is_empty());
    }

    #[test]
    fn r1_recovery() {
        let sigma = family_sigma(3).unwrap();
        let v = synthesize_v(&sigma, 1).unwrap();
        assert_eq!(v.values().iter().filter(|&&x| x == 1).count(), 15);
        assert_eq!(family_recover_s(&v, RecoverMode::R1), vec![3]);
    }
}
