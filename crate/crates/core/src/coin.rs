//! The coin game.
//!
//! A shop sells copies of items, one item per entry of `σ`. The `k`-th copy of
//! item `i` costs `k` coins and is worth `σᵢ` points, so buying `αᵢ` copies
//! costs `αᵢ(αᵢ+1)/2`. `T^σ_m` is the best score reachable with `m` coins, and
//! `V^σ_i` is the least budget that reaches score `i`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_rational::Ratio;
use serde::Serialize;

use crate::changemaker::Changemaker;
use crate::error::{invalid, Result};

fn tri(k: u64) -> u64 {
    k * (k + 1) / 2
}

/// Number of copies bought of each item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PurchasePlan {
    pub alpha: Vec<u64>,
}

impl PurchasePlan {
    pub fn cost(&self) -> u64 {
        self.alpha.iter().map(|&a| tri(a)).sum()
    }

    pub fn value(&self, sigma: &Changemaker) -> Result<u64> {
        if self.alpha.len() != sigma.dim() {
            return invalid(format!(
                "plan has {} entries but the changemaker has {}",
                self.alpha.len(),
                sigma.dim()
            ));
        }
        Ok(self
            .alpha
            .iter()
            .zip(sigma.entries())
            .map(|(a, s)| a * s)
            .sum())
    }
}

/// `T^σ_m` for every `m` in `0..=m_max`.
///
/// Knapsack over items where `best[c]` is the best score with at most `c`
/// coins; each item tries every copy count whose triangular cost fits.
pub fn t_sigma_sweep(sigma: &Changemaker, m_max: u64) -> Vec<u64> {
    let m = m_max as usize;
    let mut best = vec![0u64; m + 1];
    let mut next = vec![0u64; m + 1];
    for &s in sigma.entries() {
        next.copy_from_slice(&best);
        let mut k = 1u64;
        while tri(k) as usize <= m {
            let cost = tri(k) as usize;
            let gain = k * s;
            for c in cost..=m {
                let v = best[c - cost] + gain;
                if v > next[c] {
                    next[c] = v;
                }
            }
            k += 1;
        }
        std::mem::swap(&mut best, &mut next);
    }
    best
}

/// Exact `T^σ_m`.
pub fn t_sigma(sigma: &Changemaker, m: u64) -> u64 {
    t_sigma_sweep(sigma, m)[m as usize]
}

/// An optimal plan for budget `m`, recovered by walking the DP layers back.
pub fn optimal_plan(sigma: &Changemaker, m: u64) -> PurchasePlan {
    let m = m as usize;
    let entries = sigma.entries();
    let mut layers: Vec<Vec<u64>> = Vec::with_capacity(entries.len() + 1);
    layers.push(vec![0; m + 1]);
    for &s in entries {
        let prev = layers.last().unwrap();
        let mut cur = prev.clone();
        let mut k = 1u64;
        while tri(k) as usize <= m {
            let cost = tri(k) as usize;
            for c in cost..=m {
                cur[c] = cur[c].max(prev[c - cost] + k * s);
            }
            k += 1;
        }
        layers.push(cur);
    }
    let mut alpha = vec![0u64; entries.len()];
    let mut c = m;
    for i in (0..entries.len()).rev() {
        let target = layers[i + 1][c];
        let mut k = 0u64;
        loop {
            let cost = tri(k) as usize;
            if cost <= c && layers[i][c - cost] + k * entries[i] == target {
                alpha[i] = k;
                c -= cost;
                break;
            }
            k += 1;
        }
    }
    PurchasePlan { alpha }
}

#[derive(PartialEq, Eq)]
struct Option_ {
    copy: u64,
    item: usize,
    worth: u64,
}

impl Ord for Option_ {
    // reversed so the max-heap yields the cheapest coins-per-point first
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.copy as u128 * other.worth as u128;
        let rhs = other.copy as u128 * self.worth as u128;
        rhs.cmp(&lhs).then_with(|| other.item.cmp(&self.item))
    }
}

impl PartialOrd for Option_ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `T^{σ,ℚ}_m`: buy options in order of coins per point, the last one
/// fractionally.
pub fn t_sigma_rational(sigma: &Changemaker, m: u64) -> Ratio<u64> {
    let mut heap: BinaryHeap<Option_> = sigma
        .entries()
        .iter()
        .enumerate()
        .map(|(item, &worth)| Option_ {
            copy: 1,
            item,
            worth,
        })
        .collect();
    let mut left = m;
    let mut score = Ratio::from_integer(0u64);
    while left > 0 {
        let Some(opt) = heap.pop() else { break };
        if opt.copy <= left {
            left -= opt.copy;
            score += opt.worth;
            heap.push(Option_ {
                copy: opt.copy + 1,
                ..opt
            });
        } else {
            score += Ratio::new(left * opt.worth, opt.copy);
            left = 0;
        }
    }
    score
}

/// Number of multisets of positive parts `a` with `Σ a(a+1)/2 ≤ m`,
/// the empty multiset included.
pub fn count_plans(m: u64) -> u128 {
    let m = m as usize;
    let mut ways = vec![0u128; m + 1];
    ways[0] = 1;
    let mut a = 1u64;
    while tri(a) as usize <= m {
        let cost = tri(a) as usize;
        for c in cost..=m {
            ways[c] += ways[c - cost];
        }
        a += 1;
    }
    ways.iter().sum()
}

/// `V^σ_1..V^σ_p` with the scalars needed to extend it to every index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaRelevantTable {
    pub sigma: Changemaker,
    pub base: Vec<u64>,
    pub p: u64,
    pub l1: u64,
}

/// Inverts a `T` sweep: entry `i` is the least `m` with `T_m ≥ i`, for
/// `i = 0..=count`. Panics if the sweep never reaches `count`.
fn staircase(t: &[u64], count: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(count as usize + 1);
    let mut m = 0usize;
    for i in 0..=count {
        while t[m] < i {
            m += 1;
        }
        v.push(m as u64);
    }
    v
}

pub fn v_sigma_table(sigma: &Changemaker) -> SigmaRelevantTable {
    let p = sigma.p();
    let l1 = sigma.l1_norm();
    let t = t_sigma_sweep(sigma, (p + l1) / 2);
    let base = staircase(&t, p)[1..].to_vec();
    SigmaRelevantTable {
        sigma: sigma.clone(),
        base,
        p,
        l1,
    }
}

/// `V^σ_i` from the base table, using
/// `V_{xp+k} = (x²p + x|σ|₁)/2 + xk + V_k`.
pub fn v_sigma(table: &SigmaRelevantTable, i: u64) -> u64 {
    let (p, l1) = (table.p, table.l1);
    let (x, k) = (i / p, i % p);
    let vk = if k == 0 {
        0
    } else {
        table.base[k as usize - 1]
    };
    (x * x * p + x * l1) / 2 + x * k + vk
}

/// `V^σ_0..=V^σ_{i_max}` straight from a `T` sweep, without the closed form.
pub fn v_sigma_direct(sigma: &Changemaker, i_max: u64) -> Vec<u64> {
    let p = sigma.p();
    let x = i_max.div_ceil(p).max(1);
    let t = t_sigma_sweep(sigma, (x * x * p + x * sigma.l1_norm()) / 2);
    staircase(&t, i_max)
}

/// One identity or inequality evaluated by [`verify_structure`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureCheck {
    pub name: &'static str,
    /// Multiplier the check was run at, when it depends on one.
    pub x: Option<u64>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub sigma: Changemaker,
    pub checks: Vec<StructureCheck>,
}

impl StructureReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &StructureCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Evaluates the structural facts about `T^σ` and `V^σ` at multipliers
/// `1..=x_max`, all against a direct DP sweep.
pub fn verify_structure(sigma: &Changemaker, x_max: u64) -> StructureReport {
    let p = sigma.p();
    let l1 = sigma.l1_norm();
    let odd = sigma.odd_count();
    let top = x_max + 1;
    let t = t_sigma_sweep(sigma, (top * top * p + top * l1) / 2);
    let v = staircase(&t, top * p);
    let table = v_sigma_table(sigma);
    let mut checks = Vec::new();
    let mut push = |name, x, holds| checks.push(StructureCheck { name, x, holds });

    for x in 1..=x_max {
        let upper = (x * x * p + x * l1) / 2;
        let lower = (x * x * p - x * l1) / 2;
        push("t_at_upper_multiple", Some(x), t[upper as usize] == x * p);
        push(
            "t_at_lower_multiple",
            Some(x),
            t[lower as usize] == x * p - l1,
        );
        push("v_at_multiple", Some(x), v[(x * p) as usize] == upper);
        push(
            "v_at_shifted_multiple",
            Some(x),
            v[(x * p - l1) as usize] == lower,
        );
        push(
            "v_step_at_most_x",
            Some(x),
            (1..=x * p).all(|a| v[a as usize] - v[a as usize - 1] <= x),
        );
        push(
            "v_step_at_least_x",
            Some(x),
            (x * p - l1..top * p).all(|a| v[a as usize + 1] - v[a as usize] >= x),
        );
        push(
            "jump_gap_at_most_x",
            Some(x),
            jump_gap_at_most(&t, upper, x),
        );
        push(
            "double_step_gap_at_least",
            Some(x),
            double_step_gap_at_least(&t, lower, x),
        );
    }
    push(
        "closed_form_matches_sweep",
        None,
        (0..=top * p).all(|i| v_sigma(&table, i) == v[i as usize]),
    );

    if p % 2 == 0 {
        push("v_half_even", None, v[((2 * p - l1) / 2) as usize] == p / 2);
    } else {
        push(
            "v_half_odd",
            None,
            v[((2 * p - l1 - 1) / 2) as usize] == (p - 1) / 2,
        );
    }
    let mid = v[((p - l1) / 2) as usize];
    // odd ≤ p always, so p − odd is non-negative
    push("v_mid_lower_bound", None, 8 * mid >= p - odd);
    push(
        "v_mid_equality_iff_partition",
        None,
        (8 * mid == p - odd) == sigma.even_equal_partition(),
    );
    push("v_mid_upper_bound", None, 8 * mid <= p + 3 * odd);

    StructureReport {
        sigma: sigma.clone(),
        checks,
    }
}

/// For every `a ≤ bound` where `T` jumps, the earliest budget with the
/// pre-jump score lies within `x` of `a`.
fn jump_gap_at_most(t: &[u64], bound: u64, x: u64) -> bool {
    let mut first_at = 0usize;
    for a in 1..=bound as usize {
        if t[a] > t[a - 1] {
            if a - first_at > x as usize {
                return false;
            }
            first_at = a;
        }
    }
    true
}

/// For every `a > bound` where `T` jumps, any `b` with `T_a − T_b ≥ 2`
/// satisfies `a − b ≥ x + 1`.
fn double_step_gap_at_least(t: &[u64], bound: u64, x: u64) -> bool {
    let end = t.len();
    for a in bound as usize + 1..end {
        if t[a] == t[a - 1] || t[a] < 2 {
            continue;
        }
        let latest_b = (0..a).rev().find(|&b| t[a] - t[b] >= 2);
        if let Some(b) = latest_b {
            if a - b < x as usize + 1 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(v: &[u64]) -> Changemaker {
        Changemaker::new(v.to_vec()).unwrap()
    }

    fn family(s: u64) -> Changemaker {
        let mut v = vec![4 * s + 3, 2 * s + 1, s + 1, s];
        v.extend(std::iter::repeat_n(1, s as usize));
        cm(&v)
    }

    /// Every plan with cost ≤ m, enumerated coordinate by coordinate.
    fn brute_t(sigma: &[u64], m: u64) -> u64 {
        fn go(sigma: &[u64], left: u64) -> u64 {
            let Some((&s, rest)) = sigma.split_first() else {
                return 0;
            };
            (0..)
                .take_while(|&k| tri(k) <= left)
                .map(|k| k * s + go(rest, left - tri(k)))
                .max()
                .unwrap()
        }
        go(sigma, m)
    }

    #[test]
    fn t_examples() {
        let s = cm(&[2, 1]);
        assert_eq!(t_sigma(&s, 4), 5);
        assert_eq!(t_sigma(&s, 0), 0);
        assert_eq!(t_sigma(&family(5), 295), 625);
        assert_eq!(optimal_plan(&s, 4).alpha, vec![2, 1]);
    }

    #[test]
    fn sweep_matches_brute() {
        for v in [vec![2, 1], vec![1, 1, 1], vec![3, 2, 1], vec![4, 2, 1, 1]] {
            let s = cm(&v);
            let sweep = t_sigma_sweep(&s, 30);
            for m in 0..=30 {
                assert_eq!(sweep[m as usize], brute_t(&v, m), "{v:?} m={m}");
                let plan = optimal_plan(&s, m);
                assert!(plan.cost() <= m);
                assert_eq!(plan.value(&s).unwrap(), sweep[m as usize]);
            }
        }
    }

    #[test]
    fn rational_examples() {
        let s = cm(&[2, 1]);
        assert_eq!(t_sigma_rational(&s, 2), Ratio::from_integer(3));
        assert_eq!(t_sigma_rational(&s, 0), Ratio::from_integer(0));
        let shifted = cm(&[15, 7, 4, 3, 1, 1, 1, 1, 1]);
        assert_eq!(
            t_sigma_rational(&shifted, 134),
            Ratio::new(268 * 14 + 13, 14)
        );
    }

    #[test]
    fn rational_dominates() {
        let s = cm(&[5, 3, 1, 1]);
        for m in 0..60 {
            assert!(t_sigma_rational(&s, m) >= Ratio::from_integer(t_sigma(&s, m)));
        }
    }

    #[test]
    fn plan_counts_small() {
        assert_eq!(count_plans(0), 1);
        assert_eq!(count_plans(1), 2);
        assert_eq!(count_plans(2), 3);
        // {}, {1}, {1,1}, {1,1,1}, {2}
        assert_eq!(count_plans(3), 5);
    }

    #[test]
    fn table_examples() {
        assert_eq!(v_sigma_table(&cm(&[2, 1])).base, vec![1, 1, 2, 3, 4]);
        assert_eq!(v_sigma_table(&cm(&[1])).base, vec![1]);
        assert_eq!(v_sigma_table(&cm(&[1, 1, 1])).base, vec![1, 2, 3]);
    }

    #[test]
    fn closed_form_examples() {
        let table = v_sigma_table(&cm(&[2, 1]));
        assert_eq!(v_sigma(&table, 0), 0);
        assert_eq!(v_sigma(&table, 5), 4);
        assert_eq!(v_sigma(&table, 6), 6);
        assert_eq!(v_sigma(&table, 10), 13);
        let direct = v_sigma_direct(&cm(&[2, 1]), 10);
        assert_eq!(direct[6], 6);
        assert_eq!(direct[10], 13);
    }

    #[test]
    fn structure_examples() {
        let report = verify_structure(&cm(&[2, 1]), 2);
        assert!(
            report.all_hold(),
            "{:?}",
            report.failures().collect::<Vec<_>>()
        );
        assert!(!cm(&[2, 1]).even_equal_partition());

        let ones = cm(&[1; 6]);
        assert_eq!(t_sigma(&ones, 6), 6);
        assert!(verify_structure(&ones, 3).all_hold());

        let s2 = family(2);
        assert_eq!(t_sigma(&s2, 92), 161);
        assert!(verify_structure(&s2, 1).all_hold());
    }
}
