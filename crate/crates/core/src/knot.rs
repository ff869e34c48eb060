//! Knot-side data: Alexander polynomials, V-sequences and the relevant
//! subsequence visible at a given `r` and parity of `p`.

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};

/// Laurent polynomial `Σ aⱼ Tʲ` stored densely from its lowest exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentPoly {
    pub low: i64,
    pub coeffs: Vec<i64>,
}

impl LaurentPoly {
    /// Trims zero coefficients at both ends. The zero polynomial is stored
    /// with an empty coefficient list.
    pub fn new(low: i64, coeffs: Vec<i64>) -> Self {
        let start = coeffs.iter().position(|&c| c != 0);
        let Some(start) = start else {
            return LaurentPoly {
                low: 0,
                coeffs: Vec::new(),
            };
        };
        let end = coeffs.iter().rposition(|&c| c != 0).unwrap();
        LaurentPoly {
            low: low + start as i64,
            coeffs: coeffs[start..=end].to_vec(),
        }
    }

    pub fn one() -> Self {
        LaurentPoly {
            low: 0,
            coeffs: vec![1],
        }
    }

    /// Symmetric polynomial from its non-negative half `[a₀, a₁, …, a_g]`.
    pub fn symmetric(half: &[i64]) -> Self {
        let mut coeffs: Vec<i64> = half.iter().rev().copied().collect();
        coeffs.extend_from_slice(&half[1..]);
        Self::new(-(half.len() as i64 - 1), coeffs)
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        let idx = exp - self.low;
        if idx < 0 {
            return 0;
        }
        self.coeffs.get(idx as usize).copied().unwrap_or(0)
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn is_symmetric(&self) -> bool {
        self.coeffs.is_empty()
            || (self.low == -self.high() && self.coeffs.iter().eq(self.coeffs.iter().rev()))
    }

    /// Leading degree of a symmetric polynomial, which for L-space knots is
    /// the genus.
    pub fn degree(&self) -> i64 {
        self.high()
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `Tⁿ − 1` as an ascending coefficient list.
fn power_minus_one(n: usize) -> Vec<i64> {
    let mut v = vec![0; n + 1];
    v[0] = -1;
    v[n] = 1;
    v
}

/// Long division by a monic divisor; `None` when the remainder is nonzero.
fn exact_div(num: &[i64], den: &[i64]) -> Option<Vec<i64>> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return None;
    }
    let mut quot = vec![0; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    rem.iter().all(|&c| c == 0).then_some(quot)
}

/// Symmetrized Alexander polynomial of the `(p, q)` torus knot.
pub fn torus_alexander(p: u64, q: u64) -> Result<LaurentPoly> {
    if p < 2 || q < 2 {
        return invalid(format!(
            "torus knot parameters must be at least 2, got ({p},{q})"
        ));
    }
    if p.gcd(&q) != 1 {
        return invalid(format!(
            "torus knot parameters must be coprime, got ({p},{q})"
        ));
    }
    let (p, q) = (p as usize, q as usize);
    let num = poly_mul(&power_minus_one(p * q), &power_minus_one(1));
    let den = poly_mul(&power_minus_one(p), &power_minus_one(q));
    let quot = exact_div(&num, &den).expect("cyclotomic division is exact");
    let g = ((p - 1) * (q - 1) / 2) as i64;
    Ok(LaurentPoly::new(-g, quot))
}

/// A non-increasing sequence with steps of 0 or 1, implicitly zero past its
/// end.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VSequence {
    values: Vec<u64>,
}

impl VSequence {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return invalid("V-sequence must be non-empty");
        }
        for (i, w) in values.windows(2).enumerate() {
            if w[1] > w[0] || w[0] - w[1] > 1 {
                return invalid(format!(
                    "V-sequence step from index {i} to {} is {} -> {}",
                    i + 1,
                    w[0],
                    w[1]
                ));
            }
        }
        if *values.last().unwrap() > 1 {
            return invalid("V-sequence must end at 0 or 1 so the implicit zeros continue it");
        }
        Ok(VSequence { values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, i: u64) -> u64 {
        self.values.get(i as usize).copied().unwrap_or(0)
    }

    /// Smallest index with value 0.
    pub fn nu_plus(&self) -> u64 {
        self.values.iter().take_while(|&&v| v > 0).count() as u64
    }

    /// Number of indices `i` with `lo < Vᵢ ≤ hi`.
    pub fn count_between(&self, lo: u64, hi: u64) -> u64 {
        self.values.iter().filter(|&&v| v > lo && v <= hi).count() as u64
    }
}

#[derive(Serialize, Deserialize)]
struct VJson {
    v: Vec<u64>,
}

#[derive(Serialize)]
struct VJsonOut<'a> {
    v: &'a [u64],
    nu_plus: u64,
}

impl Serialize for VSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        VJsonOut {
            v: &self.values,
            nu_plus: self.nu_plus(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = VJson::deserialize(deserializer)?;
        VSequence::new(raw.v).map_err(serde::de::Error::custom)
    }
}

/// Torsion coefficients `tᵢ = Σ_{j≥1} j·a_{i+j}` for `i = 0..=g`.
///
/// Fails unless the result is a valid V-sequence, which is the case for
/// L-space knots.
pub fn torsion_coeffs(poly: &LaurentPoly) -> Result<VSequence> {
    if !poly.is_symmetric() {
        return invalid("torsion coefficients need a symmetric polynomial");
    }
    let g = poly.degree().max(0);
    let mut t = Vec::with_capacity(g as usize + 1);
    for i in 0..=g {
        let ti: i64 = (1..=g - i).map(|j| j * poly.coeff(i + j)).sum();
        if ti < 0 {
            return invalid(format!("torsion coefficient t_{i} = {ti} is negative"));
        }
        t.push(ti as u64);
    }
    VSequence::new(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: u64) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn matches(self, n: u64) -> bool {
        Parity::of(n) == self
    }
}

/// The V-values at the indices seen by slope `r²p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelevantView {
    pub r: u64,
    pub parity: Parity,
    /// False when `r` is odd, where the parity does not affect sampling.
    pub parity_used: bool,
    /// Samples up to and including the first zero.
    pub v_rel: Vec<u64>,
    pub nu_plus_rel: u64,
    /// `T^rel_m` for `m = 0..=V^rel_0`; it stays at `ν^{+rel}` beyond.
    pub t_rel: Vec<u64>,
    pub mu: Option<u64>,
    pub source_nu_plus: u64,
}

impl RelevantView {
    pub fn v0(&self) -> u64 {
        self.v_rel[0]
    }

    /// Number of nonzero samples with value at most `m`.
    pub fn t_rel_at(&self, m: u64) -> u64 {
        self.t_rel
            .get(m as usize)
            .copied()
            .unwrap_or(self.nu_plus_rel)
    }

    /// First sampled index into the full sequence.
    pub fn offset(&self) -> u64 {
        if self.parity_used && self.parity == Parity::Odd {
            self.r / 2
        } else {
            0
        }
    }
}

pub fn extract_relevant(v: &VSequence, r: u64, parity: Parity) -> Result<RelevantView> {
    if r == 0 {
        return invalid("r must be positive");
    }
    let parity_used = r % 2 == 0;
    let offset = if parity_used && parity == Parity::Odd {
        r / 2
    } else {
        0
    };
    let mut v_rel = Vec::new();
    let mut i = 0;
    loop {
        let value = v.get(offset + i * r);
        v_rel.push(value);
        if value == 0 {
            break;
        }
        i += 1;
    }
    let nu_plus_rel = v_rel.len() as u64 - 1;
    let v0 = v_rel[0];
    let t_rel: Vec<u64> = (0..=v0)
        .map(|m| v_rel.iter().filter(|&&x| x > 0 && x <= m).count() as u64)
        .collect();
    let mu = (1..v0)
        .map(|i| t_rel[i as usize] - t_rel[i as usize - 1])
        .min();
    Ok(RelevantView {
        r,
        parity,
        parity_used,
        v_rel,
        nu_plus_rel,
        t_rel,
        mu,
        source_nu_plus: v.nu_plus(),
    })
}

/// Open bounds on the number of `i` with `m2 < Vᵢ ≤ m1`, from the relevant
/// counts: `((Δ−1)r, (Δ+1)r)` with `Δ = T^rel_{m1} − T^rel_{m2}`.
pub fn conversion_window(view: &RelevantView, m1: u64, m2: u64) -> Result<(i64, i64)> {
    if m1 <= m2 {
        return invalid(format!("need m1 > m2, got m1={m1}, m2={m2}"));
    }
    let delta = view.t_rel_at(m1) as i64 - view.t_rel_at(m2) as i64;
    let r = view.r as i64;
    Ok(((delta - 1) * r, (delta + 1) * r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[u64]) -> VSequence {
        VSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn torus_polys() {
        assert_eq!(
            torus_alexander(2, 3).unwrap(),
            LaurentPoly::symmetric(&[-1, 1])
        );
        assert_eq!(
            torus_alexander(2, 5).unwrap(),
            LaurentPoly::symmetric(&[1, -1, 1])
        );
        let t34 = torus_alexander(3, 4).unwrap();
        assert_eq!(t34.degree(), 3);
        assert_eq!(t34.coeff(3), 1);
        assert!(t34.is_symmetric());
        assert!(torus_alexander(2, 4).is_err());
        assert!(torus_alexander(1, 4).is_err());
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(
            torsion_coeffs(&torus_alexander(2, 3).unwrap())
                .unwrap()
                .values(),
            &[1, 0]
        );
        assert_eq!(torsion_coeffs(&LaurentPoly::one()).unwrap().values(), &[0]);
        assert_eq!(
            torsion_coeffs(&torus_alexander(2, 5).unwrap())
                .unwrap()
                .values(),
            &[1, 1, 0]
        );
        assert_eq!(
            torsion_coeffs(&torus_alexander(2, 7).unwrap())
                .unwrap()
                .values(),
            &[2, 1, 1, 0]
        );
        let lopsided = LaurentPoly::new(0, vec![1, -1, 1]);
        assert!(torsion_coeffs(&lopsided).is_err());
    }

    #[test]
    fn v_sequence_validation() {
        assert!(VSequence::new(vec![3, 2, 2, 1, 0]).is_ok());
        assert!(VSequence::new(vec![3, 1, 0]).is_err());
        assert!(VSequence::new(vec![1, 2]).is_err());
        assert!(VSequence::new(vec![2]).is_err());
        assert!(VSequence::new(vec![]).is_err());
        assert_eq!(seq(&[3, 2, 2, 1, 0]).nu_plus(), 4);
        assert_eq!(seq(&[1]).nu_plus(), 1);
        assert_eq!(seq(&[1]).get(5), 0);
    }

    #[test]
    fn json_round_trip() {
        let v: VSequence = serde_json::from_str(r#"{"v":[3,2,2,1,0]}"#).unwrap();
        let out = serde_json::to_string(&v).unwrap();
        assert_eq!(out, r#"{"v":[3,2,2,1,0],"nu_plus":4}"#);
        assert_eq!(serde_json::from_str::<VSequence>(&out).unwrap(), v);
        assert!(serde_json::from_str::<VSequence>(r#"{"v":[3,1]}"#).is_err());
    }

    #[test]
    fn trefoil_views() {
        let trefoil = seq(&[1, 0]);
        let r1 = extract_relevant(&trefoil, 1, Parity::Odd).unwrap();
        assert_eq!(r1.v_rel, vec![1, 0]);
        assert_eq!(r1.nu_plus_rel, 1);
        assert!(!r1.parity_used);

        let even = extract_relevant(&trefoil, 2, Parity::Even).unwrap();
        assert_eq!(even.v_rel, vec![1, 0]);
        assert_eq!(even.nu_plus_rel, 1);

        let odd = extract_relevant(&trefoil, 2, Parity::Odd).unwrap();
        assert_eq!(odd.v_rel, vec![0]);
        assert_eq!(odd.nu_plus_rel, 0);
        assert_eq!(odd.mu, None);
    }

    #[test]
    fn relevant_counts() {
        let v = seq(&[4, 3, 3, 2, 2, 1, 1, 1, 0]);
        let view = extract_relevant(&v, 2, Parity::Even).unwrap();
        assert_eq!(view.v_rel, vec![4, 3, 2, 1, 0]);
        assert_eq!(view.t_rel, vec![0, 1, 2, 3, 4]);
        assert_eq!(view.mu, Some(1));
        assert_eq!(view.t_rel_at(100), 4);
        let odd = extract_relevant(&v, 2, Parity::Odd).unwrap();
        assert_eq!(odd.offset(), 1);
        assert_eq!(odd.v_rel, vec![3, 2, 1, 1, 0]);
        assert_eq!(odd.t_rel, vec![0, 2, 3, 4]);
        assert_eq!(odd.mu, Some(1));
        let flat = extract_relevant(&seq(&[3, 2, 1, 1, 0]), 2, Parity::Even).unwrap();
        assert_eq!(flat.v_rel, vec![3, 1, 0]);
        assert_eq!(flat.mu, Some(0));
    }

    #[test]
    fn windows() {
        let trefoil = extract_relevant(&seq(&[1, 0]), 1, Parity::Odd).unwrap();
        assert_eq!(conversion_window(&trefoil, 1, 0).unwrap(), (0, 2));
        assert_eq!(seq(&[1, 0]).count_between(0, 1), 1);
        let v = extract_relevant(&seq(&[3, 2, 1, 0]), 3, Parity::Odd).unwrap();
        assert_eq!(conversion_window(&v, 2, 1).unwrap(), (-3, 3));
        assert!(conversion_window(&v, 1, 1).is_err());
    }
}
