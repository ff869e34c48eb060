//! Lens-space lattices and their embeddings as changemaker complements.
//!
//! `L(p,q)` bounds a plumbing whose intersection form is the linear lattice
//! `Λ(p,q)`: a path of vertices with self-pairings `−aᵢ` read off the
//! Hirzebruch-Jung continued fraction `p/q = a₁ − 1/(a₂ − 1/(…))`.

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::changemaker::Changemaker;
use crate::error::{invalid, Error, Result};

/// Largest `p` accepted by [`realize`].
pub const REALIZE_MAX_P: u64 = 500;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HJExpansion {
    pub p: u64,
    pub q: u64,
    pub coeffs: Vec<u64>,
}

impl HJExpansion {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The fraction `a₁ − 1/(a₂ − …)` evaluated exactly; `None` when empty.
    pub fn evaluate(&self) -> Option<Ratio<i64>> {
        let mut it = self.coeffs.iter().rev();
        let mut acc = Ratio::from_integer(*it.next()? as i64);
        for &a in it {
            acc = Ratio::from_integer(a as i64) - acc.recip();
        }
        Some(acc)
    }
}

/// Continued fraction of `p/q` with every term at least 2. `p = 1` gives the
/// empty expansion.
pub fn hj_expansion(p: u64, q: u64) -> Result<HJExpansion> {
    if p == 1 {
        return Ok(HJExpansion {
            p,
            q: 0,
            coeffs: Vec::new(),
        });
    }
    if q == 0 || q >= p {
        return invalid(format!("need 0 < q < p, got p={p}, q={q}"));
    }
    if p.gcd(&q) != 1 {
        return invalid(format!("p={p} and q={q} are not coprime"));
    }
    let mut coeffs = Vec::new();
    let (mut a, mut b) = (p, q);
    while b != 0 {
        let c = a.div_ceil(b);
        coeffs.push(c);
        (a, b) = (b, c * b - a);
    }
    Ok(HJExpansion { p, q, coeffs })
}

/// Symmetric integer matrix, serialized as its rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct GramMatrix {
    pub rows: Vec<Vec<i64>>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        self.rows.iter().all(|r| r.len() == n)
            && (0..n).all(|i| (0..i).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    /// Determinant of the leading `k×k` block, by fraction-free elimination.
    pub fn leading_minor(&self, k: usize) -> i128 {
        if k == 0 {
            return 1;
        }
        let mut m: Vec<Vec<i128>> = self.rows[..k]
            .iter()
            .map(|r| r[..k].iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for col in 0..k {
            if m[col][col] == 0 {
                let Some(swap) = (col + 1..k).find(|&r| m[r][col] != 0) else {
                    return 0;
                };
                m.swap(col, swap);
                sign = -sign;
            }
            for r in col + 1..k {
                for c in col + 1..k {
                    m[r][c] = (m[r][c] * m[col][col] - m[r][col] * m[col][c]) / prev;
                }
                m[r][col] = 0;
            }
            prev = m[col][col];
        }
        sign * m[k - 1][k - 1]
    }

    pub fn determinant(&self) -> i128 {
        self.leading_minor(self.size())
    }

    /// Leading minors alternate in sign, starting negative.
    pub fn is_negative_definite(&self) -> bool {
        self.is_symmetric()
            && (1..=self.size()).all(|k| {
                let d = self.leading_minor(k);
                if k % 2 == 1 {
                    d < 0
                } else {
                    d > 0
                }
            })
    }
}

/// Tridiagonal form with `−aᵢ` on the diagonal and 1 beside it.
pub fn linear_gram(e: &HJExpansion) -> GramMatrix {
    let n = e.len();
    let mut rows = vec![vec![0i64; n]; n];
    for (i, &a) in e.coeffs.iter().enumerate() {
        rows[i][i] = -(a as i64);
        if i + 1 < n {
            rows[i][i + 1] = 1;
            rows[i + 1][i] = 1;
        }
    }
    GramMatrix { rows }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pairings of `vectors` under the negated standard form of `ℤᴺ`.
pub fn gram_of(vectors: &[Vec<i64>]) -> GramMatrix {
    GramMatrix {
        rows: vectors
            .iter()
            .map(|u| vectors.iter().map(|v| -dot(u, v)).collect())
            .collect(),
    }
}

/// Basis `eᵢ − σᵢ·e_last` of the vectors orthogonal to `σ`. The last entry
/// of `σ` is 1, so these span the whole complement.
pub fn complement_basis(sigma: &Changemaker) -> Vec<Vec<i64>> {
    let n = sigma.dim() - 1;
    sigma.entries()[..n]
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut v = vec![0i64; n + 1];
            v[i] = 1;
            v[n] = -(s as i64);
            v
        })
        .collect()
}

/// Vertex vectors of a path embedded in `σ^⊥`, one per continued-fraction
/// term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub p: u64,
    pub q: u64,
    pub vertices: Vec<Vec<i64>>,
}

impl Embedding {
    /// Recomputes every pairing from the vertices.
    pub fn verify(&self, sigma: &Changemaker) -> bool {
        let Ok(e) = hj_expansion(self.p, self.q) else {
            return false;
        };
        let s: Vec<i64> = sigma.entries().iter().map(|&x| x as i64).collect();
        self.vertices
            .iter()
            .all(|v| v.len() == s.len() && dot(v, &s) == 0)
            && gram_of(&self.vertices) == linear_gram(&e)
    }
}

struct Constraint {
    weights: Vec<i64>,
    target: i64,
    /// `tail[i]` is the squared weight left from coordinate `i` on.
    tail: Vec<i64>,
}

impl Constraint {
    fn new(weights: Vec<i64>, target: i64) -> Self {
        let mut tail = vec![0i64; weights.len() + 1];
        for i in (0..weights.len()).rev() {
            tail[i] = tail[i + 1] + weights[i] * weights[i];
        }
        Constraint {
            weights,
            target,
            tail,
        }
    }
}

struct VertexSearch<'a> {
    constraints: Vec<Constraint>,
    /// Earlier coordinate that the current one may not exceed.
    bound_by: Vec<Option<usize>>,
    first: bool,
    sigma: &'a [i64],
    cur: Vec<i64>,
    dots: Vec<i64>,
}

struct Embedder<'a> {
    sigma: &'a [i64],
    coeffs: &'a [u64],
    placed: Vec<Vec<i64>>,
}

fn isqrt(n: i64) -> i64 {
    (n as u64).isqrt() as i64
}

/// Sorts each run of equal `σ` entries non-increasingly.
fn canonical(v: &[i64], sigma: &[i64]) -> Vec<i64> {
    let mut out = v.to_vec();
    let mut start = 0;
    while start < out.len() {
        let end = (start..out.len())
            .find(|&i| sigma[i] != sigma[start])
            .unwrap_or(out.len());
        out[start..end].sort_unstable_by(|a, b| b.cmp(a));
        start = end;
    }
    out
}

impl<'a> Embedder<'a> {
    fn vertex_search(&self) -> VertexSearch<'a> {
        let k = self.placed.len();
        let n = self.sigma.len();
        let mut constraints = vec![Constraint::new(self.sigma.to_vec(), 0)];
        for (j, x) in self.placed.iter().enumerate() {
            let target = if j + 1 == k { -1 } else { 0 };
            constraints.push(Constraint::new(x.clone(), target));
        }
        let bound_by = (0..n)
            .map(|i| {
                (0..i).rev().find(|&j| {
                    self.sigma[j] == self.sigma[i] && self.placed.iter().all(|x| x[j] == x[i])
                })
            })
            .collect();
        let ncons = constraints.len();
        VertexSearch {
            constraints,
            bound_by,
            first: k == 0,
            sigma: self.sigma,
            cur: vec![0; n],
            dots: vec![0; ncons],
        }
    }

    fn place(&mut self) -> bool {
        let k = self.placed.len();
        if k == self.coeffs.len() {
            return true;
        }
        let mut search = self.vertex_search();
        let norm = self.coeffs[k] as i64;
        let mut found = false;
        search.coord(0, norm, &mut |v| {
            self.placed.push(v.to_vec());
            if self.place() {
                found = true;
                return true;
            }
            self.placed.pop();
            false
        });
        found
    }
}

impl VertexSearch<'_> {
    /// Enumerates completions, calling `on_full` for each until it returns true.
    fn coord(&mut self, i: usize, rem: i64, on_full: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        let n = self.cur.len();
        if i == n {
            if rem != 0
                || self
                    .constraints
                    .iter()
                    .zip(&self.dots)
                    .any(|(c, &d)| d != c.target)
            {
                return false;
            }
            if self.first {
                let neg: Vec<i64> = self.cur.iter().map(|x| -x).collect();
                if self.cur < canonical(&neg, self.sigma) {
                    return false;
                }
            }
            let v = self.cur.clone();
            return on_full(&v);
        }
        let mut hi = isqrt(rem);
        if let Some(j) = self.bound_by[i] {
            hi = hi.min(self.cur[j]);
        }
        let lo = -isqrt(rem);
        let mut c = hi;
        while c >= lo {
            let rem2 = rem - c * c;
            let ok = self.constraints.iter().zip(&self.dots).all(|(con, &d)| {
                let gap = con.target - (d + c * con.weights[i]);
                (gap as i128) * (gap as i128) <= rem2 as i128 * con.tail[i + 1] as i128
            });
            if ok {
                self.cur[i] = c;
                for (con, d) in self.constraints.iter().zip(self.dots.iter_mut()) {
                    *d += c * con.weights[i];
                }
                let done = self.coord(i + 1, rem2, on_full);
                for (con, d) in self.constraints.iter().zip(self.dots.iter_mut()) {
                    *d -= c * con.weights[i];
                }
                self.cur[i] = 0;
                if done {
                    return true;
                }
            }
            c -= 1;
        }
        false
    }
}

/// Searches for vertices `x₁..xₙ` in `ℤⁿ⁺¹` with `xᵢ·xᵢ = aᵢ`,
/// `xᵢ·xᵢ₊₁ = −1`, all other pairs orthogonal and every `xᵢ ⊥ σ`.
///
/// Both lattices have rank `n` and determinant `p`, so any such embedding is
/// onto `σ^⊥`.
pub fn embed_linear(sigma: &Changemaker, p: u64, q: u64) -> Result<Option<Embedding>> {
    if sigma.p() != p {
        return invalid(format!("σ has Σσᵢ² = {}, not {p}", sigma.p()));
    }
    let e = hj_expansion(p, q)?;
    if e.len() + 1 != sigma.dim() {
        return invalid(format!(
            "expansion of {p}/{q} has length {}, σ needs {}",
            e.len(),
            sigma.dim() - 1
        ));
    }
    let s: Vec<i64> = sigma.entries().iter().map(|&x| x as i64).collect();
    let mut embedder = Embedder {
        sigma: &s,
        coeffs: &e.coeffs,
        placed: Vec::new(),
    };
    let found = embedder.place();
    Ok(found.then_some(Embedding {
        p,
        q: e.q,
        vertices: embedder.placed,
    }))
}

fn inverse_mod(q: u64, p: u64) -> u64 {
    let g = (q as i64).extended_gcd(&(p as i64));
    g.x.rem_euclid(p as i64) as u64
}

/// A lens space `L(p,q)` realized as the complement of `σ`. `q` is the
/// smaller of the pair `q, q'` with `qq' ≡ 1 (mod p)`; `p = 1` stands for
/// `S³` and has no `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LensRealization {
    pub p: u64,
    pub q: Option<u64>,
    pub q_inverse: Option<u64>,
    pub embedding: Option<Embedding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Realization {
    pub sigma: Changemaker,
    pub lens_spaces: Vec<LensRealization>,
    pub note: &'static str,
}

/// Every `L(p,q)` whose linear lattice is the complement of `σ`.
pub fn realize(sigma: &Changemaker) -> Result<Realization> {
    let p = sigma.p();
    let note = "reducedness not checked";
    if p > REALIZE_MAX_P {
        return Err(Error::Capacity {
            what: "realization p",
            got: p,
            limit: REALIZE_MAX_P,
        });
    }
    if p == 1 {
        return Ok(Realization {
            sigma: sigma.clone(),
            lens_spaces: vec![LensRealization {
                p,
                q: None,
                q_inverse: None,
                embedding: None,
            }],
            note,
        });
    }
    let want = sigma.dim() - 1;
    let qs: Vec<u64> = (1..p)
        .filter(|&q| q.gcd(&p) == 1 && q <= inverse_mod(q, p))
        .filter(|&q| hj_expansion(p, q).is_ok_and(|e| e.len() == want))
        .collect();
    let found: Vec<Option<LensRealization>> = qs
        .into_par_iter()
        .map(|q| {
            let emb = embed_linear(sigma, p, q).ok().flatten()?;
            Some(LensRealization {
                p,
                q: Some(q),
                q_inverse: Some(inverse_mod(q, p)),
                embedding: Some(emb),
            })
        })
        .collect();
    Ok(Realization {
        sigma: sigma.clone(),
        lens_spaces: found.into_iter().flatten().collect(),
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(v: &[u64]) -> Changemaker {
        Changemaker::new(v.to_vec()).unwrap()
    }

    #[test]
    fn expansions() {
        assert_eq!(hj_expansion(7, 2).unwrap().coeffs, vec![4, 2]);
        assert_eq!(hj_expansion(9, 1).unwrap().coeffs, vec![9]);
        assert_eq!(hj_expansion(5, 4).unwrap().coeffs, vec![2, 2, 2, 2]);
        assert!(hj_expansion(1, 0).unwrap().is_empty());
        assert!(hj_expansion(6, 4).is_err());
        assert!(hj_expansion(6, 6).is_err());
        assert_eq!(
            hj_expansion(7, 2).unwrap().evaluate(),
            Some(Ratio::new(7, 2))
        );
    }

    #[test]
    fn grams() {
        let g = linear_gram(&hj_expansion(2, 1).unwrap());
        assert_eq!(g.rows, vec![vec![-2]]);
        assert_eq!(g.determinant().abs(), 2);
        let g = linear_gram(&hj_expansion(7, 2).unwrap());
        assert_eq!(g.rows, vec![vec![-4, 1], vec![1, -2]]);
        assert_eq!(g.determinant().abs(), 7);
        let g = linear_gram(&hj_expansion(5, 4).unwrap());
        assert_eq!(g.determinant().abs(), 5);
        assert!(g.is_negative_definite());
        let indefinite = GramMatrix {
            rows: vec![vec![-1, 2], vec![2, -1]],
        };
        assert!(!indefinite.is_negative_definite());
    }

    #[test]
    fn complements() {
        let b = complement_basis(&cm(&[1, 1]));
        assert_eq!(b, vec![vec![1, -1]]);
        assert_eq!(gram_of(&b).rows, vec![vec![-2]]);
        let b = complement_basis(&cm(&[2, 1]));
        assert_eq!(b, vec![vec![1, -2]]);
        assert_eq!(gram_of(&b).rows, vec![vec![-5]]);
        let chain = vec![vec![1, -1, 0], vec![0, 1, -1]];
        assert_eq!(gram_of(&chain).rows, vec![vec![-2, 1], vec![1, -2]]);
        assert_eq!(
            gram_of(&complement_basis(&cm(&[1, 1, 1])))
                .determinant()
                .abs(),
            3
        );
    }

    #[test]
    fn embeddings() {
        let e = embed_linear(&cm(&[1, 1]), 2, 1).unwrap().unwrap();
        assert_eq!(e.vertices, vec![vec![1, -1]]);
        let e = embed_linear(&cm(&[2, 1]), 5, 1).unwrap().unwrap();
        assert_eq!(e.vertices, vec![vec![1, -2]]);
        assert!(e.verify(&cm(&[2, 1])));
        assert!(matches!(
            embed_linear(&cm(&[2, 1]), 5, 4),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            embed_linear(&cm(&[2, 1]), 6, 1),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn realizations() {
        let r = realize(&cm(&[1, 1, 1])).unwrap();
        assert!(r
            .lens_spaces
            .iter()
            .any(|l| l.q == Some(2) || l.q_inverse == Some(2)));
        let r = realize(&cm(&[2, 1])).unwrap();
        assert!(r.lens_spaces.iter().any(|l| l.q == Some(1)));
        let r = realize(&cm(&[1])).unwrap();
        assert_eq!(r.lens_spaces.len(), 1);
        assert_eq!((r.lens_spaces[0].p, r.lens_spaces[0].q), (1, None));
        assert_eq!(r.note, "reducedness not checked");
        let big = Changemaker::ones(501).unwrap();
        assert!(matches!(realize(&big), Err(Error::Capacity { .. })));
    }

    #[test]
    fn trefoil_changemakers() {
        // (2,1,1,1) is realized, (2,1,1) and (2,1,1,1,1) are not
        assert!(!realize(&cm(&[2, 1, 1, 1])).unwrap().lens_spaces.is_empty());
        assert!(realize(&cm(&[2, 1, 1])).unwrap().lens_spaces.is_empty());
        assert!(realize(&cm(&[2, 1, 1, 1, 1]))
            .unwrap()
            .lens_spaces
            .is_empty());
    }
}
