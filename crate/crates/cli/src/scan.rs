//! Batch search for lensbordant slopes of one knot.

use lensbordant::knot::{extract_relevant, Parity};
use lensbordant::surgery::{
    check_v0_bounds, count_bound, reconstruct_sigma, slope_relation_holds, slope_window,
};
use lensbordant::{
    realize, torsion_coeffs, torus_alexander, Changemaker, SlopeWindow, V0Verdict, VSequence,
};
use serde::Serialize;

use crate::CliError;

pub const MAX_SCAN_R: u64 = 16;

/// The knot being scanned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KnotInput {
    Torus { p: u64, q: u64 },
    Sequence { v: Vec<u64> },
}

impl KnotInput {
    pub fn v_sequence(&self) -> Result<VSequence, CliError> {
        match self {
            KnotInput::Torus { p, q } => Ok(torsion_coeffs(&torus_alexander(*p, *q)?)?),
            KnotInput::Sequence { v } => Ok(VSequence::new(v.clone())?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LensSpace {
    pub p: u64,
    pub q: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanCandidate {
    pub slope: u64,
    pub p: u64,
    pub sigma: Changemaker,
    pub slope_relation: bool,
    pub v0_bounds: V0Verdict,
    pub lens_spaces: Vec<LensSpace>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub r: u64,
    pub parity: Parity,
    pub window: SlopeWindow,
    /// Reconstructed and realized; these are the reported slopes.
    pub candidates: Vec<ScanCandidate>,
    /// Reconstructed but with no linear-lattice embedding.
    pub unrealized: Vec<Changemaker>,
    /// `None` when the knot has `ν⁺ = 0` and no bound applies.
    pub count_bound: Option<u64>,
    pub within_bound: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub knot: KnotInput,
    pub v: VSequence,
    pub nu_plus: u64,
    pub r_max: u64,
    pub p_max: Option<u64>,
    pub entries: Vec<ScanEntry>,
}

impl ScanReport {
    pub fn candidate_count(&self) -> usize {
        self.entries.iter().map(|e| e.candidates.len()).sum()
    }

    pub fn within_bounds(&self) -> bool {
        self.entries.iter().all(|e| e.within_bound)
    }
}

fn scan_entry(
    v: &VSequence,
    r: u64,
    parity: Parity,
    p_max: Option<u64>,
) -> Result<ScanEntry, CliError> {
    let nu = v.nu_plus();
    let window = slope_window(nu, r)?;
    let bound = (nu != 0).then(|| count_bound(r));
    let mut entry = ScanEntry {
        r,
        parity,
        window,
        candidates: Vec::new(),
        unrealized: Vec::new(),
        count_bound: bound,
        within_bound: true,
        skipped: None,
    };
    if r == 1 && p_max.is_none() {
        entry.skipped = Some("r = 1 needs --p-max".into());
        return Ok(entry);
    }
    let view = extract_relevant(v, r, parity)?;
    for (p, sigma) in reconstruct_sigma(&view, None, p_max)? {
        if !parity.matches(p) {
            continue;
        }
        let lens: Vec<LensSpace> = realize(&sigma)?
            .lens_spaces
            .into_iter()
            .map(|l| LensSpace { p: l.p, q: l.q })
            .collect();
        if lens.is_empty() {
            entry.unrealized.push(sigma);
            continue;
        }
        entry.candidates.push(ScanCandidate {
            slope: r * r * p,
            p,
            slope_relation: slope_relation_holds(&sigma, r, nu),
            v0_bounds: check_v0_bounds(&sigma, r, view.v0()),
            sigma,
            lens_spaces: lens,
        });
    }
    let mut slopes: Vec<u64> = entry.candidates.iter().map(|c| c.p).collect();
    slopes.dedup();
    entry.within_bound = bound.is_none_or(|b| slopes.len() as u64 <= b);
    Ok(entry)
}

/// Runs window, reconstruction and realization for every `r ≤ r_max` and
/// both parities of `p`.
pub fn cmd_scan(knot: &KnotInput, r_max: u64, p_max: Option<u64>) -> Result<ScanReport, CliError> {
    if r_max == 0 || r_max > MAX_SCAN_R {
        return Err(CliError::Usage(format!(
            "r_max must be in 1..={MAX_SCAN_R}"
        )));
    }
    let v = knot.v_sequence()?;
    let mut entries = Vec::new();
    for r in 1..=r_max {
        for parity in [Parity::Odd, Parity::Even] {
            entries.push(scan_entry(&v, r, parity, p_max)?);
        }
    }
    Ok(ScanReport {
        knot: knot.clone(),
        nu_plus: v.nu_plus(),
        v,
        r_max,
        p_max,
        entries,
    })
}
