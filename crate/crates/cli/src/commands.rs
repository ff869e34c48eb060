//! Thin wrappers that turn library calls into printable outcomes.

use std::fmt::Write as _;

use lensbordant::changemaker::is_changemaker;
use lensbordant::e8::{
    check_e8_changemaker, classify_poincare, poincare_threshold, E8Changemaker, E8Vector,
};
use lensbordant::knot::{extract_relevant, Parity};
use lensbordant::surgery::{
    check_v0_bounds, family_recover_s, family_sigma, reconstruct_sigma, slope_window,
    verify_family_t, RecoverMode,
};
use lensbordant::{
    count_plans, embed_linear, hj_expansion, optimal_plan, realize, t_sigma_rational,
    t_sigma_sweep, torsion_coeffs, torus_alexander, v_sigma, v_sigma_table, verify_structure,
    Changemaker, VSequence,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::scan::{cmd_scan, KnotInput, ScanReport};
use crate::CliError;

/// What a command produced: machine output, a human rendering, and whether
/// it found what it was asked for.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    fn new(json: Value, text: String, ok: bool) -> Self {
        Outcome { json, text, ok }
    }

    fn from<T: Serialize>(value: &T, text: String, ok: bool) -> Self {
        Outcome::new(serde_json::to_value(value).expect("serializable"), text, ok)
    }
}

pub fn changemaker_check(entries: &[u64]) -> Result<Outcome, CliError> {
    if !is_changemaker(entries)? {
        return Ok(Outcome::new(
            json!({ "changemaker": false }),
            "not a changemaker".into(),
            false,
        ));
    }
    let c = Changemaker::new(entries.to_vec())?;
    let d = c.derived_scalars();
    let text = format!(
        "{c} is a changemaker\np = {}\n|σ|₁ = {}\nodd entries = {}",
        d.p, d.l1_norm, d.odd_count
    );
    let json = json!({
        "changemaker": true,
        "sigma": c.entries(),
        "p": d.p,
        "l1_norm": d.l1_norm,
        "odd_count": d.odd_count,
        "even_equal_partition": c.even_equal_partition(),
    });
    Ok(Outcome::new(json, text, true))
}

pub fn coin_t_sigma(sigma: &Changemaker, m: u64, rational: bool) -> Result<Outcome, CliError> {
    let t = t_sigma_sweep(sigma, m)[m as usize];
    let plan = optimal_plan(sigma, m);
    let mut json = json!({ "sigma": sigma.entries(), "m": m, "t": t, "plan": plan.alpha });
    let mut text = format!(
        "T_{m} = {t} for {sigma}\nplan {:?} costs {}",
        plan.alpha,
        plan.cost()
    );
    if rational {
        let q = t_sigma_rational(sigma, m);
        json["rational"] = json!(format!("{}/{}", q.numer(), q.denom()));
        let _ = write!(text, "\nrational relaxation = {q}");
    }
    Ok(Outcome::new(json, text, true))
}

pub fn coin_v_sigma(sigma: &Changemaker, upto: u64) -> Result<Outcome, CliError> {
    let table = v_sigma_table(sigma);
    let values: Vec<u64> = (0..=upto).map(|i| v_sigma(&table, i)).collect();
    let text = format!(
        "{sigma}: p = {}, |σ|₁ = {}\nbase {:?}\nV_0..V_{upto} = {:?}",
        table.p, table.l1, table.base, values
    );
    let json = json!({ "sigma": sigma.entries(), "p": table.p, "l1_norm": table.l1, "base": table.base, "values": values });
    Ok(Outcome::new(json, text, true))
}

pub fn coin_count_plans(m: u64) -> Result<Outcome, CliError> {
    let count = count_plans(m);
    Ok(Outcome::new(
        json!({ "m": m, "count": count }),
        format!("{count} plans with at most {m} coins"),
        true,
    ))
}

pub fn coin_structure(sigma: &Changemaker, x_max: u64) -> Result<Outcome, CliError> {
    let report = verify_structure(sigma, x_max);
    let mut text = format!("{} checks on {sigma}", report.checks.len());
    for f in report.failures() {
        let _ = write!(text, "\nFAILED {} at x = {:?}", f.name, f.x);
    }
    if report.all_hold() {
        text.push_str("\nall hold");
    }
    let ok = report.all_hold();
    Ok(Outcome::from(&report, text, ok))
}

pub fn knot_torus(p: u64, q: u64) -> Result<Outcome, CliError> {
    let poly = torus_alexander(p, q)?;
    let v = torsion_coeffs(&poly)?;
    let text = format!(
        "T({p},{q}): genus {}\nV = {:?}\nν⁺ = {}",
        poly.degree(),
        v.values(),
        v.nu_plus()
    );
    let json = json!({ "p": p, "q": q, "genus": poly.degree(), "alexander": poly, "v": v.values(), "nu_plus": v.nu_plus() });
    Ok(Outcome::new(json, text, true))
}

pub fn knot_relevant(v: &VSequence, r: u64, parity: Parity) -> Result<Outcome, CliError> {
    let view = extract_relevant(v, r, parity)?;
    let text = format!(
        "r = {r}, offset {}\nV_rel = {:?}\nν⁺_rel = {}\nμ = {:?}",
        view.offset(),
        view.v_rel,
        view.nu_plus_rel,
        view.mu
    );
    Ok(Outcome::from(&view, text, true))
}

pub fn surgery_window(nu_plus: u64, r: u64) -> Result<Outcome, CliError> {
    let w = slope_window(nu_plus, r)?;
    let upper = w.p_max.map_or("unbounded".to_string(), |p| p.to_string());
    let text = format!(
        "r = {r}, ν⁺ = {nu_plus}: slope ≥ {}, p in [{}, {upper}]",
        w.slope_min, w.p_min
    );
    Ok(Outcome::from(&w, text, !w.is_empty()))
}

pub fn surgery_bounds(sigma: &Changemaker, r: u64, v0: u64) -> Result<Outcome, CliError> {
    let verdict = check_v0_bounds(sigma, r, v0);
    let text = format!(
        "{} ≤ slope {} ≤ {} with V_0 = {v0} ({:?}) -> {}",
        verdict.lower,
        verdict.slope,
        verdict.upper,
        verdict.case,
        if verdict.holds { "holds" } else { "fails" }
    );
    let ok = verdict.holds;
    Ok(Outcome::from(&verdict, text, ok))
}

pub fn surgery_reconstruct(
    v: &VSequence,
    r: u64,
    parity: Parity,
    p_hint: Option<u64>,
    p_max: Option<u64>,
) -> Result<Outcome, CliError> {
    let view = extract_relevant(v, r, parity)?;
    let found = reconstruct_sigma(&view, p_hint, p_max)?;
    let candidates: Vec<Value> = found
        .iter()
        .map(|(p, s)| json!({ "p": p, "slope": r * r * p, "sigma": s.entries() }))
        .collect();
    let mut text = format!("{} candidate(s) at r = {r}", found.len());
    for (p, s) in &found {
        let _ = write!(text, "\np = {p:>4}  slope {:>6}  {s}", r * r * p);
    }
    Ok(Outcome::new(
        json!({ "r": r, "parity": parity, "candidates": candidates }),
        text,
        !found.is_empty(),
    ))
}

pub fn family_verify(s: u64) -> Result<Outcome, CliError> {
    let report = verify_family_t(s)?;
    let mut text = format!("s = {s}");
    for (name, holds) in report.checks() {
        let _ = write!(text, "\n{name}: {}", if holds { "ok" } else { "FAILED" });
    }
    let ok = report.all_hold();
    Ok(Outcome::from(&report, text, ok))
}

pub fn family_recover(v: &VSequence, mode: RecoverMode) -> Result<Outcome, CliError> {
    let s = family_recover_s(v, mode);
    let text = format!("possible s: {s:?}");
    let ok = !s.is_empty();
    Ok(Outcome::new(json!({ "mode": mode, "s": s }), text, ok))
}

pub fn family_show(s: u64) -> Result<Outcome, CliError> {
    let sigma = family_sigma(s)?;
    let text = format!("{sigma}\np = {}", sigma.p());
    Ok(Outcome::new(
        json!({ "s": s, "sigma": sigma.entries(), "p": sigma.p() }),
        text,
        true,
    ))
}

pub fn lattice_hj(p: u64, q: u64) -> Result<Outcome, CliError> {
    let e = hj_expansion(p, q)?;
    let text = format!(
        "{p}/{q} = [{}]",
        e.coeffs
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(Outcome::new(
        json!({ "p": p, "q": q, "expansion": e.coeffs }),
        text,
        true,
    ))
}

pub fn lattice_realize(sigma: &Changemaker) -> Result<Outcome, CliError> {
    let r = realize(sigma)?;
    let mut text = format!("{sigma}: p = {}", sigma.p());
    if r.lens_spaces.is_empty() {
        text.push_str("\nno linear lattice embeds");
    }
    for l in &r.lens_spaces {
        match l.q {
            Some(q) => {
                let _ = write!(text, "\nL({}, {q})", l.p);
            }
            None => text.push_str("\nS³"),
        }
    }
    let ok = !r.lens_spaces.is_empty();
    Ok(Outcome::from(&r, text, ok))
}

pub fn lattice_embed(sigma: &Changemaker, p: u64, q: u64) -> Result<Outcome, CliError> {
    match embed_linear(sigma, p, q)? {
        Some(e) => {
            let mut text = format!("L({p},{q}) embeds in the complement of {sigma}");
            for v in &e.vertices {
                let _ = write!(text, "\n  {v:?}");
            }
            Ok(Outcome::from(&e, text, true))
        }
        None => Ok(Outcome::new(
            json!({ "embedding": null }),
            format!("L({p},{q}) does not embed"),
            false,
        )),
    }
}

pub fn e8_check(s: E8Vector, sigma: Vec<u64>) -> Result<Outcome, CliError> {
    let tau = E8Changemaker::new(s, sigma);
    let verdict = check_e8_changemaker(&tau)?;
    let text = format!(
        "τ = ({}, {:?})\nc = {}, C = {}\nshort condition: {}\nShort condition: {}{}",
        tau.s(),
        tau.sigma(),
        verdict.short_max,
        verdict.deep_max,
        verdict.short_condition,
        verdict.deep_condition,
        if verdict.missing.is_empty() {
            String::new()
        } else {
            format!(" (missing {:?})", verdict.missing)
        }
    );
    let mut json = serde_json::to_value(&verdict).expect("serializable");
    json["e8_changemaker"] = json!(verdict.holds());
    json["tau"] = serde_json::to_value(&tau).expect("serializable");
    Ok(Outcome::new(json, text, verdict.holds()))
}

pub fn e8_classify(genus: u64, r: u64, p: u64) -> Result<Outcome, CliError> {
    let class = classify_poincare(genus, r, p)?;
    let threshold = poincare_threshold(genus, r, p);
    let text = format!("r²p = {}, threshold {threshold}: {class:?}", r * r * p);
    Ok(Outcome::new(
        json!({ "threshold": threshold, "slope": r * r * p, "class": class }),
        text,
        true,
    ))
}

pub fn scan(knot: &KnotInput, r_max: u64, p_max: Option<u64>) -> Result<Outcome, CliError> {
    let report = cmd_scan(knot, r_max, p_max)?;
    let text = render_scan(&report);
    let ok = report.candidate_count() > 0;
    Ok(Outcome::from(&report, text, ok))
}

fn render_scan(report: &ScanReport) -> String {
    let mut text = format!("V = {:?}, ν⁺ = {}", report.v.values(), report.nu_plus);
    for e in &report.entries {
        let parity = match e.parity {
            Parity::Odd => "odd",
            Parity::Even => "even",
        };
        let bound = e.count_bound.map_or("-".to_string(), |b| b.to_string());
        let _ = write!(
            text,
            "\nr = {} p {parity}: {} slope(s), bound {bound}",
            e.r,
            e.candidates.len()
        );
        if let Some(why) = &e.skipped {
            let _ = write!(text, " (skipped: {why})");
        }
        if !e.within_bound {
            text.push_str(" BOUND EXCEEDED");
        }
        for c in &e.candidates {
            let lens: Vec<String> = c
                .lens_spaces
                .iter()
                .map(|l| l.q.map_or("S³".to_string(), |q| format!("L({},{q})", l.p)))
                .collect();
            let _ = write!(
                text,
                "\n  slope {:>5}  {}  {}",
                c.slope,
                c.sigma,
                lens.join(" ")
            );
        }
    }
    text
}
