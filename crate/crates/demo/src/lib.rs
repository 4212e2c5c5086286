//! Browser bindings: a Kraus trace explorer, a single Frey curve reduction,
//! and the brute-force solution search. Every export returns a JSON string.

use std::collections::BTreeMap;

use apfive::arith::PrimeField;
use apfive::ec_fp::ap_trace;
use apfive::frey::{instantiate, kraus_trace_set, solve_t, FreyModel, Kappa};
use apfive::oracle::{derive_witness, search_solutions};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest search box accepted from the page; the search is quadratic in it.
pub const MAX_BOX: u64 = 400;
/// Largest p accepted for curve operations.
pub const MAX_P: u64 = 20_000;

fn kappa_of(k: u32) -> Result<Kappa, String> {
    Kappa::try_from(k as u64).map_err(|e| e.to_string())
}

fn check_p(p: u64) -> Result<(), String> {
    if p > MAX_P {
        return Err(format!("p = {p} is above the demo limit {MAX_P}"));
    }
    if p < 2 || 70 % p == 0 {
        return Err(format!("p = {p} divides 70"));
    }
    Ok(())
}

pub fn kraus_json(kappa: u32, n: u64, p: u64) -> Result<String, String> {
    check_p(p)?;
    let kappa = kappa_of(kappa)?;
    let set = kraus_trace_set(kappa, n, p).map_err(|e| e.to_string())?;
    let field = PrimeField::new(p).map_err(|e| e.to_string())?;
    let mut histogram: BTreeMap<i64, usize> = BTreeMap::new();
    for t in set.triples.iter().filter_map(|t| t.trace) {
        *histogram.entry(t).or_default() += 1;
    }
    let residues: Vec<i64> = set.residues.iter().map(|&r| field.centered(r)).collect();
    let rows: Vec<_> = set
        .triples
        .iter()
        .map(|t| {
            json!({
                "a": field.centered(t.triple.a),
                "b": field.centered(t.triple.b),
                "T": field.centered(t.triple.t),
                "trace": t.trace,
            })
        })
        .collect();
    Ok(json!({
        "kappa": kappa.value(),
        "n": n,
        "p": p,
        "model": FreyModel::new(kappa).equation(),
        "level": FreyModel::new(kappa).level,
        "residues": residues,
        "traces": set.traces,
        "histogram": histogram,
        "singular": set.singular,
        "triples": rows,
    })
    .to_string())
}

pub fn curve_json(kappa: u32, n: u64, p: u64, a: i64, b: i64) -> Result<String, String> {
    check_p(p)?;
    let kappa = kappa_of(kappa)?;
    let field = PrimeField::new(p).map_err(|e| e.to_string())?;
    let (a, b) = (field.reduce(a), field.reduce(b));
    let ts = solve_t(kappa, n, p, a, b).map_err(|e| e.to_string())?;
    let mut curves = Vec::new();
    for t in ts {
        let e = instantiate(kappa, a, b, t, n, &field).map_err(|e| e.to_string())?;
        let trace = ap_trace(&e).ok();
        curves.push(json!({
            "T": field.centered(t),
            "coefficients": [e.a1, e.a2, e.a3, e.a4, e.a6],
            "points": trace.map(|t| p as i64 + 1 - t),
            "trace": trace,
        }));
    }
    Ok(json!({"kappa": kappa.value(), "n": n, "p": p, "a": field.centered(a), "b": field.centered(b), "curves": curves}).to_string())
}

pub fn search_json(bound: u64, nmax: u32) -> Result<String, String> {
    if bound > MAX_BOX {
        return Err(format!("box {bound} is above the demo limit {MAX_BOX}"));
    }
    let records = search_solutions(bound, bound, nmax).map_err(|e| e.to_string())?;
    let rows: Vec<_> = records
        .iter()
        .map(|r| {
            let witness = if r.y != 0 && apfive::arith::is_prime_u64(r.n as u64) { derive_witness(r).ok() } else { None };
            json!({"x": r.x, "d": r.d, "y": r.y.to_string(), "n": r.n, "witness": witness})
        })
        .collect();
    Ok(json!({"box": bound, "nmax": nmax, "records": rows}).to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn kraus(kappa: u32, n: u32, p: u32) -> Result<String, JsValue> {
    js(kraus_json(kappa, n as u64, p as u64))
}

#[wasm_bindgen]
pub fn curve(kappa: u32, n: u32, p: u32, a: i32, b: i32) -> Result<String, JsValue> {
    js(curve_json(kappa, n as u64, p as u64, a as i64, b as i64))
}

#[wasm_bindgen]
pub fn search(bound: u32, nmax: u32) -> Result<String, JsValue> {
    js(search_json(bound as u64, nmax))
}
