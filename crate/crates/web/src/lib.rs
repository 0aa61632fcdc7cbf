//! Browser bindings: emission orders, BECCS order screening and a small simulator.
//! Every export returns a JSON string; errors come back as JS exceptions.

use crncdr::acr::classify;
use crncdr::doa::{describe_partition, doa_search, format_vector, DoaOptions, DoaOutcome};
use crncdr::injectivity::summarize;
use crncdr::kinetics::{emission_power_law, EmissionParams};
use crncdr::models::{build_model, ModelParams};
use crncdr::rational::{format_rational, parse_rational};
use crncdr::sim::{integrate, IntegrateOptions, NumericSystem};
use crncdr::transforms::balanced_negative_check;
use crncdr::Q;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Plot data is thinned to at most this many samples.
pub const MAX_POINTS: usize = 400;

fn rational(name: &str, text: &str) -> Result<Q, String> {
    parse_rational(text.trim()).ok_or_else(|| format!("{name}: '{text}' is not a rational number"))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

#[derive(Serialize)]
struct Emission {
    e: String,
    f: String,
    linear: bool,
}

pub fn emission_orders_json(lambda: &str, mu: &str, a4: &str, ai: &str) -> Result<String, String> {
    let p = EmissionParams { lambda: rational("lambda", lambda)?, mu: rational("mu", mu)?, a4: rational("A4", a4)?, ai: rational("Ai", ai)? };
    let (e, f) = emission_power_law(&p).map_err(|e| e.to_string())?;
    let linear = e == Q::from_integer(1.into()) && f == Q::from_integer(0.into());
    Ok(json(&Emission { e: format_rational(&e), f: format_rational(&f), linear }))
}

#[derive(Serialize)]
struct Witness {
    u: Vec<String>,
    m: Vec<String>,
    l: Vec<String>,
    mu: String,
}

#[derive(Serialize)]
struct BeccsScreen {
    class: String,
    r: Option<String>,
    balanced_negative: bool,
    injectivity: String,
    determinant_terms: usize,
    multistationary: bool,
    witness: Option<Witness>,
}

fn beccs_params(p1: &str, p2: &str, q1: &str, q2: &str) -> Result<ModelParams, String> {
    Ok(ModelParams::default().orders(rational("p1", p1)?, rational("p2", p2)?, rational("q1", q1)?, rational("q2", q2)?))
}

pub fn beccs_screen_json(p1: &str, p2: &str, q1: &str, q2: &str) -> Result<String, String> {
    let kin = build_model("beccs", &beccs_params(p1, p2, q1, q2)?).map_err(|e| e.to_string())?;
    let class = classify(&kin).map_err(|e| e.to_string())?;
    let balanced = balanced_negative_check(&kin).map(|b| b.balanced).unwrap_or(false);
    let inj = summarize(&kin).map_err(|e| e.to_string())?;
    let witness = match doa_search(&kin, DoaOptions::default()).map_err(|e| e.to_string())? {
        DoaOutcome::Multistationary(w) => {
            let [u, m, l] = describe_partition(kin.network(), &w.partition);
            Some(Witness { u, m, l, mu: format_vector(&w.mu) })
        }
        DoaOutcome::NoWitness => None,
    };
    Ok(json(&BeccsScreen {
        class: format!("{:?}", class.kind),
        r: class.r,
        balanced_negative: balanced,
        injectivity: format!("{:?}", inj.verdict.verdict),
        determinant_terms: inj.num_terms,
        multistationary: witness.is_some(),
        witness,
    }))
}

#[derive(Serialize)]
struct Series {
    species: Vec<String>,
    t: Vec<f64>,
    x: Vec<Vec<f64>>,
    max_total_drift: f64,
}

/// `x0` is comma separated, one value per species (A1, A2, A3, A4, A8); all rate constants are 1.
pub fn simulate_beccs_json(p1: &str, p2: &str, q1: &str, q2: &str, x0: &str, t_end: f64) -> Result<String, String> {
    let params = beccs_params(p1, p2, q1, q2)?.rates(&vec![Q::from_integer(1.into()); 7]);
    let kin = build_model("beccs", &params).map_err(|e| e.to_string())?;
    let sys = NumericSystem::from_kinetics(&kin).map_err(|e| e.to_string())?;
    let x0: Vec<f64> = x0
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("'{}' is not a number", s.trim())))
        .collect::<Result<_, _>>()?;
    let tr = integrate(&sys, &x0, t_end, &IntegrateOptions::default()).map_err(|e| e.to_string())?;
    let stride = tr.t.len().div_ceil(MAX_POINTS).max(1);
    let mut keep: Vec<usize> = (0..tr.t.len()).step_by(stride).collect();
    if keep.last() != Some(&(tr.t.len() - 1)) {
        keep.push(tr.t.len() - 1);
    }
    Ok(json(&Series {
        species: sys.species.clone(),
        t: keep.iter().map(|&i| tr.t[i]).collect(),
        x: keep.iter().map(|&i| tr.x[i].clone()).collect(),
        max_total_drift: tr.max_total_drift(),
    }))
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn emission_orders(lambda: &str, mu: &str, a4: &str, ai: &str) -> Result<String, JsValue> {
    js(emission_orders_json(lambda, mu, a4, ai))
}

#[wasm_bindgen]
pub fn beccs_screen(p1: &str, p2: &str, q1: &str, q2: &str) -> Result<String, JsValue> {
    js(beccs_screen_json(p1, p2, q1, q2))
}

#[wasm_bindgen]
pub fn simulate_beccs(p1: &str, p2: &str, q1: &str, q2: &str, x0: &str, t_end: f64) -> Result<String, JsValue> {
    js(simulate_beccs_json(p1, p2, q1, q2, x0, t_end))
}
