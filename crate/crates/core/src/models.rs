//! Built-in carbon-cycle models and the single-method portfolio builder.
//!
//! Rate constants are named k1..k7 throughout: k3 and k4 are the ocean exchange
//! constants a_m and a_m*beta (supply `a_m` and `beta` to have them derived), k5 is
//! the emission constant, k6 the capture constant and k7 the storage constant.

use crate::error::{Error, Result};
use crate::kinetics::{emission_power_law, EmissionParams, KineticOrder, PowerLawKinetics, RateConstant, SignAssumption};
use crate::network::ReactionNetwork;
use crate::rational::{q, qf, Q};
use num_traits::Zero;
use std::collections::BTreeMap;

pub const MODEL_NAMES: [&str; 5] = ["anderies_raw", "anderies", "beccs", "ar", "dac"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelParams {
    /// Values for order symbols (p1, p2, q1, q2, e15, ...) and rate constants (k1..k7, a_m, beta).
    pub bindings: BTreeMap<String, Q>,
    /// (A4, storage pool) at which the emission rate is linearized.
    pub operating_point: Option<(Q, Q)>,
}

impl ModelParams {
    pub fn with(mut self, sym: &str, v: Q) -> Self {
        self.bindings.insert(sym.to_string(), v);
        self
    }

    /// p1, p2, q1, q2 in one go.
    pub fn orders(self, p1: Q, p2: Q, q1: Q, q2: Q) -> Self {
        self.with("p1", p1).with("p2", p2).with("q1", q1).with("q2", q2)
    }

    /// k1..k7 set from a slice (missing tail entries are left unbound).
    pub fn rates(mut self, k: &[Q]) -> Self {
        for (i, v) in k.iter().enumerate() {
            self.bindings.insert(format!("k{}", i + 1), v.clone());
        }
        self
    }

    fn resolved(&self) -> Result<BTreeMap<String, Q>> {
        let mut b = self.bindings.clone();
        if let Some(am) = b.get("a_m").cloned() {
            b.entry("k3".into()).or_insert_with(|| am.clone());
            if let Some(beta) = b.get("beta").cloned() {
                if beta <= Q::zero() {
                    return Err(Error::InvalidParameter("beta must be positive".into()));
                }
                b.entry("k4".into()).or_insert(am * beta);
            }
        }
        Ok(b)
    }
}

/// Removal methods with their storage species index and (lambda, mu).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdrMethod {
    Beccs,
    Dac,
    Ew,
    Biochar,
    Of,
    Scs,
    Wr,
    Ar,
    Oa,
    Doc,
}

impl CdrMethod {
    pub const ALL: [CdrMethod; 10] = [
        CdrMethod::Beccs,
        CdrMethod::Dac,
        CdrMethod::Ew,
        CdrMethod::Biochar,
        CdrMethod::Of,
        CdrMethod::Scs,
        CdrMethod::Wr,
        CdrMethod::Ar,
        CdrMethod::Oa,
        CdrMethod::Doc,
    ];

    pub fn code(self) -> &'static str {
        match self {
            CdrMethod::Beccs => "BECCS",
            CdrMethod::Dac => "DAC",
            CdrMethod::Ew => "EW",
            CdrMethod::Biochar => "Biochar",
            CdrMethod::Of => "OF",
            CdrMethod::Scs => "SCS",
            CdrMethod::Wr => "WR",
            CdrMethod::Ar => "AR",
            CdrMethod::Oa => "OA",
            CdrMethod::Doc => "DOC",
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        CdrMethod::ALL.into_iter().find(|m| m.code().eq_ignore_ascii_case(s))
    }

    /// Index i of the storage species A_i.
    pub fn storage_index(self) -> u32 {
        8 + CdrMethod::ALL.iter().position(|m| *m == self).unwrap() as u32
    }

    pub fn storage_species(self) -> String {
        format!("A{}", self.storage_index())
    }

    /// (lambda, mu): long-term and inorganic fractions of stored carbon.
    pub fn fractions(self) -> (Q, Q) {
        match self {
            CdrMethod::Beccs | CdrMethod::Dac | CdrMethod::Of | CdrMethod::Doc => (q(1), q(0)),
            CdrMethod::Ew | CdrMethod::Oa => (q(1), q(1)),
            CdrMethod::Biochar => (q(1), qf(1, 2)),
            CdrMethod::Scs => (qf(1, 100), q(0)),
            CdrMethod::Wr => (qf(1, 100), qf(9, 10)),
            CdrMethod::Ar => (qf(1, 2), q(0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdrSpec {
    pub method: CdrMethod,
    pub lambda: Q,
    pub mu: Q,
    /// Species the method draws carbon from (A1 land, A2 atmosphere, ...).
    pub source: String,
}

impl CdrSpec {
    pub fn new(method: CdrMethod, source: &str) -> Self {
        let (lambda, mu) = method.fractions();
        CdrSpec { method, lambda, mu, source: source.to_string() }
    }
}

struct Builder {
    species: Vec<String>,
    pairs: Vec<(String, Vec<Q>, Vec<Q>)>,
    orders: Vec<Vec<KineticOrder>>,
    rates: Vec<RateConstant>,
}

impl Builder {
    fn new(species: &[&str]) -> Self {
        Builder { species: species.iter().map(|s| s.to_string()).collect(), pairs: vec![], orders: vec![], rates: vec![] }
    }

    fn complex(&self, terms: &[(i64, &str)]) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.species.len()];
        for (c, s) in terms {
            let j = self.species.iter().position(|x| x == s).expect("known species");
            v[j] += q(*c);
        }
        v
    }

    fn reaction(&mut self, label: &str, lhs: &[(i64, &str)], rhs: &[(i64, &str)], orders: &[(&str, KineticOrder)], rate: &str) {
        let y = self.complex(lhs);
        let yp = self.complex(rhs);
        let mut row = vec![KineticOrder::Value(Q::zero()); self.species.len()];
        for (s, o) in orders {
            let j = self.species.iter().position(|x| x == s).expect("known species");
            row[j] = o.clone();
        }
        self.pairs.push((label.to_string(), y, yp));
        self.orders.push(row);
        self.rates.push(RateConstant::symbol(rate));
    }

    fn mass(&mut self, label: &str, from: &str, to: &str, rate: &str) {
        self.reaction(label, &[(1, from)], &[(1, to)], &[(from, KineticOrder::Value(q(1)))], rate);
    }

    fn finish(self, name: &str, bindings: BTreeMap<String, Q>, assumptions: BTreeMap<String, SignAssumption>) -> Result<PowerLawKinetics> {
        let net = ReactionNetwork::from_pairs(self.species, self.pairs)?.with_name(name);
        PowerLawKinetics::new(net, self.orders, self.rates, bindings, assumptions)
    }
}

fn sym(s: &str) -> KineticOrder {
    KineticOrder::Symbol(s.to_string())
}

/// R1..R4 on the reversible land-atmosphere pair and the ocean exchange.
fn anderies_core(b: &mut Builder, translated: bool) {
    b.reaction("R1", &[(1, "A1"), (2, "A2")], &[(2, "A1"), (1, "A2")], &[("A1", sym("p1")), ("A2", sym("q1"))], "k1");
    if translated {
        b.reaction("R2", &[(2, "A1"), (1, "A2")], &[(1, "A1"), (2, "A2")], &[("A1", sym("p2")), ("A2", sym("q2"))], "k2");
    } else {
        b.reaction("R2", &[(1, "A1"), (1, "A2")], &[(2, "A2")], &[("A1", sym("p2")), ("A2", sym("q2"))], "k2");
    }
    b.mass("R3", "A2", "A3", "k3");
    b.mass("R4", "A3", "A2", "k4");
}

/// Emission A4 -> A2, shifted by the storage species when its leak share is nonzero.
fn emission(b: &mut Builder, spec: &CdrSpec, params: &ModelParams, bindings: &mut BTreeMap<String, Q>, assumptions: &mut BTreeMap<String, SignAssumption>) -> Result<()> {
    let store = spec.method.storage_species();
    let ep = EmissionParams { lambda: spec.lambda.clone(), mu: spec.mu.clone(), a4: q(1), ai: q(1) };
    if ep.leak().is_zero() {
        b.mass("R5", "A4", "A2", "k5");
        return Ok(());
    }
    let i = spec.method.storage_index();
    let (e, f) = (format!("e{i}"), format!("f{i}"));
    if let Some((a4, ai)) = &params.operating_point {
        let (ev, fv) = emission_power_law(&EmissionParams { a4: a4.clone(), ai: ai.clone(), ..ep })?;
        bindings.entry(e.clone()).or_insert(ev);
        bindings.entry(f.clone()).or_insert(fv);
    }
    assumptions.insert(e.clone(), SignAssumption::GtOne);
    assumptions.insert(f.clone(), SignAssumption::Neg);
    b.reaction("R5", &[(1, "A4"), (1, &store)], &[(1, "A2"), (1, &store)], &[("A4", sym(&e)), (&store, sym(&f))], "k5");
    Ok(())
}

/// Anderies core + emission + capture (source -> A_i) + storage (A_i -> A4).
pub fn rncdr_build(portfolio: &[CdrSpec], params: &ModelParams) -> Result<PowerLawKinetics> {
    if portfolio.len() != 1 {
        return Err(Error::UnsupportedPortfolioSize(portfolio.len()));
    }
    let spec = &portfolio[0];
    let unit = |v: &Q| *v >= Q::zero() && *v <= q(1);
    if !unit(&spec.lambda) || !unit(&spec.mu) {
        return Err(Error::InvalidParameter("lambda and mu must lie in [0, 1]".into()));
    }
    let store = spec.method.storage_species();
    let species = ["A1", "A2", "A3", "A4", store.as_str()];
    if !species[..4].contains(&spec.source.as_str()) {
        return Err(Error::InvalidParameter(format!("capture source {} is not one of A1..A4", spec.source)));
    }
    let mut b = Builder::new(&species);
    let mut bindings = params.resolved()?;
    let mut assumptions = BTreeMap::new();
    anderies_core(&mut b, true);
    emission(&mut b, spec, params, &mut bindings, &mut assumptions)?;
    let i = spec.method.storage_index();
    b.mass(&format!("R{i}_6"), &spec.source, &store, "k6");
    b.mass(&format!("R{i}_7"), &store, "A4", "k7");
    b.finish(&spec.method.code().to_lowercase(), bindings, assumptions)
}

pub fn build_model(name: &str, params: &ModelParams) -> Result<PowerLawKinetics> {
    let bindings = params.resolved()?;
    match name {
        "anderies_raw" | "anderies" => {
            let mut b = Builder::new(&["A1", "A2", "A3"]);
            anderies_core(&mut b, name == "anderies");
            b.finish(name, bindings, BTreeMap::new())
        }
        "beccs" => {
            let mut b = Builder::new(&["A1", "A2", "A3", "A4", "A8"]);
            anderies_core(&mut b, true);
            b.mass("R5", "A4", "A2", "k5");
            b.mass("R8_6", "A1", "A8", "k6");
            b.mass("R8_7", "A8", "A4", "k7");
            b.finish(name, bindings, BTreeMap::new())
        }
        "ar" => {
            let mut b = Builder::new(&["A1", "A2", "A3", "A4", "A15"]);
            anderies_core(&mut b, true);
            let mut bindings = bindings;
            if let Some((a4, ai)) = &params.operating_point {
                let (e, f) = emission_power_law(&EmissionParams { lambda: qf(1, 2), mu: q(0), a4: a4.clone(), ai: ai.clone() })?;
                bindings.entry("e15".into()).or_insert(e);
                bindings.entry("f15".into()).or_insert(f);
            }
            b.reaction("R5", &[(1, "A4"), (1, "A15")], &[(1, "A2"), (1, "A15")], &[("A4", sym("e15")), ("A15", sym("f15"))], "k5");
            b.mass("R15_6", "A1", "A15", "k6");
            b.mass("R15_7", "A15", "A4", "k7");
            let assumptions = [("e15".to_string(), SignAssumption::GtOne), ("f15".to_string(), SignAssumption::Neg)].into();
            b.finish(name, bindings, assumptions)
        }
        "dac" => {
            let mut b = Builder::new(&["A1", "A2", "A3", "A4", "A9"]);
            anderies_core(&mut b, true);
            b.mass("R5", "A4", "A2", "k5");
            b.mass("R9_6", "A2", "A9", "k6");
            b.mass("R9_7", "A9", "A4", "k7");
            b.finish(name, bindings, BTreeMap::new())
        }
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

/// Remarks printed under a model's report.
pub fn model_notes(name: &str) -> Vec<&'static str> {
    match name {
        "beccs" => vec![
            "sl = 5 counts {A1+2A2, 2A1+A2}, {A2, A3} and the singletons A1, A4, A8; the value 1 sometimes quoted for this network is not a strong-class count.",
        ],
        "dac" => vec![
            "Capture A2 -> A9 uses k6, storage A9 -> A4 uses k7 and emission uses k5; at equilibrium A9 = (k6/k7) A2 and A4 = (k6/k5) A2.",
        ],
        "anderies_raw" => vec!["Untranslated form: 6 complexes in 3 linkage classes, deficiency 1."],
        _ => vec![],
    }
}
