//! Power-law kinetics: kinetic orders, rate constants, T-matrix and rate evaluation.

use crate::error::{Error, Result};
use crate::network::ReactionNetwork;
use crate::rational::{format_rational, to_f64, Q};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SignAssumption {
    Neg,
    Zero,
    Pos,
    NonNeg,
    GtOne,
}

impl SignAssumption {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "<0" => SignAssumption::Neg,
            "=0" => SignAssumption::Zero,
            ">0" => SignAssumption::Pos,
            ">=0" => SignAssumption::NonNeg,
            ">1" => SignAssumption::GtOne,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SignAssumption::Neg => "<0",
            SignAssumption::Zero => "=0",
            SignAssumption::Pos => ">0",
            SignAssumption::NonNeg => ">=0",
            SignAssumption::GtOne => ">1",
        }
    }

    pub fn admits(self, v: &Q) -> bool {
        match self {
            SignAssumption::Neg => v.is_negative(),
            SignAssumption::Zero => v.is_zero(),
            SignAssumption::Pos => v.is_positive(),
            SignAssumption::NonNeg => !v.is_negative(),
            SignAssumption::GtOne => *v > Q::one(),
        }
    }
}

impl fmt::Display for SignAssumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KineticOrder {
    Value(Q),
    Symbol(String),
}

impl KineticOrder {
    pub fn is_zero(&self) -> bool {
        matches!(self, KineticOrder::Value(v) if v.is_zero())
    }

    pub fn value(&self) -> Option<&Q> {
        match self {
            KineticOrder::Value(v) => Some(v),
            KineticOrder::Symbol(_) => None,
        }
    }
}

impl fmt::Display for KineticOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KineticOrder::Value(v) => f.write_str(&format_rational(v)),
            KineticOrder::Symbol(s) => f.write_str(s),
        }
    }
}

impl From<Q> for KineticOrder {
    fn from(v: Q) -> Self {
        KineticOrder::Value(v)
    }
}

impl From<&str> for KineticOrder {
    fn from(s: &str) -> Self {
        KineticOrder::Symbol(s.to_string())
    }
}

/// `scale * symbol`, or just `scale` when there is no symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateConstant {
    pub symbol: Option<String>,
    pub scale: Q,
}

impl RateConstant {
    pub fn symbol(s: impl Into<String>) -> Self {
        RateConstant { symbol: Some(s.into()), scale: Q::one() }
    }
    pub fn value(v: Q) -> Self {
        RateConstant { symbol: None, scale: v }
    }
}

impl fmt::Display for RateConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.symbol, self.scale.is_one()) {
            (Some(s), true) => f.write_str(s),
            (Some(s), false) => write!(f, "{} {s}", format_rational(&self.scale)),
            (None, _) => f.write_str(&format_rational(&self.scale)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawKinetics {
    network: ReactionNetwork,
    orders: Vec<Vec<KineticOrder>>,
    rates: Vec<RateConstant>,
    bindings: BTreeMap<String, Q>,
    assumptions: BTreeMap<String, SignAssumption>,
}

impl PowerLawKinetics {
    pub fn new(
        network: ReactionNetwork,
        orders: Vec<Vec<KineticOrder>>,
        rates: Vec<RateConstant>,
        bindings: BTreeMap<String, Q>,
        assumptions: BTreeMap<String, SignAssumption>,
    ) -> Result<Self> {
        let (m, r) = (network.m(), network.r());
        if orders.len() != r || rates.len() != r {
            return Err(Error::InvalidKinetics(format!("expected {r} kinetic-order rows and rate constants")));
        }
        for (i, row) in orders.iter().enumerate() {
            let label = &network.reactions()[i].label;
            if row.len() != m {
                return Err(Error::InvalidKinetics(format!("reaction {label}: expected {m} kinetic orders")));
            }
            let reactant = &network.complexes()[network.reactions()[i].reactant];
            for (j, o) in row.iter().enumerate() {
                if !o.is_zero() && reactant[j].is_zero() {
                    return Err(Error::InvalidKinetics(format!(
                        "reaction {label}: species {} has a kinetic order but is not in the reactant complex",
                        network.species()[j]
                    )));
                }
            }
            if rates[i].scale.is_negative() || rates[i].scale.is_zero() {
                return Err(Error::InvalidKinetics(format!("reaction {label}: rate constant must be positive")));
            }
        }
        for (sym, a) in &assumptions {
            if let Some(v) = bindings.get(sym) {
                if !a.admits(v) {
                    return Err(Error::InvalidKinetics(format!(
                        "{sym} = {} violates the assumption {sym} {a}",
                        format_rational(v)
                    )));
                }
            }
        }
        let kin = PowerLawKinetics { network, orders, rates, bindings, assumptions };
        for rc in &kin.rates {
            if let Some(s) = &rc.symbol {
                if let Some(v) = kin.bindings.get(s) {
                    if !v.is_positive() {
                        return Err(Error::InvalidKinetics(format!("rate constant {s} must be positive")));
                    }
                }
            }
        }
        Ok(kin)
    }

    /// Mass-action kinetics with the given numeric rate constants.
    pub fn mass_action(network: ReactionNetwork, rates: Vec<Q>) -> Result<Self> {
        let orders = network
            .reactions()
            .iter()
            .map(|r| network.complexes()[r.reactant].iter().cloned().map(KineticOrder::Value).collect())
            .collect();
        let rates = rates.into_iter().map(RateConstant::value).collect();
        PowerLawKinetics::new(network, orders, rates, BTreeMap::new(), BTreeMap::new())
    }

    pub fn network(&self) -> &ReactionNetwork {
        &self.network
    }
    pub fn raw_orders(&self) -> &[Vec<KineticOrder>] {
        &self.orders
    }
    pub fn rates(&self) -> &[RateConstant] {
        &self.rates
    }
    pub fn bindings(&self) -> &BTreeMap<String, Q> {
        &self.bindings
    }
    pub fn assumptions(&self) -> &BTreeMap<String, SignAssumption> {
        &self.assumptions
    }

    /// Copy with extra symbol values; later values win.
    pub fn with_bindings(&self, extra: &BTreeMap<String, Q>) -> Result<Self> {
        let mut b = self.bindings.clone();
        b.extend(extra.iter().map(|(k, v)| (k.clone(), v.clone())));
        PowerLawKinetics::new(self.network.clone(), self.orders.clone(), self.rates.clone(), b, self.assumptions.clone())
    }

    pub fn with_network(&self, network: ReactionNetwork, orders: Vec<Vec<KineticOrder>>, rates: Vec<RateConstant>) -> Result<Self> {
        PowerLawKinetics::new(network, orders, rates, self.bindings.clone(), self.assumptions.clone())
    }

    fn resolve(&self, o: &KineticOrder) -> KineticOrder {
        match o {
            KineticOrder::Symbol(s) => match self.bindings.get(s) {
                Some(v) => KineticOrder::Value(v.clone()),
                None => o.clone(),
            },
            v => v.clone(),
        }
    }

    /// Orders with bound symbols replaced by their values.
    pub fn orders(&self) -> Vec<Vec<KineticOrder>> {
        self.orders.iter().map(|row| row.iter().map(|o| self.resolve(o)).collect()).collect()
    }

    pub fn numeric_orders(&self) -> Result<Vec<Vec<Q>>> {
        self.orders()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|o| match o {
                        KineticOrder::Value(v) => Ok(v),
                        KineticOrder::Symbol(s) => Err(Error::NonNumeric(format!("kinetic order {s}"))),
                    })
                    .collect()
            })
            .collect()
    }

    pub fn numeric_rates(&self) -> Result<Vec<Q>> {
        self.rates
            .iter()
            .map(|rc| match &rc.symbol {
                None => Ok(rc.scale.clone()),
                Some(s) => self
                    .bindings
                    .get(s)
                    .map(|v| v * &rc.scale)
                    .ok_or_else(|| Error::NonNumeric(format!("rate constant {s}"))),
            })
            .collect()
    }

    /// Unbound symbols appearing in kinetic orders, sorted.
    pub fn free_order_symbols(&self) -> BTreeSet<String> {
        self.orders()
            .iter()
            .flatten()
            .filter_map(|o| match o {
                KineticOrder::Symbol(s) => Some(s.clone()),
                _ => None,
            })
            .collect()
    }

    /// Rate-constant symbols in reaction order, without repeats.
    pub fn rate_symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for rc in &self.rates {
            if let Some(s) = &rc.symbol {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
        }
        out
    }
}

/// Kinetic orders arranged per reactant complex (species by reactant complexes,
/// columns in [`ReactionNetwork::reactant_complexes`] order).
pub fn t_matrix(kin: &PowerLawKinetics) -> Result<Vec<Vec<KineticOrder>>> {
    let net = kin.network();
    let orders = kin.orders();
    let reactants = net.reactant_complexes();
    let mut cols: Vec<Option<(usize, &Vec<KineticOrder>)>> = vec![None; reactants.len()];
    for (i, r) in net.reactions().iter().enumerate() {
        let c = reactants.binary_search(&r.reactant).expect("reactant complex listed");
        match cols[c] {
            None => cols[c] = Some((i, &orders[i])),
            Some((first, row)) => {
                if *row != orders[i] {
                    return Err(Error::NotRdk(net.reactions()[first].label.clone(), r.label.clone()));
                }
            }
        }
    }
    let cols: Vec<&Vec<KineticOrder>> = cols.into_iter().map(|c| c.expect("every reactant has a reaction").1).collect();
    Ok((0..net.m()).map(|s| cols.iter().map(|c| c[s].clone()).collect()).collect())
}

pub fn is_pl_rdk(kin: &PowerLawKinetics) -> bool {
    t_matrix(kin).is_ok()
}

/// Reaction rates k_i x^{F_i} at a positive point.
pub fn rate_vector(kin: &PowerLawKinetics, x: &[f64]) -> Result<Vec<f64>> {
    let f = kin.numeric_orders()?;
    let k = kin.numeric_rates()?;
    if x.len() != kin.network().m() {
        return Err(Error::InvalidParameter(format!("state has {} entries, expected {}", x.len(), kin.network().m())));
    }
    if x.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidParameter("state must be strictly positive".into()));
    }
    Ok(f.iter()
        .zip(&k)
        .map(|(row, ki)| {
            row.iter().zip(x).fold(to_f64(ki), |acc, (o, xs)| if o.is_zero() { acc } else { acc * xs.powf(to_f64(o)) })
        })
        .collect())
}

/// Storage fractions of a removal method and the operating point of the emission approximation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmissionParams {
    pub lambda: Q,
    pub mu: Q,
    pub a4: Q,
    pub ai: Q,
}

impl EmissionParams {
    /// Share of the storage pool that leaks back, (1 - lambda) + mu lambda.
    pub fn leak(&self) -> Q {
        (Q::one() - &self.lambda) + &self.mu * &self.lambda
    }
}

/// Local power-law exponents (e, f) of k (A4 - c Ai) at the operating point.
pub fn emission_power_law(p: &EmissionParams) -> Result<(Q, Q)> {
    let unit = |v: &Q| !v.is_negative() && *v <= Q::one();
    if !unit(&p.lambda) || !unit(&p.mu) {
        return Err(Error::InvalidParameter("lambda and mu must lie in [0, 1]".into()));
    }
    if !p.a4.is_positive() || !p.ai.is_positive() {
        return Err(Error::InvalidParameter("operating point must be positive".into()));
    }
    let c = p.leak();
    let denom = &p.a4 - &c * &p.ai;
    if !denom.is_positive() {
        return Err(Error::DegenerateOperatingPoint(format_rational(&c)));
    }
    let e = &p.a4 / &denom;
    let f = -(&c * &p.ai) / &denom;
    Ok((e, f))
}

/// Fits alpha X1^p X2^q to V at (x1, x2) by log-space central differences.
pub fn power_law_approx_2var(v: impl Fn(f64, f64) -> f64, x1: f64, x2: f64) -> Result<(f64, f64, f64)> {
    let v0 = v(x1, x2);
    if !(v0 > 0.0) || !(x1 > 0.0) || !(x2 > 0.0) {
        return Err(Error::NonPositiveV);
    }
    let h: f64 = 1e-6;
    let lv = |a: f64, b: f64| -> Result<f64> {
        let y = v(a, b);
        if y > 0.0 {
            Ok(y.ln())
        } else {
            Err(Error::NonPositiveV)
        }
    };
    let p = (lv(x1 * h.exp(), x2)? - lv(x1 * (-h).exp(), x2)?) / (2.0 * h);
    let q = (lv(x1, x2 * h.exp())? - lv(x1, x2 * (-h).exp())?) / (2.0 * h);
    let alpha = v0 / (x1.powf(p) * x2.powf(q));
    Ok((alpha, p, q))
}

/// Species-by-reaction orders as f64; errors if symbolic.
pub fn numeric_f64_orders(kin: &PowerLawKinetics) -> Result<Vec<Vec<f64>>> {
    Ok(kin.numeric_orders()?.iter().map(|r| r.iter().map(to_f64).collect()).collect())
}

impl Serialize for KineticOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
