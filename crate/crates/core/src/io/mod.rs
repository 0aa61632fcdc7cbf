//! Network documents: the text DSL, canonical JSON and conversion to kinetics.

mod dsl;
mod json;

pub use dsl::{parse, serialize};
pub use json::{from_json, from_json_value, to_json, to_json_value};

use crate::error::Result;
use crate::kinetics::{KineticOrder, PowerLawKinetics, RateConstant, SignAssumption};
use crate::network::ReactionNetwork;
use crate::rational::Q;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Complex as (species, coefficient) pairs in species order, zero entries dropped.
pub type ComplexTerms = Vec<(String, Q)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateSpec {
    pub constant: RateConstant,
    /// Non-zero kinetic orders in species order.
    pub orders: Vec<(String, KineticOrder)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReactionStatement {
    pub label: String,
    pub reactant: ComplexTerms,
    pub product: ComplexTerms,
    pub rate: RateSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NetworkDocument {
    pub name: String,
    pub species: Vec<String>,
    pub assumptions: BTreeMap<String, SignAssumption>,
    pub constants: BTreeMap<String, Q>,
    pub reactions: Vec<ReactionStatement>,
}

fn dense(species: &[String], terms: &ComplexTerms) -> Vec<Q> {
    let mut v = vec![Q::zero(); species.len()];
    for (s, c) in terms {
        if let Some(j) = species.iter().position(|x| x == s) {
            v[j] += c;
        }
    }
    v
}

fn sparse(species: &[String], v: &[Q]) -> ComplexTerms {
    species.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(s, c)| (s.clone(), c.clone())).collect()
}

impl NetworkDocument {
    pub fn to_kinetics(&self) -> Result<PowerLawKinetics> {
        let sp = &self.species;
        let pairs = self.reactions.iter().map(|r| (r.label.clone(), dense(sp, &r.reactant), dense(sp, &r.product))).collect();
        let net = ReactionNetwork::from_pairs(sp.clone(), pairs)?.with_name(self.name.clone());
        let orders = self
            .reactions
            .iter()
            .map(|r| {
                let mut row = vec![KineticOrder::Value(Q::zero()); sp.len()];
                for (s, o) in &r.rate.orders {
                    if let Some(j) = sp.iter().position(|x| x == s) {
                        row[j] = o.clone();
                    }
                }
                row
            })
            .collect();
        let rates = self.reactions.iter().map(|r| r.rate.constant.clone()).collect();
        PowerLawKinetics::new(net, orders, rates, self.constants.clone(), self.assumptions.clone())
    }

    pub fn from_kinetics(kin: &PowerLawKinetics) -> Self {
        let net = kin.network();
        let sp = net.species();
        let reactions = net
            .reactions()
            .iter()
            .zip(kin.raw_orders())
            .zip(kin.rates())
            .map(|((r, row), k)| ReactionStatement {
                label: r.label.clone(),
                reactant: sparse(sp, &net.complexes()[r.reactant]),
                product: sparse(sp, &net.complexes()[r.product]),
                rate: RateSpec {
                    constant: k.clone(),
                    orders: sp.iter().zip(row).filter(|(_, o)| !o.is_zero()).map(|(s, o)| (s.clone(), o.clone())).collect(),
                },
            })
            .collect();
        NetworkDocument {
            name: net.name().to_string(),
            species: sp.to_vec(),
            assumptions: kin.assumptions().clone(),
            constants: kin.bindings().clone(),
            reactions,
        }
    }
}

/// Parses DSL text straight into kinetics.
pub fn load_kinetics(text: &str) -> Result<PowerLawKinetics> {
    parse(text)?.to_kinetics()
}
