//! Canonical JSON form of a [`NetworkDocument`]. Rationals are "p/q" strings and
//! object keys come out sorted, so equal documents serialize to equal bytes.

use super::{ComplexTerms, NetworkDocument, RateSpec, ReactionStatement};
use crate::error::{Error, Result};
use crate::kinetics::{KineticOrder, RateConstant, SignAssumption};
use crate::rational::{format_rational, parse_rational, Q};
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};
use std::collections::BTreeSet;

fn complex_value(terms: &ComplexTerms) -> Value {
    Value::Object(terms.iter().map(|(s, c)| (s.clone(), Value::String(format_rational(c)))).collect())
}

pub fn to_json_value(doc: &NetworkDocument) -> Value {
    let reactions: Vec<Value> = doc
        .reactions
        .iter()
        .map(|r| {
            let k = &r.rate.constant;
            let mut rate = Map::new();
            match &k.symbol {
                Some(s) => {
                    rate.insert("constant".into(), Value::String(s.clone()));
                    if !k.scale.is_one() {
                        rate.insert("scale".into(), Value::String(format_rational(&k.scale)));
                    }
                }
                None => {
                    rate.insert("constant".into(), Value::String(format_rational(&k.scale)));
                }
            }
            let orders: Map<String, Value> = r.rate.orders.iter().map(|(s, o)| (s.clone(), Value::String(o.to_string()))).collect();
            rate.insert("orders".into(), Value::Object(orders));
            json!({
                "label": r.label,
                "reactant": complex_value(&r.reactant),
                "product": complex_value(&r.product),
                "rate": Value::Object(rate),
            })
        })
        .collect();
    json!({
        "name": doc.name,
        "species": doc.species,
        "assumptions": doc.assumptions.iter().map(|(s, a)| json!({"symbol": s, "sign": a.as_str()})).collect::<Vec<_>>(),
        "constants": doc.constants.iter().map(|(s, v)| (s.clone(), Value::String(format_rational(v)))).collect::<Map<_, _>>(),
        "reactions": reactions,
    })
}

pub fn to_json(doc: &NetworkDocument) -> String {
    serde_json::to_string_pretty(&to_json_value(doc)).expect("JSON values always serialize")
}

fn err(pointer: &str, message: impl Into<String>) -> Error {
    Error::Schema { pointer: pointer.to_string(), message: message.into() }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(&format!("{at}/{key}"), "missing"))
}

fn object<'a>(v: &'a Value, at: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(at, "expected an object"))
}

fn string<'a>(v: &'a Value, at: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| err(at, "expected a string"))
}

/// Accepts "p/q" or decimal strings and plain JSON numbers.
fn rational(v: &Value, at: &str) -> Result<Q> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(err(at, "expected a rational")),
    };
    parse_rational(&text).ok_or_else(|| err(at, format!("'{text}' is not a rational")))
}

fn is_symbol(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_') && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn complex(v: &Value, at: &str, species: &[String]) -> Result<ComplexTerms> {
    let obj = object(v, at)?;
    let mut dense = vec![Q::zero(); species.len()];
    for (s, c) in obj {
        let p = format!("{at}/{}", escape(s));
        let j = species.iter().position(|x| x == s).ok_or_else(|| err(&p, format!("unknown species {s}")))?;
        let c = rational(c, &p)?;
        if c < Q::zero() {
            return Err(err(&p, "negative coefficient"));
        }
        dense[j] = c;
    }
    Ok(species.iter().zip(dense).filter(|(_, c)| !c.is_zero()).map(|(s, c)| (s.clone(), c)).collect())
}

pub fn from_json_value(v: &Value) -> Result<NetworkDocument> {
    let root = object(v, "")?;
    let name = string(field(root, "name", "")?, "/name")?.to_string();
    let mut species = Vec::new();
    let list = field(root, "species", "")?.as_array().ok_or_else(|| err("/species", "expected an array"))?;
    for (i, s) in list.iter().enumerate() {
        let at = format!("/species/{i}");
        let s = string(s, &at)?;
        if !is_symbol(s) {
            return Err(err(&at, format!("'{s}' is not a valid name")));
        }
        if species.iter().any(|x| x == s) {
            return Err(err(&at, format!("duplicate species {s}")));
        }
        species.push(s.to_string());
    }
    let mut doc = NetworkDocument { name, species, ..Default::default() };
    if let Some(a) = root.get("assumptions") {
        let arr = a.as_array().ok_or_else(|| err("/assumptions", "expected an array"))?;
        for (i, entry) in arr.iter().enumerate() {
            let at = format!("/assumptions/{i}");
            let obj = object(entry, &at)?;
            let sym = string(field(obj, "symbol", &at)?, &format!("{at}/symbol"))?;
            let sign_text = string(field(obj, "sign", &at)?, &format!("{at}/sign"))?;
            let sign = SignAssumption::parse(sign_text).ok_or_else(|| err(&format!("{at}/sign"), format!("unknown sign '{sign_text}'")))?;
            if doc.assumptions.insert(sym.to_string(), sign).is_some() {
                return Err(err(&at, format!("assumption on {sym} given twice")));
            }
        }
    }
    if let Some(c) = root.get("constants") {
        for (sym, val) in object(c, "/constants")? {
            let at = format!("/constants/{}", escape(sym));
            if !is_symbol(sym) {
                return Err(err(&at, format!("'{sym}' is not a valid name")));
            }
            let v = rational(val, &at)?;
            if let Some(a) = doc.assumptions.get(sym) {
                if !a.admits(&v) {
                    return Err(err(&at, format!("value violates {sym} {a}")));
                }
            }
            doc.constants.insert(sym.clone(), v);
        }
    }
    let arr = field(root, "reactions", "")?.as_array().ok_or_else(|| err("/reactions", "expected an array"))?;
    let mut labels = BTreeSet::new();
    for (i, entry) in arr.iter().enumerate() {
        let at = format!("/reactions/{i}");
        let obj = object(entry, &at)?;
        let label = string(field(obj, "label", &at)?, &format!("{at}/label"))?.to_string();
        if !labels.insert(label.clone()) {
            return Err(err(&format!("{at}/label"), format!("duplicate label {label}")));
        }
        let reactant = complex(field(obj, "reactant", &at)?, &format!("{at}/reactant"), &doc.species)?;
        let product = complex(field(obj, "product", &at)?, &format!("{at}/product"), &doc.species)?;
        if reactant == product {
            return Err(err(&at, "identical reactant and product"));
        }
        let rat = format!("{at}/rate");
        let rate = object(field(obj, "rate", &at)?, &rat)?;
        let ctext = string(field(rate, "constant", &rat)?, &format!("{rat}/constant"))?;
        let mut constant = match parse_rational(ctext) {
            Some(v) => RateConstant::value(v),
            None if is_symbol(ctext) => RateConstant::symbol(ctext),
            None => return Err(err(&format!("{rat}/constant"), format!("'{ctext}' is neither a symbol nor a rational"))),
        };
        if let Some(s) = rate.get("scale") {
            if constant.symbol.is_none() {
                return Err(err(&format!("{rat}/scale"), "scale needs a symbolic constant"));
            }
            constant.scale = rational(s, &format!("{rat}/scale"))?;
        }
        let mut orders: Vec<(usize, String, KineticOrder)> = Vec::new();
        if let Some(o) = rate.get("orders") {
            for (s, val) in object(o, &format!("{rat}/orders"))? {
                let p = format!("{rat}/orders/{}", escape(s));
                let j = doc.species.iter().position(|x| x == s).ok_or_else(|| err(&p, format!("unknown species {s}")))?;
                let order = match val {
                    Value::String(t) if is_symbol(t) => KineticOrder::Symbol(t.clone()),
                    other => KineticOrder::Value(rational(other, &p)?),
                };
                if order.is_zero() {
                    continue;
                }
                if !reactant.iter().any(|(x, _)| x == s) {
                    return Err(err(&p, format!("{s} is not a reactant")));
                }
                orders.push((j, s.clone(), order));
            }
        }
        orders.sort_by_key(|o| o.0);
        let rate = RateSpec { constant, orders: orders.into_iter().map(|(_, s, o)| (s, o)).collect() };
        doc.reactions.push(ReactionStatement { label, reactant, product, rate });
    }
    Ok(doc)
}

pub fn from_json(text: &str) -> Result<NetworkDocument> {
    let v: Value = serde_json::from_str(text).map_err(|e| err("", format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column())))?;
    from_json_value(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse;

    #[test]
    fn decimal_order_normalizes() {
        let doc = parse("reaction R: A -> B rate k * A^0.5").unwrap();
        let text = to_json(&doc);
        assert!(text.contains("\"A\": \"1/2\""), "{text}");
        assert_eq!(from_json(&text).unwrap(), doc);
    }

    #[test]
    fn missing_rate_points_at_reaction() {
        let text = r#"{"name":"x","species":["A","B"],"reactions":[{"label":"R","reactant":{"A":"1"},"product":{"B":"1"}}]}"#;
        match from_json(text).unwrap_err() {
            Error::Schema { pointer, .. } => assert_eq!(pointer, "/reactions/0/rate"),
            other => panic!("{other:?}"),
        }
    }
}
