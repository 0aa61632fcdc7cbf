//! Line-oriented reaction DSL.
//!
//! ```text
//! network "beccs"
//! species A1, A2
//! assume p1 < 0
//! const k1 = 0.5
//! reaction R1: A1 + 2 A2 -> 2 A1 + A2 rate k1 * A1^p1 * A2^1/2
//! ```

use super::{ComplexTerms, NetworkDocument, RateSpec, ReactionStatement};
use crate::error::{Error, Result};
use crate::kinetics::{KineticOrder, RateConstant, SignAssumption};
use crate::rational::{format_rational, parse_rational, Q};
use num_traits::{One, Zero};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(Q),
    Str(String),
    Punct(&'static str),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Number(v) => format!("number {}", format_rational(v)),
            Tok::Str(_) => "string".into(),
            Tok::Punct(p) => format!("'{p}'"),
        }
    }
}

const PUNCT: [&str; 13] = ["->", ">=", ":", "+", "*", "^", ",", "<", ">", "=", "(", ")", "-"];

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

fn lex(line_no: usize, text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((col, Tok::Ident(chars[start..i].iter().collect())));
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // p/q with digits right after the slash
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            } else if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '-' || chars[j] == '+') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v = parse_rational(&s).ok_or_else(|| syntax(line_no, col, format!("malformed number '{s}'")))?;
            out.push((col, Tok::Number(v)));
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err(syntax(line_no, col, "unterminated string")),
                    Some('"') => break,
                    Some('\\') => {
                        match chars.get(i + 1) {
                            Some(e @ ('"' | '\\')) => s.push(*e),
                            _ => return Err(syntax(line_no, i + 1, "unknown escape; expected one of '\\\"', '\\\\'")),
                        }
                        i += 2;
                    }
                    Some(ch) => {
                        s.push(*ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push((col, Tok::Str(s)));
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match PUNCT.iter().find(|p| rest.starts_with(**p)) {
            Some(p) => {
                i += p.len();
                out.push((col, Tok::Punct(p)));
            }
            None => return Err(syntax(line_no, col, format!("unexpected character '{c}'"))),
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    line: usize,
    toks: &'a [(usize, Tok)],
    pos: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.0)
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        let found = self.peek().map_or("end of line".to_string(), |t| t.describe());
        Err(syntax(self.line, self.col(), format!("expected one of {}, found {found}", expected.join(", "))))
    }

    fn punct(&mut self, p: &'static str) -> Result<()> {
        if self.peek() == Some(&Tok::Punct(p)) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&[&format!("'{p}'")])
        }
    }

    fn eat(&mut self, p: &'static str) -> bool {
        let hit = self.peek() == Some(&Tok::Punct(p));
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail(&[what]),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(&[&format!("'{kw}'")]),
        }
    }

    /// Optionally signed number.
    fn number(&mut self, what: &str) -> Result<Q> {
        let neg = self.eat("-");
        match self.peek() {
            Some(Tok::Number(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.fail(&[what]),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            self.fail(&["end of line"])
        } else {
            Ok(())
        }
    }
}

/// `0` or `[coeff] species (+ [coeff] species)*`.
fn complex(cur: &mut Cursor) -> Result<Vec<(String, Q)>> {
    if let Some(Tok::Number(v)) = cur.peek() {
        if v.is_zero() {
            cur.pos += 1;
            return Ok(Vec::new());
        }
    }
    let mut terms = Vec::new();
    loop {
        let coeff = match cur.peek() {
            Some(Tok::Number(v)) => {
                let v = v.clone();
                cur.pos += 1;
                v
            }
            Some(Tok::Ident(_)) => Q::one(),
            _ => return cur.fail(&["coefficient", "species"]),
        };
        let col = cur.col();
        let s = cur.ident("species")?;
        if coeff.is_zero() {
            return Err(syntax(cur.line, col, "zero coefficient"));
        }
        terms.push((s, coeff));
        if !cur.eat("+") {
            return Ok(terms);
        }
    }
}

enum Factor {
    Number(Q),
    Name(String, usize),
    Power(String, KineticOrder, usize),
}

fn factor(cur: &mut Cursor) -> Result<Factor> {
    match cur.peek() {
        Some(Tok::Number(_)) | Some(Tok::Punct("-")) => Ok(Factor::Number(cur.number("number")?)),
        Some(Tok::Ident(_)) => {
            let col = cur.col();
            let name = cur.ident("name")?;
            if !cur.eat("^") {
                return Ok(Factor::Name(name, col));
            }
            let paren = cur.eat("(");
            let order = match cur.peek() {
                Some(Tok::Ident(s)) => {
                    let s = s.clone();
                    cur.pos += 1;
                    KineticOrder::Symbol(s)
                }
                Some(Tok::Number(_)) | Some(Tok::Punct("-")) => KineticOrder::Value(cur.number("order")?),
                _ => return cur.fail(&["order"]),
            };
            if paren {
                cur.punct(")")?;
            }
            Ok(Factor::Power(name, order, col))
        }
        _ => cur.fail(&["rate constant", "number", "species"]),
    }
}

#[derive(Default)]
struct State {
    doc: NetworkDocument,
    named: bool,
    declared: BTreeSet<String>,
    labels: BTreeSet<String>,
    /// (line, reaction) before species ordering is final.
    raw: Vec<(usize, String, Vec<(String, Q)>, Vec<(String, Q)>, RateConstant, Vec<(String, KineticOrder, usize)>)>,
    const_lines: Vec<(String, usize)>,
}

fn declare(st: &mut State, s: &str) {
    if st.declared.insert(s.to_string()) {
        st.doc.species.push(s.to_string());
    }
}

fn statement(st: &mut State, cur: &mut Cursor) -> Result<()> {
    let line = cur.line;
    let kw_col = cur.col();
    let kw = cur.ident("'network', 'species', 'assume', 'const', 'reaction'")?;
    match kw.as_str() {
        "network" => {
            let name = match cur.peek() {
                Some(Tok::Str(s)) => s.clone(),
                _ => return cur.fail(&["quoted name"]),
            };
            cur.pos += 1;
            cur.finish()?;
            if st.named {
                return Err(Error::Semantic { line, message: "network name given twice".into() });
            }
            st.named = true;
            st.doc.name = name;
        }
        "species" => {
            loop {
                let s = cur.ident("species")?;
                if st.declared.contains(&s) {
                    return Err(Error::Semantic { line, message: format!("species {s} declared twice") });
                }
                declare(st, &s);
                if !cur.eat(",") {
                    break;
                }
            }
            cur.finish()?;
        }
        "assume" => {
            let sym = cur.ident("symbol")?;
            let op = match cur.peek() {
                Some(Tok::Punct(p @ ("<" | "=" | ">" | ">="))) => *p,
                _ => return cur.fail(&["'<'", "'='", "'>'", "'>='"]),
            };
            cur.pos += 1;
            let col = cur.col();
            let v = cur.number("0 or 1")?;
            cur.finish()?;
            let text = format!("{op}{}", format_rational(&v));
            let a = SignAssumption::parse(&text)
                .ok_or_else(|| syntax(line, col, format!("expected one of <0, =0, >0, >=0, >1, found {text}")))?;
            if st.doc.assumptions.insert(sym.clone(), a).is_some() {
                return Err(Error::Semantic { line, message: format!("assumption on {sym} given twice") });
            }
        }
        "const" => {
            let sym = cur.ident("symbol")?;
            cur.punct("=")?;
            let v = cur.number("rational or decimal")?;
            cur.finish()?;
            if st.doc.constants.insert(sym.clone(), v).is_some() {
                return Err(Error::Semantic { line, message: format!("constant {sym} bound twice") });
            }
            st.const_lines.push((sym, line));
        }
        "reaction" => {
            let label = cur.ident("reaction label")?;
            cur.punct(":")?;
            let y = complex(cur)?;
            cur.punct("->")?;
            let yp = complex(cur)?;
            cur.keyword("rate")?;
            let mut factors = vec![factor(cur)?];
            while cur.eat("*") {
                factors.push(factor(cur)?);
            }
            cur.finish()?;
            if !st.labels.insert(label.clone()) {
                return Err(Error::Semantic { line, message: format!("duplicate reaction label {label}") });
            }
            for (s, _) in y.iter().chain(&yp) {
                declare(st, s);
            }
            let mut scale = Q::one();
            let mut symbol: Option<String> = None;
            let mut saw_constant = false;
            let mut orders = Vec::new();
            for f in factors {
                match f {
                    Factor::Number(v) => {
                        scale *= v;
                        saw_constant = true;
                    }
                    Factor::Name(n, col) if st.declared.contains(&n) => orders.push((n, KineticOrder::Value(Q::one()), col)),
                    Factor::Name(n, _) => {
                        if let Some(prev) = &symbol {
                            return Err(Error::Semantic { line, message: format!("rate has two constants, {prev} and {n}") });
                        }
                        symbol = Some(n);
                        saw_constant = true;
                    }
                    Factor::Power(n, o, col) => {
                        if !st.declared.contains(&n) {
                            return Err(Error::Semantic { line, message: format!("{n} (column {col}) is not a species") });
                        }
                        orders.push((n, o, col));
                    }
                }
            }
            if !saw_constant {
                return Err(Error::Semantic { line, message: format!("reaction {label} has no rate constant") });
            }
            st.raw.push((line, label, y, yp, RateConstant { symbol, scale }, orders));
        }
        other => {
            return Err(syntax(line, kw_col, format!("expected one of 'network', 'species', 'assume', 'const', 'reaction', found '{other}'")));
        }
    }
    Ok(())
}

fn ordered(species: &[String], terms: Vec<(String, Q)>) -> ComplexTerms {
    let mut v = vec![Q::zero(); species.len()];
    for (s, c) in terms {
        let j = species.iter().position(|x| *x == s).expect("declared");
        v[j] += c;
    }
    species.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(s, c)| (s.clone(), c)).collect()
}

pub fn parse(text: &str) -> Result<NetworkDocument> {
    let mut st = State::default();
    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let toks = lex(line, raw_line)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor { line, toks: &toks, pos: 0, end_col: raw_line.chars().count() + 1 };
        statement(&mut st, &mut cur)?;
    }
    let State { mut doc, raw, const_lines, .. } = st;
    for (sym, line) in const_lines {
        if doc.species.contains(&sym) {
            return Err(Error::Semantic { line, message: format!("{sym} is a species and cannot be bound") });
        }
        if let Some(a) = doc.assumptions.get(&sym) {
            if !a.admits(&doc.constants[&sym]) {
                return Err(Error::Semantic { line, message: format!("{sym} = {} violates {sym} {a}", format_rational(&doc.constants[&sym])) });
            }
        }
    }
    for (line, label, y, yp, constant, orders) in raw {
        let reactant = ordered(&doc.species, y);
        let product = ordered(&doc.species, yp);
        if reactant == product {
            return Err(Error::Semantic { line, message: format!("reaction {label} has identical reactant and product") });
        }
        let mut seen = BTreeSet::new();
        let mut pairs: Vec<(usize, String, KineticOrder)> = Vec::new();
        for (s, o, col) in orders {
            if !seen.insert(s.clone()) {
                return Err(Error::Semantic { line, message: format!("species {s} (column {col}) has two kinetic orders") });
            }
            if !reactant.iter().any(|(x, _)| *x == s) && !o.is_zero() {
                return Err(Error::Semantic { line, message: format!("species {s} (column {col}) has a kinetic order but is not a reactant") });
            }
            if !o.is_zero() {
                let j = doc.species.iter().position(|x| *x == s).expect("declared");
                pairs.push((j, s, o));
            }
        }
        pairs.sort_by_key(|p| p.0);
        let rate = RateSpec { constant, orders: pairs.into_iter().map(|(_, s, o)| (s, o)).collect() };
        doc.reactions.push(ReactionStatement { label, reactant, product, rate });
    }
    Ok(doc)
}

fn complex_text(terms: &ComplexTerms) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(s, c)| if c.is_one() { s.clone() } else { format!("{} {s}", format_rational(c)) })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Canonical text: name, species, assumptions and constants sorted by symbol, then reactions.
pub fn serialize(doc: &NetworkDocument) -> String {
    let mut out = String::new();
    out.push_str(&format!("network {}\n", quote(&doc.name)));
    if !doc.species.is_empty() {
        out.push_str(&format!("species {}\n", doc.species.join(", ")));
    }
    for (s, a) in &doc.assumptions {
        let text = a.as_str();
        let split = text.find(|c: char| c.is_ascii_digit()).unwrap_or(text.len());
        out.push_str(&format!("assume {s} {} {}\n", &text[..split], &text[split..]));
    }
    for (s, v) in &doc.constants {
        out.push_str(&format!("const {s} = {}\n", format_rational(v)));
    }
    for r in &doc.reactions {
        let mut factors = Vec::new();
        let k = &r.rate.constant;
        match &k.symbol {
            Some(s) if k.scale.is_one() => factors.push(s.clone()),
            Some(s) => {
                factors.push(format_rational(&k.scale));
                factors.push(s.clone());
            }
            None => factors.push(format_rational(&k.scale)),
        }
        for (s, o) in &r.rate.orders {
            factors.push(match o {
                KineticOrder::Value(v) => format!("{s}^{}", format_rational(v)),
                KineticOrder::Symbol(p) => format!("{s}^{p}"),
            });
        }
        out.push_str(&format!(
            "reaction {}: {} -> {} rate {}\n",
            r.label,
            complex_text(&r.reactant),
            complex_text(&r.product),
            factors.join(" * ")
        ));
    }
    out
}
