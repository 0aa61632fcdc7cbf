//! Determinant test for injectivity of power-law systems.
//!
//! M = N diag(z) F diag(k) with one `z` symbol per reaction and one `k` symbol per
//! species; the last d rows are replaced by a basis of the left kernel of N.

use crate::error::{Error, Result};
use crate::kinetics::{is_pl_rdk, KineticOrder, PowerLawKinetics, SignAssumption};
use crate::linalg::{nullspace, transpose};
use crate::poly::{determinant as poly_det, format_monomial, Monomial, SparsePolynomial};
use crate::rational::{format_rational, Q};
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

pub fn k_symbol(j: usize) -> String {
    format!("k{}", j + 1)
}

pub fn z_symbol(r: usize) -> String {
    format!("z{}", r + 1)
}

/// The k and z symbols used for a network of the given size.
pub fn positive_symbols(m: usize, r: usize) -> BTreeSet<String> {
    (0..m).map(k_symbol).chain((0..r).map(z_symbol)).collect()
}

pub fn build_m(kin: &PowerLawKinetics) -> Result<Vec<Vec<SparsePolynomial>>> {
    let net = kin.network();
    let (m, r) = (net.m(), net.r());
    let pos = positive_symbols(m, r);
    if let Some(s) = kin.free_order_symbols().iter().find(|s| pos.contains(*s)) {
        return Err(Error::InvalidKinetics(format!("kinetic-order symbol {s} clashes with a determinant variable")));
    }
    let n = net.stoichiometric_matrix();
    let f = kin.orders();
    let order = |o: &KineticOrder| match o {
        KineticOrder::Value(v) => SparsePolynomial::constant(v.clone()),
        KineticOrder::Symbol(s) => SparsePolynomial::var(s),
    };
    let mut out = vec![vec![SparsePolynomial::zero(); m]; m];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let kj = SparsePolynomial::var(&k_symbol(j));
            for rr in 0..r {
                if n[i][rr].is_zero() || f[rr][j].is_zero() {
                    continue;
                }
                let zr = SparsePolynomial::var(&z_symbol(rr));
                let t = &(&(&zr * &order(&f[rr][j])) * &kj).scale(&n[i][rr]);
                *cell = &*cell + t;
            }
        }
    }
    Ok(out)
}

pub fn build_m_star(kin: &PowerLawKinetics) -> Result<Vec<Vec<SparsePolynomial>>> {
    if !is_pl_rdk(kin) {
        // surfaces the offending reaction pair
        crate::kinetics::t_matrix(kin)?;
    }
    let net = kin.network();
    let m = net.m();
    let mut mat = build_m(kin)?;
    let left = nullspace(&transpose(&net.stoichiometric_matrix(), net.r()), m);
    let d = left.len();
    for (j, w) in left.iter().enumerate() {
        mat[m - d + j] = w.iter().map(|c| SparsePolynomial::constant(c.clone())).collect();
    }
    Ok(mat)
}

pub fn determinant(mstar: &[Vec<SparsePolynomial>]) -> Result<SparsePolynomial> {
    poly_det(mstar)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TermSign {
    Positive,
    Negative,
    NonNeg,
    NonPos,
    Zero,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Injective,
    NotInjective,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermReport {
    pub monomial: String,
    pub coefficient: String,
    pub sign: TermSign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityVerdict {
    pub verdict: Verdict,
    /// Terms that break the verdict (or are unresolved); empty when injective.
    pub terms: Vec<TermReport>,
}

/// Sign of one term given that `positive` symbols are > 0 and the rest follow `assumptions`.
pub fn term_sign(m: &Monomial, c: &Q, positive: &BTreeSet<String>, assumptions: &BTreeMap<String, SignAssumption>) -> TermSign {
    if c.is_zero() {
        return TermSign::Zero;
    }
    let mut negative = c.is_negative();
    let mut weak = false;
    for (s, e) in m {
        if positive.contains(s) {
            continue;
        }
        match assumptions.get(s) {
            None => return TermSign::Unknown,
            Some(SignAssumption::Zero) => return TermSign::Zero,
            Some(SignAssumption::Pos) | Some(SignAssumption::GtOne) => {}
            Some(SignAssumption::Neg) => negative ^= e % 2 == 1,
            Some(SignAssumption::NonNeg) => weak = true,
        }
    }
    match (negative, weak) {
        (false, false) => TermSign::Positive,
        (true, false) => TermSign::Negative,
        (false, true) => TermSign::NonNeg,
        (true, true) => TermSign::NonPos,
    }
}

/// All nonzero terms must share one sign (at least one of them strictly); any term
/// whose sign cannot be resolved makes the answer indeterminate.
pub fn injectivity_verdict(
    det: &SparsePolynomial,
    positive: &BTreeSet<String>,
    assumptions: &BTreeMap<String, SignAssumption>,
) -> InjectivityVerdict {
    let report = |m: &Monomial, c: &Q, s: TermSign| TermReport { monomial: format_monomial(m), coefficient: format_rational(c), sign: s };
    let signed: Vec<(&Monomial, &Q, TermSign)> = det.terms().map(|(m, c)| (m, c, term_sign(m, c, positive, assumptions))).collect();
    let unknown: Vec<TermReport> = signed.iter().filter(|t| t.2 == TermSign::Unknown).map(|t| report(t.0, t.1, t.2)).collect();
    if !unknown.is_empty() {
        return InjectivityVerdict { verdict: Verdict::Indeterminate, terms: unknown };
    }
    let count = |s: TermSign| signed.iter().filter(|t| t.2 == s).count();
    let (pos, neg) = (count(TermSign::Positive), count(TermSign::Negative));
    let (nn, np) = (count(TermSign::NonNeg), count(TermSign::NonPos));
    if pos == 0 && neg == 0 {
        let verdict = if nn + np == 0 { Verdict::NotInjective } else { Verdict::Indeterminate };
        let terms = signed.iter().filter(|t| t.2 != TermSign::Zero).map(|t| report(t.0, t.1, t.2)).collect();
        return InjectivityVerdict { verdict, terms };
    }
    // the minority sign (ties: the negative side) is reported as offending
    let majority_positive = pos + nn >= neg + np && pos > 0;
    let offending: Vec<TermReport> = signed
        .iter()
        .filter(|t| match t.2 {
            TermSign::Negative | TermSign::NonPos => majority_positive,
            TermSign::Positive | TermSign::NonNeg => !majority_positive,
            _ => false,
        })
        .map(|t| report(t.0, t.1, t.2))
        .collect();
    if offending.is_empty() {
        InjectivityVerdict { verdict: Verdict::Injective, terms: Vec::new() }
    } else {
        InjectivityVerdict { verdict: Verdict::NotInjective, terms: offending }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectivityAnalysis {
    pub determinant: String,
    pub num_terms: usize,
    pub verdict: InjectivityVerdict,
}

/// M*, its determinant and the verdict under the kinetics' own sign assumptions.
pub fn analyze(kin: &PowerLawKinetics) -> Result<(SparsePolynomial, InjectivityVerdict)> {
    let det = determinant(&build_m_star(kin)?)?;
    let pos = positive_symbols(kin.network().m(), kin.network().r());
    let v = injectivity_verdict(&det, &pos, kin.assumptions());
    Ok((det, v))
}

pub fn summarize(kin: &PowerLawKinetics) -> Result<InjectivityAnalysis> {
    let (det, verdict) = analyze(kin)?;
    Ok(InjectivityAnalysis { determinant: det.to_string(), num_terms: det.num_terms(), verdict })
}
