//! Deficiency-one algorithm for regular power-law systems with reactant-determined kinetics.
//!
//! Multistationarity is reduced to a search over confluence vectors h, upper/middle/lower
//! partitions of the reactant complexes, and linear relations on mu = ln x** - ln x*.

use crate::error::{Error, Result};
use crate::kinetics::{is_pl_rdk, t_matrix, KineticOrder, PowerLawKinetics};
use crate::linalg::{nullspace, SubspaceBasis};
use crate::lp::{realizable_sign_patterns, LinearSystem, Relation};
use crate::network::{cut_pairs, is_regular, network_numbers, stoichiometric_subspace, ReactionNetwork};
use crate::rational::{format_rational, from_f64, primitive, to_f64, Q};
use crate::sim::NumericSystem;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Conditions the algorithm needs; empty when it applies.
pub fn doa_applicability(kin: &PowerLawKinetics) -> Vec<String> {
    let net = kin.network();
    let nn = network_numbers(net);
    let mut v = Vec::new();
    if nn.delta != 1 {
        v.push(format!("deficiency {} != 1", nn.delta));
    }
    let reg = is_regular(net);
    if !reg.regular {
        v.push(format!("not regular: {}", reg.violation.unwrap_or_default()));
    }
    if !is_pl_rdk(kin) {
        v.push("kinetics are not reactant-determined".into());
    }
    if nn.t != nn.l {
        v.push(format!("t = {} != l = {}", nn.t, nn.l));
    }
    v
}

/// Terminal strong classes that are not a whole linkage class.
fn proper_terminal_classes(net: &ReactionNetwork) -> Vec<Vec<usize>> {
    net.terminal_classes()
        .into_iter()
        .filter(|c| net.linkage_classes()[net.linkage_class_of(c[0])].len() != c.len())
        .map(|c| c.to_vec())
        .collect()
}

fn sum_over(h: &[Q], idx: &[usize]) -> Q {
    idx.iter().fold(Q::zero(), |a, &i| a + &h[i])
}

/// Whether h meets the terminal-class positivity condition.
pub fn terminal_condition(net: &ReactionNetwork, h: &[Q], union_form: bool) -> bool {
    let classes = proper_terminal_classes(net);
    if classes.is_empty() {
        return false;
    }
    if union_form {
        let all: Vec<usize> = classes.concat();
        sum_over(h, &all).is_positive()
    } else {
        classes.iter().all(|c| sum_over(h, c).is_positive())
    }
}

/// Basis vectors (either sign) of {h : Y h = 0, per-linkage-class sums 0} that pass the terminal condition.
pub fn confluence_vectors(net: &ReactionNetwork, union_form: bool) -> Vec<Vec<Q>> {
    let n = net.n();
    let mut rows: Vec<Vec<Q>> = (0..net.m()).map(|s| net.complexes().iter().map(|c| c[s].clone()).collect()).collect();
    for lc in net.linkage_classes() {
        let mut row = vec![Q::zero(); n];
        for &c in lc {
            row[c] = Q::one();
        }
        rows.push(row);
    }
    let mut out = Vec::new();
    for v in nullspace(&rows, n) {
        let v = primitive(&v);
        for cand in [v.clone(), v.iter().map(|x| -x).collect::<Vec<Q>>()] {
            if terminal_condition(net, &cand, union_form) {
                out.push(cand);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Part {
    U,
    M,
    L,
}

impl Part {
    const ALL: [Part; 3] = [Part::U, Part::M, Part::L];
    fn rank(self) -> u8 {
        match self {
            Part::U => 2,
            Part::M => 1,
            Part::L => 0,
        }
    }
}

/// Signed edge flows nu_r = (g_{y(r)} - c) kappa_r must form a circulation; checks that
/// a circulation with the sign pattern the (partial) partition imposes exists.
fn circulation_feasible(net: &ReactionNetwork, part_of: &[Option<Part>]) -> bool {
    let r = net.r();
    let mut lp = LinearSystem::new(r);
    for c in 0..net.n() {
        let mut row = vec![Q::zero(); r];
        let mut any = false;
        for (i, rx) in net.reactions().iter().enumerate() {
            if rx.product == c {
                row[i] += Q::one();
                any = true;
            }
            if rx.reactant == c {
                row[i] -= Q::one();
                any = true;
            }
        }
        if any {
            lp.add(row, Relation::Eq, Q::zero());
        }
    }
    for (i, rx) in net.reactions().iter().enumerate() {
        match part_of[rx.reactant] {
            Some(Part::U) => lp.bound(i, Relation::Ge, Q::one()),
            Some(Part::L) => lp.bound(i, Relation::Le, -Q::one()),
            Some(Part::M) => lp.bound(i, Relation::Eq, Q::zero()),
            None => {}
        }
    }
    lp.is_feasible()
}

/// Partitions of the reactant complexes (in `reactant_complexes` order) that pass the circulation test.
pub fn admissible_partitions(net: &ReactionNetwork) -> Vec<Vec<Part>> {
    let reactants = net.reactant_complexes();
    let mut out = Vec::new();
    let mut part_of: Vec<Option<Part>> = vec![None; net.n()];
    fn walk(net: &ReactionNetwork, reactants: &[usize], k: usize, part_of: &mut Vec<Option<Part>>, out: &mut Vec<Vec<Part>>) {
        if k == reactants.len() {
            let uml: Vec<Part> = reactants.iter().map(|&c| part_of[c].unwrap()).collect();
            // everything in M carries no sign information
            if uml.iter().any(|p| *p != Part::M) {
                out.push(uml);
            }
            return;
        }
        for p in Part::ALL {
            part_of[reactants[k]] = Some(p);
            if circulation_feasible(net, part_of) {
                walk(net, reactants, k + 1, part_of, out);
            }
        }
        part_of[reactants[k]] = None;
    }
    walk(net, &reactants, 0, &mut part_of, &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    MEquality,
    CrossPart,
    CutPair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearRelation {
    #[serde(serialize_with = "crate::report::ser_qvec")]
    pub coeffs: Vec<Q>,
    /// `true`: coeffs . mu > 0; `false`: coeffs . mu = 0.
    pub strict: bool,
    pub provenance: Provenance,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct LinearRelationSystem {
    pub relations: Vec<LinearRelation>,
}

fn numeric_t(kin: &PowerLawKinetics) -> Result<Vec<Vec<Q>>> {
    t_matrix(kin)?
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

/// Relations on mu for one confluence vector and partition (`uml` follows `reactant_complexes`).
pub fn build_linear_system(kin: &PowerLawKinetics, h: &[Q], uml: &[Part]) -> Result<LinearRelationSystem> {
    let net = kin.network();
    let t = numeric_t(kin)?;
    let reactants = net.reactant_complexes();
    if uml.len() != reactants.len() {
        return Err(Error::InvalidParameter("partition must assign every reactant complex".into()));
    }
    let m = net.m();
    let col = |k: usize| -> Vec<Q> { (0..m).map(|s| t[s][k].clone()).collect() };
    let diff = |a: usize, b: usize| -> Vec<Q> { col(a).iter().zip(col(b)).map(|(x, y)| x - y).collect() };
    let name = |k: usize| net.complex_name(reactants[k]);
    let mut sys = LinearRelationSystem::default();
    let ms: Vec<usize> = (0..uml.len()).filter(|&k| uml[k] == Part::M).collect();
    for w in ms.windows(2) {
        sys.relations.push(LinearRelation {
            coeffs: diff(w[0], w[1]),
            strict: false,
            provenance: Provenance::MEquality,
            text: format!("T({}).mu = T({}).mu", name(w[0]), name(w[1])),
        });
    }
    for a in 0..uml.len() {
        for b in 0..uml.len() {
            if uml[a].rank() > uml[b].rank() {
                sys.relations.push(LinearRelation {
                    coeffs: diff(a, b),
                    strict: true,
                    provenance: Provenance::CrossPart,
                    text: format!("T({}).mu > T({}).mu", name(a), name(b)),
                });
            }
        }
    }
    for cp in cut_pairs(net) {
        let (Ok(ka), Ok(kb)) = (reactants.binary_search(&cp.a), reactants.binary_search(&cp.b)) else { continue };
        if uml[ka] != uml[kb] || uml[ka] == Part::M {
            continue;
        }
        let mut s = sum_over(h, &cp.side_a);
        if uml[ka] == Part::L {
            s = -s;
        }
        let (coeffs, text, strict) = if s.is_zero() {
            (diff(ka, kb), format!("T({}).mu = T({}).mu", name(ka), name(kb)), false)
        } else if s.is_positive() {
            (diff(ka, kb), format!("T({}).mu > T({}).mu", name(ka), name(kb)), true)
        } else {
            (diff(kb, ka), format!("T({}).mu > T({}).mu", name(kb), name(ka)), true)
        };
        sys.relations.push(LinearRelation { coeffs, strict, provenance: Provenance::CutPair, text });
    }
    Ok(sys)
}

fn relation_lp(sys: &LinearRelationSystem, m: usize, signs: &[i8]) -> LinearSystem {
    let mut lp = LinearSystem::new(m);
    for rel in &sys.relations {
        if rel.strict {
            lp.add(rel.coeffs.clone(), Relation::Ge, Q::one());
        } else {
            lp.add(rel.coeffs.clone(), Relation::Eq, Q::zero());
        }
    }
    for (j, &s) in signs.iter().enumerate() {
        match s {
            1 => lp.bound(j, Relation::Ge, Q::one()),
            -1 => lp.bound(j, Relation::Le, -Q::one()),
            _ => lp.bound(j, Relation::Eq, Q::zero()),
        }
    }
    lp
}

/// Nonzero mu satisfying the relations whose sign pattern some element of S shares.
pub fn solve_sign_compatible(sys: &LinearRelationSystem, s: &SubspaceBasis) -> Option<Vec<Q>> {
    let patterns = realizable_sign_patterns(s);
    solve_with_patterns(sys, s.dim, &patterns)
}

fn solve_with_patterns(sys: &LinearRelationSystem, m: usize, patterns: &[Vec<i8>]) -> Option<Vec<Q>> {
    // depth-first over shared prefixes of the (sorted) realizable patterns
    fn walk(sys: &LinearRelationSystem, m: usize, pats: &[Vec<i8>], depth: usize, prefix: &mut Vec<i8>) -> Option<Vec<Q>> {
        if depth == m {
            return relation_lp(sys, m, prefix).solve();
        }
        let mut i = 0;
        while i < pats.len() {
            let s = pats[i][depth];
            let j = i + pats[i..].iter().take_while(|p| p[depth] == s).count();
            prefix.push(s);
            if relation_lp(sys, m, prefix).is_feasible() {
                if let Some(mu) = walk(sys, m, &pats[i..j], depth + 1, prefix) {
                    return Some(mu);
                }
            }
            prefix.pop();
            i = j;
        }
        None
    }
    if patterns.is_empty() {
        return None;
    }
    walk(sys, m, patterns, 0, &mut Vec::with_capacity(m))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoaWitness {
    #[serde(serialize_with = "crate::report::ser_qvec")]
    pub h: Vec<Q>,
    /// Part of each reactant complex, in `reactant_complexes` order.
    pub partition: Vec<Part>,
    #[serde(serialize_with = "crate::report::ser_qvec")]
    pub mu: Vec<Q>,
    pub system: LinearRelationSystem,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome")]
pub enum DoaOutcome {
    Multistationary(DoaWitness),
    NoWitness,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DoaOptions {
    /// Read the terminal-class condition as one sum over all such classes.
    pub union_form: bool,
}

pub const DOA_REACTANT_LIMIT: usize = 12;

/// First witness in enumeration order (confluence vectors, then partitions).
pub fn doa_search(kin: &PowerLawKinetics, opts: DoaOptions) -> Result<DoaOutcome> {
    let violations = doa_applicability(kin);
    if !violations.is_empty() {
        return Err(Error::NotApplicable(violations.join("; ")));
    }
    let net = kin.network();
    let nr = net.reactant_complexes().len();
    if nr > DOA_REACTANT_LIMIT {
        return Err(Error::SizeLimit { what: "reactant complexes", value: nr, limit: DOA_REACTANT_LIMIT });
    }
    numeric_t(kin)?;
    let s = stoichiometric_subspace(net);
    let patterns = realizable_sign_patterns(&s);
    let partitions = admissible_partitions(net);
    for h in confluence_vectors(net, opts.union_form) {
        let attempt = |uml: &Vec<Part>| -> Option<DoaWitness> {
            let sys = build_linear_system(kin, &h, uml).ok()?;
            let mu = solve_with_patterns(&sys, net.m(), &patterns)?;
            Some(DoaWitness { h: h.clone(), partition: uml.clone(), mu, system: sys })
        };
        #[cfg(feature = "parallel")]
        let found = {
            use rayon::prelude::*;
            partitions.par_iter().map(attempt).find_first(|w| w.is_some()).flatten()
        };
        #[cfg(not(feature = "parallel"))]
        let found = partitions.iter().find_map(attempt);
        if let Some(w) = found {
            return Ok(DoaOutcome::Multistationary(w));
        }
    }
    Ok(DoaOutcome::NoWitness)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Realization {
    #[serde(serialize_with = "crate::report::ser_qvec")]
    pub rate_constants: Vec<Q>,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub residual1: f64,
    pub residual2: f64,
    /// Largest relative difference between the conservation totals of x1 and x2.
    pub total_mismatch: f64,
    /// max |x2 - x1| / max(x1, x2)
    pub separation: f64,
}

pub const REALIZE_RESIDUAL: f64 = 1e-9;
pub const REALIZE_SEPARATION: f64 = 1e-3;

fn pow_q(base: &Q, e: &Q) -> Q {
    if e.is_integer() {
        let n: i64 = e.to_integer().try_into().unwrap_or(0);
        let mut acc = Q::one();
        let b = if n < 0 { Q::one() / base } else { base.clone() };
        for _ in 0..n.unsigned_abs() {
            acc *= &b;
        }
        acc
    } else {
        from_f64(to_f64(base).powf(to_f64(e)))
    }
}

/// Rate constants and two equilibria x* = c, x** = c exp(mu) in one stoichiometric class.
pub fn realize_witness(kin: &PowerLawKinetics, mu: &[Q]) -> Result<Realization> {
    let net = kin.network();
    let (m, r) = (net.m(), net.r());
    if mu.len() != m || mu.iter().all(|v| v.is_zero()) {
        return Err(Error::Unrealizable("mu must be a nonzero species vector".into()));
    }
    let f = kin.numeric_orders()?;
    let g: Vec<Q> = mu.iter().map(|v| from_f64(to_f64(v).exp())).collect();
    let perp = stoichiometric_subspace(net).orthogonal_complement();
    let mut clp = LinearSystem::new(m);
    for w in &perp.vectors {
        let row: Vec<Q> = (0..m).map(|s| &w[s] * (&g[s] - Q::one())).collect();
        clp.add(row, Relation::Eq, Q::zero());
    }
    for s in 0..m {
        clp.bound(s, Relation::Ge, Q::one());
    }
    let c0 = clp.solve().ok_or_else(|| Error::Unrealizable("no positive c with c(exp(mu) - 1) in S".into()))?;
    let nmat = net.stoichiometric_matrix();
    let gr: Vec<Q> = (0..r)
        .map(|i| (0..m).filter(|&s| !f[i][s].is_zero()).fold(Q::one(), |acc, s| acc * pow_q(&g[s], &f[i][s])))
        .collect();
    let mut ulp = LinearSystem::new(r);
    for row in &nmat {
        ulp.add(row.clone(), Relation::Eq, Q::zero());
        ulp.add(row.iter().zip(&gr).map(|(a, b)| a * b).collect(), Relation::Eq, Q::zero());
    }
    for i in 0..r {
        ulp.bound(i, Relation::Ge, Q::one());
    }
    let u = ulp.solve().ok_or_else(|| Error::Unrealizable("no positive flux balanced at both points".into()))?;
    let mut last_err = String::new();
    for scale in [Q::one(), Q::new(1.into(), 2.into()), Q::from_integer(2.into()), Q::new(1.into(), 4.into()), Q::from_integer(4.into())] {
        let c: Vec<Q> = c0.iter().map(|v| v * &scale).collect();
        let k: Vec<Q> = (0..r)
            .map(|i| {
                let cf = (0..m).filter(|&s| !f[i][s].is_zero()).fold(Q::one(), |acc, s| acc * pow_q(&c[s], &f[i][s]));
                &u[i] / cf
            })
            .collect();
        let bound = PowerLawKinetics::new(
            net.clone(),
            f.iter().map(|row| row.iter().cloned().map(KineticOrder::Value).collect()).collect(),
            k.iter().cloned().map(crate::kinetics::RateConstant::value).collect(),
            Default::default(),
            Default::default(),
        )?;
        let sys = NumericSystem::from_kinetics(&bound)?;
        let x1: Vec<f64> = c.iter().map(to_f64).collect();
        let x2: Vec<f64> = c.iter().zip(&g).map(|(a, b)| to_f64(&(a * b))).collect();
        let (r1, r2) = (sys.residual(&x1), sys.residual(&x2));
        let t1 = sys.totals(&x1);
        let t2 = sys.totals(&x2);
        let mismatch = t1.iter().zip(&t2).map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
        let scale_x = x1.iter().chain(&x2).fold(0.0f64, |a, v| a.max(*v));
        let sep = x1.iter().zip(&x2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale_x;
        if r1 < REALIZE_RESIDUAL && r2 < REALIZE_RESIDUAL && mismatch < REALIZE_RESIDUAL && sep > REALIZE_SEPARATION {
            return Ok(Realization { rate_constants: k, x1, x2, residual1: r1, residual2: r2, total_mismatch: mismatch, separation: sep });
        }
        last_err = format!("residuals {r1:.2e}/{r2:.2e}, total mismatch {mismatch:.2e}, separation {sep:.2e}");
    }
    Err(Error::Unrealizable(last_err))
}

/// Complex names of the parts, for reports.
pub fn describe_partition(net: &ReactionNetwork, uml: &[Part]) -> [Vec<String>; 3] {
    let reactants = net.reactant_complexes();
    let pick = |p: Part| -> Vec<String> { reactants.iter().zip(uml).filter(|(_, q)| **q == p).map(|(&c, _)| net.complex_name(c)).collect() };
    [pick(Part::U), pick(Part::M), pick(Part::L)]
}

pub fn format_vector(v: &[Q]) -> String {
    format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(", "))
}

/// Cut-pair identity h(W(a)) = -h(W(b)).
pub fn cut_pair_sums_cancel(net: &ReactionNetwork, h: &[Q]) -> bool {
    cut_pairs(net).iter().all(|cp| sum_over(h, &cp.side_a) == -sum_over(h, &cp.side_b))
}
