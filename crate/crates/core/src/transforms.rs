//! Rate-preserving network transformations (shifts and splits), the weakly
//! reversible BECCS transform and the checks built on it.

use crate::acr::{anderies_orders, kinetic_flux_subspace};
use crate::error::{Error, Result};
use crate::kinetics::{KineticOrder, PowerLawKinetics, RateConstant};
use crate::linalg::SubspaceBasis;
use crate::lp::{LinearSystem, Relation};
use crate::network::{network_numbers, stoichiometric_subspace, ReactionNetwork};
use crate::rational::{format_rational, q, qf, Q};
use crate::sim::NumericSystem;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformStep {
    /// Add the same complex to both sides of a reaction.
    Shift { reaction: String, by: Vec<Q> },
    /// Replace a reaction by copies `{label}_a`, `{label}_b`, ... whose rate
    /// constants are the original scaled by the weights.
    Split { reaction: String, weights: Vec<Q> },
}

struct Row {
    label: String,
    y: Vec<Q>,
    yp: Vec<Q>,
    orders: Vec<KineticOrder>,
    rate: RateConstant,
}

fn split_label(label: &str, i: usize) -> String {
    let suffix = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        format!("{label}_{suffix}")
    } else {
        format!("{label}_{suffix}{}", i / 26)
    }
}

pub fn apply_transform(kin: &PowerLawKinetics, steps: &[TransformStep]) -> Result<PowerLawKinetics> {
    let net = kin.network();
    let m = net.m();
    let mut rows: Vec<Row> = net
        .reactions()
        .iter()
        .zip(kin.raw_orders())
        .zip(kin.rates())
        .map(|((r, o), k)| Row {
            label: r.label.clone(),
            y: net.complexes()[r.reactant].clone(),
            yp: net.complexes()[r.product].clone(),
            orders: o.clone(),
            rate: k.clone(),
        })
        .collect();
    for step in steps {
        let label = match step {
            TransformStep::Shift { reaction, .. } | TransformStep::Split { reaction, .. } => reaction,
        };
        let at = rows
            .iter()
            .position(|r| &r.label == label)
            .ok_or_else(|| Error::InvalidStep(format!("no reaction labelled {label}")))?;
        match step {
            TransformStep::Shift { by, .. } => {
                if by.len() != m || by.iter().any(|c| c.is_negative()) {
                    return Err(Error::InvalidStep(format!("shift of {label} needs {m} non-negative coefficients")));
                }
                let row = &mut rows[at];
                for j in 0..m {
                    row.y[j] += &by[j];
                    row.yp[j] += &by[j];
                }
            }
            TransformStep::Split { weights, .. } => {
                if weights.is_empty() || weights.iter().any(|w| !w.is_positive()) {
                    return Err(Error::InvalidStep(format!("split of {label} needs positive weights")));
                }
                if weights.iter().sum::<Q>() != Q::one() {
                    return Err(Error::InvalidStep(format!("split weights of {label} must sum to 1")));
                }
                let old = rows.remove(at);
                for (i, w) in weights.iter().enumerate() {
                    let rate = RateConstant { symbol: old.rate.symbol.clone(), scale: &old.rate.scale * w };
                    let row = Row { label: split_label(&old.label, i), y: old.y.clone(), yp: old.yp.clone(), orders: old.orders.clone(), rate };
                    rows.insert(at + i, row);
                }
            }
        }
    }
    let pairs = rows.iter().map(|r| (r.label.clone(), r.y.clone(), r.yp.clone())).collect();
    let new_net = ReactionNetwork::from_pairs(net.species().to_vec(), pairs)?.with_name(net.name());
    kin.with_network(new_net, rows.iter().map(|r| r.orders.clone()).collect(), rows.into_iter().map(|r| r.rate).collect())
}

const BECCS_SPECIES: [&str; 5] = ["A1", "A2", "A3", "A4", "A8"];

/// (label, reactant, product) of each BECCS reaction, in species order A1, A2, A3, A4, A8.
fn beccs_shape() -> Vec<(&'static str, [i64; 5], [i64; 5])> {
    vec![
        ("R1", [1, 2, 0, 0, 0], [2, 1, 0, 0, 0]),
        ("R2", [2, 1, 0, 0, 0], [1, 2, 0, 0, 0]),
        ("R3", [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]),
        ("R4", [0, 0, 1, 0, 0], [0, 1, 0, 0, 0]),
        ("R5", [0, 0, 0, 1, 0], [0, 1, 0, 0, 0]),
        ("R8_6", [1, 0, 0, 0, 0], [0, 0, 0, 0, 1]),
        ("R8_7", [0, 0, 0, 0, 1], [0, 0, 0, 1, 0]),
    ]
}

fn check_beccs(kin: &PowerLawKinetics) -> Result<()> {
    let net = kin.network();
    if net.species() != BECCS_SPECIES {
        return Err(Error::NotBeccs(format!("species are {:?}", net.species())));
    }
    let shape = beccs_shape();
    if net.r() != shape.len() {
        return Err(Error::NotBeccs(format!("{} reactions, expected 7", net.r())));
    }
    for (label, y, yp) in shape {
        let i = net.reaction_index(label).ok_or_else(|| Error::NotBeccs(format!("missing reaction {label}")))?;
        let r = &net.reactions()[i];
        let as_q = |v: [i64; 5]| v.iter().map(|&c| q(c)).collect::<Vec<Q>>();
        if net.complexes()[r.reactant] != as_q(y) || net.complexes()[r.product] != as_q(yp) {
            return Err(Error::NotBeccs(format!("reaction {label} has the wrong complexes")));
        }
    }
    Ok(())
}

pub fn beccs_wr_steps() -> Vec<TransformStep> {
    let c = |v: [i64; 5]| v.iter().map(|&x| q(x)).collect::<Vec<Q>>();
    let shift = |r: &str, by: [i64; 5]| TransformStep::Shift { reaction: r.into(), by: c(by) };
    vec![
        shift("R8_6", [1, 1, 0, 0, 0]),
        shift("R8_7", [1, 1, 0, 0, 0]),
        shift("R5", [1, 1, 0, 0, 0]),
        TransformStep::Split { reaction: "R1".into(), weights: vec![qf(1, 2), qf(1, 2)] },
        shift("R1_b", [0, 0, 0, 1, 0]),
        shift("R2", [0, 0, 0, 1, 0]),
    ]
}

/// Shift the capture-storage-emission path by A1+A2, split R1 in halves and
/// close the cycle with one half, shift the remaining R1 half and R2 by A4.
pub fn beccs_wr_transform(kin: &PowerLawKinetics) -> Result<PowerLawKinetics> {
    check_beccs(kin)?;
    apply_transform(kin, &beccs_wr_steps())
}

/// n - l - dim of the kinetic flux subspace.
pub fn kinetic_deficiency(kin: &PowerLawKinetics) -> Result<i64> {
    let nn = network_numbers(kin.network());
    let dim = kinetic_flux_subspace(kin)?.dimension();
    Ok(nn.n as i64 - nn.l as i64 - dim as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedNegative {
    /// (p2 - p1) / (q2 - q1)
    pub r: String,
    pub balanced: bool,
    /// S equals the kinetic flux subspace.
    pub s_equals_kinetic: bool,
    /// S, its kinetic counterpart and both subspaces of the weakly reversible transform agree.
    pub all_four_coincide: bool,
}

fn same(a: &SubspaceBasis, b: &SubspaceBasis) -> bool {
    a.contains_subspace(b) && b.contains_subspace(a)
}

pub fn balanced_negative_check(kin: &PowerLawKinetics) -> Result<BalancedNegative> {
    check_beccs(kin)?;
    let [p1, p2, q1, q2] = anderies_orders(kin)?;
    if q2 == q1 {
        return Err(Error::QDifferenceZero);
    }
    let r = (&p2 - &p1) / (&q2 - &q1);
    let s = stoichiometric_subspace(kin.network());
    let st = kinetic_flux_subspace(kin)?;
    let wr = beccs_wr_transform(kin)?;
    let s_wr = stoichiometric_subspace(wr.network());
    let st_wr = kinetic_flux_subspace(&wr)?;
    let s_equals_kinetic = same(&s, &st);
    Ok(BalancedNegative {
        balanced: r == -Q::one(),
        r: format_rational(&r),
        s_equals_kinetic,
        all_four_coincide: s_equals_kinetic && same(&s, &s_wr) && same(&s, &st_wr),
    })
}

pub const VCB_ALPHAS: [f64; 3] = [-1.0, 0.5, 1.0];
pub const VCB_RESIDUAL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VcbAnalysis {
    /// Constants of the weakly reversible transform, complex balanced at the all-ones vector.
    #[serde(serialize_with = "crate::report::ser_qvec")]
    pub transform_rates: Vec<Q>,
    /// The same constants folded back onto the original reactions.
    #[serde(serialize_with = "crate::report::ser_qvec")]
    pub rates: Vec<Q>,
    pub alphas: Vec<f64>,
    /// Relative residual of the original system at exp(alpha) times the all-ones vector.
    pub residuals: Vec<f64>,
    /// Conservation totals at each point.
    pub totals: Vec<Vec<f64>>,
    pub verified: bool,
}

/// Complex-balancing constants for the transform by exact LP (k >= 1, flow balance at
/// x = 1, split halves kept equal), then a numeric check of the exp(alpha) family.
pub fn vcb_analysis(kin: &PowerLawKinetics) -> Result<VcbAnalysis> {
    let bn = balanced_negative_check(kin)?;
    if !bn.balanced {
        return Err(Error::InvalidParameter(format!("not balanced negative (R = {})", bn.r)));
    }
    let wr = beccs_wr_transform(kin)?;
    let net = wr.network();
    let r = net.r();
    let mut lp = LinearSystem::new(r);
    for c in 0..net.n() {
        let row: Vec<Q> = net
            .reactions()
            .iter()
            .map(|rx| match (rx.product == c, rx.reactant == c) {
                (true, false) => Q::one(),
                (false, true) => -Q::one(),
                _ => Q::zero(),
            })
            .collect();
        lp.add(row, Relation::Eq, Q::zero());
    }
    let a = net.reaction_index("R1_a").expect("split label");
    let b = net.reaction_index("R1_b").expect("split label");
    let mut tie = vec![Q::zero(); r];
    tie[a] = Q::one();
    tie[b] = -Q::one();
    lp.add(tie, Relation::Eq, Q::zero());
    for i in 0..r {
        lp.bound(i, Relation::Ge, Q::one());
    }
    let k = lp.solve().ok_or(Error::NotFound)?;
    let orig = kin.network();
    let rates: Vec<Q> = orig
        .reactions()
        .iter()
        .map(|rx| match net.reaction_index(&rx.label) {
            Some(i) => k[i].clone(),
            None => &k[a] + &k[b],
        })
        .collect();
    let bound = PowerLawKinetics::new(
        orig.clone(),
        kin.numeric_orders()?.into_iter().map(|row| row.into_iter().map(KineticOrder::Value).collect()).collect(),
        rates.iter().cloned().map(RateConstant::value).collect(),
        Default::default(),
        Default::default(),
    )?;
    let sys = NumericSystem::from_kinetics(&bound)?;
    let mut residuals = Vec::new();
    let mut totals = Vec::new();
    for alpha in VCB_ALPHAS {
        let x = vec![alpha.exp(); orig.m()];
        residuals.push(sys.residual(&x));
        totals.push(sys.totals(&x));
    }
    let verified = residuals.iter().all(|r| *r < VCB_RESIDUAL);
    Ok(VcbAnalysis { transform_rates: k, rates, alphas: VCB_ALPHAS.to_vec(), residuals, totals, verified })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    /// (sum of the other pools / A2 + 1) / 5, the equilibrium-to-initial ratio of A2.
    pub implied_xi: String,
    pub implied_feasible: bool,
    pub requested_xi: String,
    /// 1/5 < xi < 1
    pub requested_feasible: bool,
}

/// Reduction bound for a balanced-negative system. `x0` is (A1, A2, A3, A4, A8).
pub fn reduction_feasibility(x0: &[Q; 5], xi: &Q) -> Reduction {
    let fifth = qf(1, 5);
    let in_range = |v: &Q| *v > fifth && *v < Q::one();
    let others: Q = x0.iter().enumerate().filter(|(i, _)| *i != 1).map(|(_, v)| v.clone()).sum();
    let implied = (others / &x0[1] + Q::one()) / q(5);
    Reduction {
        implied_xi: format_rational(&implied),
        implied_feasible: implied > fifth,
        requested_xi: format_rational(xi),
        requested_feasible: in_range(xi),
    }
}
