//! System classes, kinetic flux subspace and absolute concentration robustness.

use crate::error::{Error, Result};
use crate::kinetics::{t_matrix, KineticOrder, PowerLawKinetics};
use crate::linalg::SubspaceBasis;
use crate::rational::{format_rational, Q};
use crate::sim::{find_steady_state, NumericSystem, SteadyStateOptions, EQUILIBRIUM_RESIDUAL};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassKind {
    Positive,
    Negative,
    PNull,
    QNull,
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemClass {
    pub kind: ClassKind,
    /// (p2 - p1) / (q2 - q1)
    pub r: Option<String>,
    /// (q2 - q1) / (p2 - p1)
    pub q: Option<String>,
}

pub fn classify_orders(p1: &Q, p2: &Q, q1: &Q, q2: &Q) -> SystemClass {
    let dp = p2 - p1;
    let dq = q2 - q1;
    let r = (!dq.is_zero()).then(|| &dp / &dq);
    let qq = (!dp.is_zero()).then(|| &dq / &dp);
    let kind = match (dp.is_zero(), dq.is_zero()) {
        (true, true) => ClassKind::Undefined,
        (true, false) => ClassKind::PNull,
        (false, true) => ClassKind::QNull,
        (false, false) => {
            if r.as_ref().is_some_and(|v| v.is_positive()) {
                ClassKind::Positive
            } else {
                ClassKind::Negative
            }
        }
    };
    SystemClass { kind, r: r.as_ref().map(format_rational), q: qq.as_ref().map(format_rational) }
}

/// (p1, p2, q1, q2): orders of A1 and A2 in reactions R1 and R2.
pub fn anderies_orders(kin: &PowerLawKinetics) -> Result<[Q; 4]> {
    let net = kin.network();
    let missing = || Error::NotApplicable("needs reactions R1, R2 and species A1, A2".into());
    let r1 = net.reaction_index("R1").ok_or_else(missing)?;
    let r2 = net.reaction_index("R2").ok_or_else(missing)?;
    let a1 = net.species_index("A1").ok_or_else(missing)?;
    let a2 = net.species_index("A2").ok_or_else(missing)?;
    let f = kin.orders();
    let get = |r: usize, s: usize| match &f[r][s] {
        KineticOrder::Value(v) => Ok(v.clone()),
        KineticOrder::Symbol(sym) => Err(Error::NonNumeric(format!("kinetic order {sym}"))),
    };
    Ok([get(r1, a1)?, get(r2, a1)?, get(r1, a2)?, get(r2, a2)?])
}

pub fn classify(kin: &PowerLawKinetics) -> Result<SystemClass> {
    let [p1, p2, q1, q2] = anderies_orders(kin)?;
    Ok(classify_orders(&p1, &p2, &q1, &q2))
}

/// Span of T(product) - T(reactant) over all reactions.
pub fn kinetic_flux_subspace(kin: &PowerLawKinetics) -> Result<SubspaceBasis> {
    let net = kin.network();
    if net.reactant_complexes().len() != net.n() {
        return Err(Error::NotCycleTerminal);
    }
    let t = t_matrix(kin)?;
    let m = net.m();
    let numeric = |o: &KineticOrder| match o {
        KineticOrder::Value(v) => Ok(v.clone()),
        KineticOrder::Symbol(s) => Err(Error::NonNumeric(format!("kinetic order {s}"))),
    };
    // every complex is a reactant, so column index == complex index
    let mut gens = Vec::new();
    for r in net.reactions() {
        let mut v = Vec::with_capacity(m);
        for row in &t {
            v.push(numeric(&row[r.product])? - numeric(&row[r.reactant])?);
        }
        gens.push(v);
    }
    Ok(SubspaceBasis::span(m, &gens))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AcrHyperplane {
    pub species: Vec<String>,
    /// The criterion is only conclusive for PLP systems, which is not checked.
    pub assumes_plp: bool,
}

pub fn acr_hyperplane(kin: &PowerLawKinetics) -> Result<AcrHyperplane> {
    let perp = kinetic_flux_subspace(kin)?.orthogonal_complement();
    let net = kin.network();
    let species = (0..net.m())
        .filter(|&j| perp.vectors.iter().all(|v| v[j].is_zero()))
        .map(|j| net.species()[j].clone())
        .collect();
    Ok(AcrHyperplane { species, assumes_plp: true })
}

#[derive(Debug, Clone)]
pub struct SamplingOptions {
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub low: f64,
    pub high: f64,
    /// Extra draws per trial when the steady-state search fails or lands on the boundary.
    pub retries: usize,
    /// Equilibria with a coordinate below this are boundary points and get redrawn.
    pub floor: f64,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions { trials: 32, seed: 20240601, tolerance: 1e-6, low: 0.1, high: 10.0, retries: 8, floor: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcrSampling {
    pub seed: u64,
    pub acr_species: Vec<String>,
    /// (max - min) / mean over the found equilibria, per species.
    pub spread: Vec<f64>,
    pub equilibria: Vec<Vec<f64>>,
    pub failed_trials: usize,
}

fn sample_point(rng: &mut ChaCha8Rng, m: usize, low: f64, high: f64) -> Vec<f64> {
    let (a, b) = (low.ln(), high.ln());
    (0..m).map(|_| rng.gen_range(a..b).exp()).collect()
}

fn run_trial(sys: &NumericSystem, opts: &SamplingOptions, trial: usize) -> Option<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(trial as u64));
    let ss = SteadyStateOptions::default();
    for _ in 0..=opts.retries {
        let x0 = sample_point(&mut rng, sys.m(), opts.low, opts.high);
        if let Ok(x) = find_steady_state(sys, &x0, &ss) {
            if sys.residual(&x) < EQUILIBRIUM_RESIDUAL && x.iter().all(|v| *v > opts.floor) {
                return Some(x);
            }
        }
    }
    None
}

/// Empirical ACR: species whose value agrees across equilibria reached from random starts.
pub fn acr_sampling(kin: &PowerLawKinetics, opts: &SamplingOptions) -> Result<AcrSampling> {
    let sys = NumericSystem::from_kinetics(kin)?;
    #[cfg(feature = "parallel")]
    let found: Vec<Option<Vec<f64>>> = {
        use rayon::prelude::*;
        (0..opts.trials).into_par_iter().map(|t| run_trial(&sys, opts, t)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let found: Vec<Option<Vec<f64>>> = (0..opts.trials).map(|t| run_trial(&sys, opts, t)).collect();
    let failed = found.iter().filter(|f| f.is_none()).count();
    let equilibria: Vec<Vec<f64>> = found.into_iter().flatten().collect();
    if equilibria.len() < 2 {
        return Err(Error::NoEquilibriumFound(format!("{} of {} trials converged", equilibria.len(), opts.trials)));
    }
    let m = sys.m();
    let spread: Vec<f64> = (0..m)
        .map(|j| {
            let vals = equilibria.iter().map(|x| x[j]);
            let (lo, hi, sum) = vals.fold((f64::INFINITY, f64::NEG_INFINITY, 0.0), |(lo, hi, s), v| (lo.min(v), hi.max(v), s + v));
            (hi - lo) / (sum / equilibria.len() as f64)
        })
        .collect();
    let acr_species = (0..m).filter(|&j| spread[j] < opts.tolerance).map(|j| sys.species[j].clone()).collect();
    Ok(AcrSampling { seed: opts.seed, acr_species, spread, equilibria, failed_trials: failed })
}
