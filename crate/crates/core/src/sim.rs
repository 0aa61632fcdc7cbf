//! Floating-point dynamics: integration, steady states, multistationarity checks.

use crate::error::{Error, Result};
use crate::kinetics::PowerLawKinetics;
use crate::linalg::SubspaceBasis;
use crate::network::stoichiometric_subspace;
use crate::rational::to_f64;
use nalgebra::{DMatrix, DVector};

/// A power-law system with every order and rate constant fixed to a float.
#[derive(Debug, Clone)]
pub struct NumericSystem {
    pub species: Vec<String>,
    /// Reaction vectors, one row per reaction.
    pub vectors: Vec<Vec<f64>>,
    /// Kinetic orders, reactions by species.
    pub orders: Vec<Vec<f64>>,
    pub k: Vec<f64>,
    /// Orthonormal basis of S (columns).
    s_basis: DMatrix<f64>,
    /// Basis of the orthogonal complement of S, as rows (conservation laws).
    pub conservation: Vec<Vec<f64>>,
}

impl NumericSystem {
    pub fn from_kinetics(kin: &PowerLawKinetics) -> Result<Self> {
        let net = kin.network();
        let orders = kin.numeric_orders()?.iter().map(|r| r.iter().map(to_f64).collect()).collect();
        let k = kin.numeric_rates()?.iter().map(to_f64).collect();
        let vectors = (0..net.r()).map(|i| net.reaction_vector(i).iter().map(to_f64).collect()).collect();
        let s = stoichiometric_subspace(net);
        Ok(Self::build(net.species().to_vec(), vectors, orders, k, &s))
    }

    fn build(species: Vec<String>, vectors: Vec<Vec<f64>>, orders: Vec<Vec<f64>>, k: Vec<f64>, s: &SubspaceBasis) -> Self {
        let m = species.len();
        let cols: Vec<DVector<f64>> = s.vectors.iter().map(|v| DVector::from_iterator(m, v.iter().map(to_f64))).collect();
        let s_basis = if cols.is_empty() { DMatrix::zeros(m, 0) } else { DMatrix::from_columns(&cols).qr().q() };
        let conservation = s
            .orthogonal_complement()
            .vectors
            .iter()
            .map(|v| v.iter().map(to_f64).collect())
            .collect();
        NumericSystem { species, vectors, orders, k, s_basis, conservation }
    }

    pub fn m(&self) -> usize {
        self.species.len()
    }

    pub fn rates(&self, x: &[f64]) -> Vec<f64> {
        self.orders
            .iter()
            .zip(&self.k)
            .map(|(row, k)| row.iter().zip(x).fold(*k, |acc, (o, xs)| if *o == 0.0 { acc } else { acc * xs.powf(*o) }))
            .collect()
    }

    pub fn rhs(&self, x: &[f64]) -> Vec<f64> {
        let mut f = vec![0.0; self.m()];
        for (v, rate) in self.vectors.iter().zip(self.rates(x)) {
            for (fi, vi) in f.iter_mut().zip(v) {
                *fi += vi * rate;
            }
        }
        f
    }

    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let m = self.m();
        let rates = self.rates(x);
        let mut j = DMatrix::zeros(m, m);
        for ((v, row), rate) in self.vectors.iter().zip(&self.orders).zip(rates) {
            for (c, o) in row.iter().enumerate() {
                if *o == 0.0 {
                    continue;
                }
                let d = rate * o / x[c];
                for (i, vi) in v.iter().enumerate() {
                    j[(i, c)] += vi * d;
                }
            }
        }
        j
    }

    /// max |N K(x)| relative to the largest reaction rate.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let scale = self.rates(x).iter().fold(0.0f64, |a, r| a.max(r.abs()));
        let f = self.rhs(x).iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if scale > 0.0 {
            f / scale
        } else {
            f
        }
    }

    pub fn totals(&self, x: &[f64]) -> Vec<f64> {
        self.conservation.iter().map(|c| c.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Relative size of the component of d outside S.
    pub fn off_class(&self, d: &[f64]) -> f64 {
        let dv = DVector::from_column_slice(d);
        let proj = &self.s_basis * (self.s_basis.transpose() * &dv);
        let norm = dv.amax();
        if norm == 0.0 {
            0.0
        } else {
            (dv - proj).amax() / norm
        }
    }
}

#[derive(Debug, Clone)]
pub struct IntegrateOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub h0: Option<f64>,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions { rtol: 1e-8, atol: 1e-12, max_steps: 1_000_000, h0: None }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub x: Vec<Vec<f64>>,
    pub totals: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.x.last().map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Largest relative change of any conservation total against its initial value.
    pub fn max_total_drift(&self) -> f64 {
        let Some(first) = self.totals.first() else { return 0.0 };
        self.totals
            .iter()
            .flat_map(|row| row.iter().zip(first).map(|(a, b)| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)))
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self, species: &[String]) -> String {
        let mut out = String::from("t");
        for s in species {
            out.push(',');
            out.push_str(s);
        }
        let ntot = self.totals.first().map_or(0, |t| t.len());
        for i in 0..ntot {
            out.push_str(&format!(",total{}", i + 1));
        }
        out.push('\n');
        for ((t, x), tot) in self.t.iter().zip(&self.x).zip(&self.totals) {
            out.push_str(&format!("{t:e}"));
            for v in x.iter().chain(tot) {
                out.push_str(&format!(",{v:e}"));
            }
            out.push('\n');
        }
        out
    }
}

// Dormand–Prince 5(4) tableau; the system is autonomous so the nodes are not needed
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Adaptive Dormand–Prince integration from 0 to `t_end`, recording accepted steps.
/// Steps that would leave the positive orthant are rejected and retried smaller.
pub fn integrate(sys: &NumericSystem, x0: &[f64], t_end: f64, opts: &IntegrateOptions) -> Result<Trajectory> {
    integrate_with(sys, x0, t_end, opts, true)
}

fn integrate_with(sys: &NumericSystem, x0: &[f64], t_end: f64, opts: &IntegrateOptions, record: bool) -> Result<Trajectory> {
    let m = sys.m();
    if x0.len() != m || x0.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParameter("initial state must be positive and match the species count".into()));
    }
    if !(t_end >= 0.0) {
        return Err(Error::InvalidParameter("end time must be non-negative".into()));
    }
    let mut traj = Trajectory::default();
    let push = |traj: &mut Trajectory, t: f64, x: &[f64]| {
        traj.t.push(t);
        traj.x.push(x.to_vec());
        traj.totals.push(sys.totals(x));
    };
    let mut t = 0.0;
    let mut x = x0.to_vec();
    push(&mut traj, t, &x);
    let mut k = vec![vec![0.0; m]; 7];
    k[0] = sys.rhs(&x);
    let mut h = opts.h0.unwrap_or_else(|| {
        let fmax = k[0].iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let xmax = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if fmax > 0.0 {
            (0.01 * xmax / fmax).min(t_end.max(1e-6))
        } else {
            t_end.max(1e-6)
        }
    });
    let mut steps = 0;
    let mut stage = vec![0.0; m];
    while t < t_end {
        if steps >= opts.max_steps {
            return Err(Error::NotConverged(format!("step budget exhausted at t = {t}")));
        }
        steps += 1;
        if t + h > t_end {
            h = t_end - t;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow(t));
        }
        let mut positive = true;
        for s in 1..7 {
            for i in 0..m {
                stage[i] = x[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>();
            }
            if stage.iter().any(|v| !(*v > 0.0)) {
                positive = false;
                break;
            }
            k[s] = sys.rhs(&stage);
        }
        if !positive {
            h *= 0.25;
            continue;
        }
        let x5: Vec<f64> = (0..m).map(|i| x[i] + h * (0..7).map(|j| B5[j] * k[j][i]).sum::<f64>()).collect();
        let err = (0..m)
            .map(|i| {
                let e = h * (0..7).map(|j| (B5[j] - B4[j]) * k[j][i]).sum::<f64>();
                e.abs() / (opts.atol + opts.rtol * x[i].abs().max(x5[i].abs()))
            })
            .fold(0.0f64, f64::max);
        if err <= 1.0 && x5.iter().all(|v| *v > 0.0) {
            t += h;
            x = x5;
            // FSAL: the last stage is f at the new point
            k[0] = k[6].clone();
            if record || t >= t_end {
                push(&mut traj, t, &x);
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    Ok(traj)
}

#[derive(Debug, Clone)]
pub struct SteadyStateOptions {
    pub tolerance: f64,
    pub newton_iterations: usize,
    pub horizons: Vec<f64>,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        SteadyStateOptions { tolerance: 1e-10, newton_iterations: 60, horizons: vec![10.0, 100.0, 1000.0, 10000.0] }
    }
}

/// Damped Newton on the stoichiometric class of `x0`, parametrized by a basis of S.
fn newton(sys: &NumericSystem, x0: &[f64], opts: &SteadyStateOptions) -> Option<Vec<f64>> {
    let b = &sys.s_basis;
    let s = b.ncols();
    let mut x = x0.to_vec();
    if s == 0 {
        return (sys.residual(&x) < opts.tolerance).then_some(x);
    }
    for _ in 0..opts.newton_iterations {
        let res = sys.residual(&x);
        if res < opts.tolerance {
            return Some(x);
        }
        let f = DVector::from_vec(sys.rhs(&x));
        let g = b.transpose() * &f;
        let jr = b.transpose() * sys.jacobian(&x) * b;
        let du = jr.lu().solve(&(-g))?;
        let dx = b * du;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let cand: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, d)| a + lambda * d).collect();
            if cand.iter().all(|v| *v > 0.0) && sys.residual(&cand) < res * (1.0 - 1e-4 * lambda) {
                x = cand;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    (sys.residual(&x) < opts.tolerance).then_some(x)
}

/// A positive equilibrium in the stoichiometric class of `x0`.
pub fn find_steady_state(sys: &NumericSystem, x0: &[f64], opts: &SteadyStateOptions) -> Result<Vec<f64>> {
    if let Some(x) = newton(sys, x0, opts) {
        return Ok(x);
    }
    let iopts = IntegrateOptions { rtol: 1e-10, atol: 1e-14, ..Default::default() };
    let mut x = x0.to_vec();
    let mut last = f64::INFINITY;
    for &horizon in &opts.horizons {
        let traj = integrate_with(sys, &x, horizon, &iopts, false)?;
        x = traj.last().to_vec();
        if let Some(sol) = newton(sys, &x, opts) {
            return Ok(sol);
        }
        last = sys.residual(&x);
    }
    Err(Error::NotConverged(format!("relative residual {last:.3e} after integration")))
}

pub const EQUILIBRIUM_RESIDUAL: f64 = 1e-9;

/// Two distinct positive equilibria in the same stoichiometric class.
pub fn confirm_multistationarity(sys: &NumericSystem, x1: &[f64], x2: &[f64]) -> bool {
    if x1.iter().chain(x2).any(|v| !(*v > 0.0)) {
        return false;
    }
    if sys.residual(x1) >= EQUILIBRIUM_RESIDUAL || sys.residual(x2) >= EQUILIBRIUM_RESIDUAL {
        return false;
    }
    let scale = x1.iter().chain(x2).fold(0.0f64, |a, v| a.max(v.abs()));
    let d: Vec<f64> = x2.iter().zip(x1).map(|(a, b)| a - b).collect();
    let sep = d.iter().fold(0.0f64, |a, v| a.max(v.abs())) / scale;
    if sep <= 1e-6 {
        return false;
    }
    sys.off_class(&d) < EQUILIBRIUM_RESIDUAL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::ReactionNetwork;
    use crate::rational::q;

    fn pair(kf: i64, kb: i64) -> NumericSystem {
        let net = ReactionNetwork::from_pairs(
            vec!["A".into(), "B".into()],
            vec![("f".into(), vec![q(1), q(0)], vec![q(0), q(1)]), ("b".into(), vec![q(0), q(1)], vec![q(1), q(0)])],
        )
        .unwrap();
        NumericSystem::from_kinetics(&PowerLawKinetics::mass_action(net, vec![q(kf), q(kb)]).unwrap()).unwrap()
    }

    #[test]
    fn linear_decay_matches_exact() {
        let sys = pair(1, 1);
        let tr = integrate(&sys, &[2.0, 1.0], 3.0, &IntegrateOptions { rtol: 1e-10, ..Default::default() }).unwrap();
        let a = 1.5 + 0.5 * (-6.0f64).exp();
        assert!((tr.last()[0] - a).abs() < 1e-8);
        assert!(tr.max_total_drift() < 1e-12);
        let csv = tr.to_csv(&sys.species);
        assert!(csv.starts_with("t,A,B,total1\n"));
    }

    #[test]
    fn steady_state_in_class() {
        let sys = pair(2, 1);
        let x = find_steady_state(&sys, &[1.0, 5.0], &SteadyStateOptions::default()).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 4.0).abs() < 1e-9);
        assert!(!confirm_multistationarity(&sys, &x, &x));
        let y = find_steady_state(&sys, &[1.0, 2.0], &SteadyStateOptions::default()).unwrap();
        assert!(!confirm_multistationarity(&sys, &x, &y));
    }
}
