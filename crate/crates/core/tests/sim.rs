use crncdr::models::{build_model, ModelParams};
use crncdr::rational::{q, qf};
use crncdr::sim::*;
use crncdr::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn system(name: &str, p: ModelParams) -> NumericSystem {
    NumericSystem::from_kinetics(&build_model(name, &p).unwrap()).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * x.abs().max(1.0))
}

/// Q-null orders p = (1, 2), q = (1, 1) with unit constants.
fn qnull(name: &str) -> NumericSystem {
    system(name, ModelParams::default().orders(q(1), q(2), q(1), q(1)).rates(&vec![q(1); 7]))
}

#[test]
fn equilibrium_start_stays_put() {
    let sys = qnull("anderies");
    let tr = integrate(&sys, &[1.0, 1.0, 1.0], 50.0, &IntegrateOptions::default()).unwrap();
    assert!(close(tr.last(), &[1.0, 1.0, 1.0], 1e-10));
}

#[test]
fn beccs_conserves_total_carbon() {
    let sys = system("beccs", ModelParams::default().orders(q(4), q(2), q(3), q(2)).rates(&vec![q(1); 7]));
    assert_eq!(sys.conservation.len(), 1);
    let tr = integrate(&sys, &[0.5, 2.0, 1.0, 3.0, 0.2], 100.0, &IntegrateOptions::default()).unwrap();
    assert!(tr.max_total_drift() < 1e-8);
    let sum0: f64 = tr.x[0].iter().sum();
    let sum1: f64 = tr.last().iter().sum();
    assert!((sum0 - sum1).abs() < 1e-8 * sum0);
}

#[test]
fn ar_converges_from_ones() {
    let p = ModelParams::default().orders(q(1), q(1), q(2), q(1)).with("e15", q(2)).with("f15", q(-1)).rates(&vec![q(1); 7]);
    let sys = system("ar", p);
    let tr = integrate(&sys, &[1.0; 5], 2000.0, &IntegrateOptions::default()).unwrap();
    let f = sys.rhs(tr.last());
    assert!(f.iter().all(|v| v.abs() < 1e-8), "{f:?}");
}

#[test]
fn anderies_qnull_a1_is_one() {
    let sys = qnull("anderies");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..8 {
        let x0: Vec<f64> = (0..3).map(|_| rng.gen_range(0.1..10.0)).collect();
        let x = find_steady_state(&sys, &x0, &SteadyStateOptions::default()).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-8, "{x:?}");
    }
}

#[test]
fn dac_qnull_parametrization() {
    let (am, beta) = (qf(1, 2), q(3));
    let p = ModelParams::default()
        .orders(q(1), q(2), q(1), q(1))
        .with("k1", q(1))
        .with("k2", q(1))
        .with("a_m", am)
        .with("beta", beta)
        .with("k5", q(2))
        .with("k6", qf(1, 2))
        .with("k7", q(4));
    let sys = system("dac", p);
    let x = find_steady_state(&sys, &[1.0, 2.0, 0.5, 1.5, 0.7], &SteadyStateOptions::default()).unwrap();
    let a2 = x[1];
    assert!((x[0] - 1.0).abs() < 1e-8);
    assert!((x[2] - a2 / 3.0).abs() < 1e-8);
    assert!((x[3] - 0.25 * a2).abs() < 1e-8);
    assert!((x[4] - 0.125 * a2).abs() < 1e-8);
}

#[test]
fn steady_states_are_fixed_points() {
    let sys = system("beccs", ModelParams::default().orders(q(1), q(1), q(2), q(1)).rates(&vec![q(1); 7]));
    let x = find_steady_state(&sys, &[2.0, 1.0, 0.5, 1.0, 3.0], &SteadyStateOptions::default()).unwrap();
    assert!(sys.residual(&x) < EQUILIBRIUM_RESIDUAL);
    let tr = integrate(&sys, &x, 10.0, &IntegrateOptions::default()).unwrap();
    assert!(close(tr.last(), &x, 1e-8));
}

#[test]
fn qnull_single_cluster_per_class() {
    for name in ["anderies", "dac"] {
        let sys = qnull(name);
        let m = sys.m();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut found: Vec<Vec<f64>> = Vec::new();
        // boundary equilibria (some A_i = 0) exist too; only the interior one is unique
        while found.len() < 8 {
            // random point with total carbon 10
            let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..1.0)).collect();
            let s: f64 = raw.iter().sum();
            let x0: Vec<f64> = raw.iter().map(|v| 10.0 * v / s).collect();
            if let Ok(x) = find_steady_state(&sys, &x0, &SteadyStateOptions::default()) {
                if x.iter().all(|v| *v > 1e-6) {
                    found.push(x);
                }
            }
        }
        for x in &found[1..] {
            assert!(close(x, &found[0], 1e-6), "{name}: {x:?} vs {:?}", found[0]);
        }
    }
}

#[test]
fn invalid_inputs() {
    let sys = qnull("anderies");
    assert!(matches!(integrate(&sys, &[1.0, -1.0, 1.0], 1.0, &IntegrateOptions::default()), Err(Error::InvalidParameter(_))));
    assert!(matches!(integrate(&sys, &[1.0, 1.0], 1.0, &IntegrateOptions::default()), Err(Error::InvalidParameter(_))));
    let symbolic = build_model("beccs", &ModelParams::default()).unwrap();
    assert!(NumericSystem::from_kinetics(&symbolic).is_err());
}

#[test]
fn csv_layout() {
    let sys = qnull("anderies");
    let tr = integrate(&sys, &[1.0, 2.0, 3.0], 1.0, &IntegrateOptions::default()).unwrap();
    let csv = tr.to_csv(&sys.species);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,A1,A2,A3,total1"));
    assert_eq!(lines.count(), tr.t.len());
}
