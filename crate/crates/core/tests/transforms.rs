use crncdr::models::{build_model, ModelParams};
use crncdr::network::{network_numbers, stoichiometric_subspace, structural_flags};
use crncdr::rational::{q, qf};
use crncdr::sim::NumericSystem;
use crncdr::transforms::*;
use crncdr::{Error, PowerLawKinetics};

fn beccs(p1: i64, p2: i64, q1: i64, q2: i64) -> PowerLawKinetics {
    build_model("beccs", &ModelParams::default().orders(q(p1), q(p2), q(q1), q(q2)).rates(&vec![q(1); 7])).unwrap()
}

#[test]
fn anderies_shift_gives_deficiency_zero() {
    let raw = build_model("anderies_raw", &ModelParams::default()).unwrap();
    let shifted = apply_transform(&raw, &[TransformStep::Shift { reaction: "R2".into(), by: vec![q(1), q(0), q(0)] }]).unwrap();
    let nn = network_numbers(shifted.network());
    assert_eq!(nn.delta, 0);
    assert!(structural_flags(shifted.network()).weakly_reversible);
    let translated = build_model("anderies", &ModelParams::default()).unwrap();
    assert_eq!(shifted.network().complexes(), translated.network().complexes());
}

#[test]
fn split_halves() {
    let kin = beccs(2, 1, 1, 2);
    let out = apply_transform(&kin, &[TransformStep::Split { reaction: "R1".into(), weights: vec![qf(1, 2), qf(1, 2)] }]).unwrap();
    assert_eq!(out.network().r(), 8);
    let a = out.network().reaction_index("R1_a").unwrap();
    let b = out.network().reaction_index("R1_b").unwrap();
    assert_eq!(out.rates()[a], out.rates()[b]);
}

#[test]
fn identity_transform() {
    let kin = beccs(2, 1, 1, 2);
    assert_eq!(apply_transform(&kin, &[]).unwrap(), kin);
}

#[test]
fn bad_steps() {
    let kin = beccs(2, 1, 1, 2);
    let bad = [
        TransformStep::Shift { reaction: "R9".into(), by: vec![q(1); 5] },
        TransformStep::Shift { reaction: "R1".into(), by: vec![q(-1), q(0), q(0), q(0), q(0)] },
        TransformStep::Split { reaction: "R1".into(), weights: vec![qf(1, 2), qf(1, 3)] },
        TransformStep::Split { reaction: "R1".into(), weights: vec![q(2), q(-1)] },
    ];
    for step in bad {
        assert!(matches!(apply_transform(&kin, &[step.clone()]), Err(Error::InvalidStep(_))), "{step:?}");
    }
}

#[test]
fn wr_transform() {
    let kin = beccs(2, 1, 1, 2);
    let wr = beccs_wr_transform(&kin).unwrap();
    let net = wr.network();
    let nn = network_numbers(net);
    assert_eq!((nn.n, nn.l, nn.s, nn.r), (8, 3, 4, 8));
    assert!(structural_flags(net).weakly_reversible);
    assert_eq!(stoichiometric_subspace(net), stoichiometric_subspace(kin.network()));
    let (a, b) = (NumericSystem::from_kinetics(&kin).unwrap(), NumericSystem::from_kinetics(&wr).unwrap());
    let x = [1.0, 2.0, 3.0, 4.0, 5.0];
    let d = a.rhs(&x).iter().zip(b.rhs(&x)).fold(0.0f64, |m, (u, v)| m.max((u - v).abs()));
    assert!(d < 1e-12);
    let dac = build_model("dac", &ModelParams::default()).unwrap();
    assert!(matches!(beccs_wr_transform(&dac), Err(Error::NotBeccs(_))));
}

#[test]
fn kinetic_deficiencies() {
    let translated = build_model("anderies", &ModelParams::default().orders(q(1), q(2), q(2), q(1))).unwrap();
    assert_eq!(kinetic_deficiency(&translated).unwrap(), 0);
    // p1 + q1 = 1 keeps the transform at kinetic deficiency 1
    assert_eq!(kinetic_deficiency(&beccs_wr_transform(&beccs(1, 0, 0, 1)).unwrap()).unwrap(), 1);
}

#[test]
fn balanced_negative() {
    let c = balanced_negative_check(&beccs(2, 1, 1, 2)).unwrap();
    assert!(c.balanced && c.s_equals_kinetic);
    assert_eq!(c.r, "-1");
    assert!(!balanced_negative_check(&beccs(1, 2, 1, 2)).unwrap().balanced);
    let c = balanced_negative_check(&beccs(3, 1, 1, 3)).unwrap();
    assert!(c.balanced && c.s_equals_kinetic);
    assert_eq!(balanced_negative_check(&beccs(1, 2, 1, 1)).unwrap_err(), Error::QDifferenceZero);
}

#[test]
fn vcb_family() {
    let v = vcb_analysis(&beccs(1, 0, 0, 1)).unwrap();
    assert!(v.verified);
    let totals: Vec<f64> = v.totals.iter().map(|t| t[0]).collect();
    assert!(totals.windows(2).all(|w| (w[0] - w[1]).abs() > 1e-6));
    // alpha = 0: the all-ones vector
    let mut doc = crncdr::io::NetworkDocument::from_kinetics(&beccs(1, 0, 0, 1));
    for (st, k) in doc.reactions.iter_mut().zip(&v.rates) {
        st.rate.constant = crncdr::RateConstant::value(k.clone());
    }
    let sys = NumericSystem::from_kinetics(&doc.to_kinetics().unwrap()).unwrap();
    assert!(sys.residual(&[1.0; 5]) < 1e-12);
    assert!(matches!(vcb_analysis(&beccs(1, 2, 1, 2)), Err(Error::InvalidParameter(_))));
}

#[test]
fn reduction_examples() {
    let ones = [q(1), q(1), q(1), q(1), q(1)];
    let r = reduction_feasibility(&ones, &qf(1, 2));
    assert_eq!(r.implied_xi, "1");
    let t = qf(1, 10);
    let r = reduction_feasibility(&[t.clone(), q(10), t.clone(), t.clone(), t], &qf(3, 20));
    assert_eq!(r.implied_xi, "26/125");
    assert!(r.implied_feasible);
    assert!(!r.requested_feasible);
}
