use crncdr::injectivity::*;
use crncdr::io::load_kinetics;
use crncdr::kinetics::SignAssumption;
use crncdr::models::{build_model, ModelParams};
use crncdr::poly::SparsePolynomial;
use crncdr::rational::q;
use std::collections::BTreeMap;

fn constant(p: &SparsePolynomial) -> Option<crncdr::Q> {
    match p.num_terms() {
        0 => Some(q(0)),
        1 => p.terms().next().filter(|(m, _)| m.is_empty()).map(|(_, c)| c.clone()),
        _ => None,
    }
}

#[test]
fn reversible_pair_m_star() {
    let kin = load_kinetics("species A, B\nreaction R1: A -> B rate k1 * A\nreaction R2: B -> A rate k2 * B").unwrap();
    let m = build_m_star(&kin).unwrap();
    assert_eq!(m.len(), 2);
    assert_eq!(m[1].iter().map(constant).collect::<Vec<_>>(), vec![Some(q(1)), Some(q(1))]);
}

#[test]
fn beccs_m_star_conservation_row() {
    let kin = build_model("beccs", &ModelParams::default()).unwrap();
    let m = build_m_star(&kin).unwrap();
    assert_eq!(m.len(), 5);
    assert!(m.iter().all(|row| row.len() == 5));
    let last: Vec<_> = m[4].iter().map(constant).collect();
    let first = last[0].clone().unwrap();
    assert!(first != q(0) && last.iter().all(|c| c.as_ref() == Some(&first)));
}

#[test]
fn two_by_two_determinant() {
    let v = SparsePolynomial::var;
    let det = determinant(&[vec![v("a"), v("b")], vec![v("c"), v("d")]]).unwrap();
    let want = &(&v("a") * &v("d")) - &(&v("b") * &v("c"));
    assert_eq!(det, want);
}

#[test]
fn ar_positive_terms() {
    let kin = build_model("ar", &ModelParams::default()).unwrap();
    let (det, _) = analyze(&kin).unwrap();
    let has = |syms: &[&str]| {
        det.terms().any(|(m, _)| {
            let mut got: Vec<&str> = m.keys().map(|s| s.as_str()).collect();
            got.sort();
            let mut want = syms.to_vec();
            want.sort();
            got == want
        })
    };
    assert!(has(&["e15", "k1", "k2", "k4", "k5", "z3", "z5", "z6", "z7"]));
    assert!(has(&["e15", "k1", "k3", "k4", "k5", "z4", "z5", "z6", "z7"]));
}

#[test]
fn homogeneous_on_fixtures() {
    for name in ["anderies", "beccs", "ar", "dac"] {
        let kin = build_model(name, &ModelParams::default()).unwrap();
        let (det, _) = analyze(&kin).unwrap();
        let m = kin.network().m() as u32;
        let d = kin.network().stoichiometric_matrix().len() as u32 - crncdr::network::network_numbers(kin.network()).s as u32;
        assert_eq!(det.is_homogeneous_in(|s| s.starts_with('k') || s.starts_with('z')), Some(2 * (m - d)), "{name}");
    }
}

fn verdict(assume: &[(&str, SignAssumption)]) -> Verdict {
    let kin = build_model("beccs", &ModelParams::default()).unwrap();
    let (det, _) = analyze(&kin).unwrap();
    let a: BTreeMap<String, SignAssumption> = assume.iter().map(|(s, v)| (s.to_string(), *v)).collect();
    injectivity_verdict(&det, &positive_symbols(5, 7), &a).verdict
}

#[test]
fn verdicts_under_assumptions() {
    use SignAssumption::*;
    assert_eq!(verdict(&[("p1", Neg), ("p2", Pos), ("q1", Pos), ("q2", Neg)]), Verdict::Injective);
    assert_eq!(verdict(&[]), Verdict::Indeterminate);
    let kin = build_model("beccs", &ModelParams::default().orders(q(-1), q(1), q(0), q(0))).unwrap();
    assert_eq!(analyze(&kin).unwrap().1.verdict, Verdict::Injective);
    let kin = build_model("beccs", &ModelParams::default().orders(q(4), q(2), q(3), q(2))).unwrap();
    let v = analyze(&kin).unwrap().1;
    assert_eq!(v.verdict, Verdict::NotInjective);
    assert!(!v.terms.is_empty());
}

#[test]
fn verdict_survives_rescaling() {
    let kin = build_model("beccs", &ModelParams::default().orders(q(-1), q(2), q(3), q(-2))).unwrap();
    let (det, v) = analyze(&kin).unwrap();
    for sym in ["k1", "k3", "z2", "z7"] {
        let mut scaled = SparsePolynomial::zero();
        for (m, c) in det.terms() {
            let e = m.get(sym).copied().unwrap_or(0);
            scaled.add_term(m.clone(), c * q(3).pow(e as i32));
        }
        let w = injectivity_verdict(&scaled, &positive_symbols(5, 7), kin.assumptions());
        assert_eq!(w.verdict, v.verdict, "{sym}");
    }
}

#[test]
fn non_rdk_rejected() {
    let kin = load_kinetics("species A, B, C\nreaction R1: A -> B rate k1 * A\nreaction R2: A -> C rate k2 * A^2").unwrap();
    assert!(matches!(analyze(&kin), Err(crncdr::Error::NotRdk(_, _))));
}
