use crncdr::kinetics::KineticOrder;
use crncdr::models::*;
use crncdr::network::{network_numbers, structural_flags};
use crncdr::rational::{q, qf};
use crncdr::Error;

#[test]
fn fixture_numbers() {
    let n = |name: &str| network_numbers(build_model(name, &ModelParams::default()).unwrap().network());
    let a = n("anderies");
    assert_eq!((a.m, a.n, a.r, a.delta), (3, 4, 4, 0));
    let raw = n("anderies_raw");
    assert_eq!((raw.n, raw.l, raw.delta), (6, 3, 1));
    let b = n("beccs");
    assert_eq!((b.m, b.n, b.r), (5, 7, 7));
    // capture draws from A2, so A2 -> A9 -> A4 -> A2 closes a cycle with the ocean pair
    let d = n("dac");
    assert_eq!((d.m, d.n, d.r, d.l, d.s, d.delta), (5, 6, 7, 2, 4, 0));
}

#[test]
fn beccs_orders() {
    let kin = build_model("beccs", &ModelParams::default()).unwrap();
    let f = kin.orders();
    let sym = |s: &str| KineticOrder::Symbol(s.into());
    let one = KineticOrder::Value(q(1));
    let zero = KineticOrder::Value(q(0));
    assert_eq!(f[0], vec![sym("p1"), sym("q1"), zero.clone(), zero.clone(), zero.clone()]);
    assert_eq!(f[1], vec![sym("p2"), sym("q2"), zero.clone(), zero.clone(), zero.clone()]);
    assert_eq!(f[4], vec![zero.clone(), zero.clone(), zero.clone(), one.clone(), zero]);
}

#[test]
fn ar_emission_reaction() {
    let kin = build_model("ar", &ModelParams::default()).unwrap();
    let net = kin.network();
    let r5 = net.reaction_index("R5").unwrap();
    let rx = &net.reactions()[r5];
    assert_eq!(net.complex_name(rx.reactant), "A4+A15");
    assert_eq!(net.complex_name(rx.product), "A2+A15");
    let a4 = net.species_index("A4").unwrap();
    let a15 = net.species_index("A15").unwrap();
    assert_eq!(kin.orders()[r5][a4], KineticOrder::Symbol("e15".into()));
    assert_eq!(kin.orders()[r5][a15], KineticOrder::Symbol("f15".into()));
}

#[test]
fn ar_operating_point_binds_orders() {
    let p = ModelParams { operating_point: Some((q(1), q(1))), ..Default::default() };
    let kin = build_model("ar", &p).unwrap();
    assert_eq!(kin.bindings().get("e15"), Some(&q(2)));
    assert_eq!(kin.bindings().get("f15"), Some(&q(-1)));
}

#[test]
fn portfolios_reproduce_models() {
    for (method, source, name) in [(CdrMethod::Beccs, "A1", "beccs"), (CdrMethod::Ar, "A1", "ar"), (CdrMethod::Dac, "A2", "dac")] {
        let built = rncdr_build(&[CdrSpec::new(method, source)], &ModelParams::default()).unwrap();
        assert_eq!(built, build_model(name, &ModelParams::default()).unwrap(), "{name}");
    }
}

#[test]
fn linear_emission_when_nothing_leaks() {
    for method in CdrMethod::ALL {
        let kin = rncdr_build(&[CdrSpec::new(method, "A1")], &ModelParams::default()).unwrap();
        let nn = network_numbers(kin.network());
        assert!(nn.m >= 5 && nn.n >= 6 && nn.r >= 7);
        let (l, m) = method.fractions();
        let r5 = kin.network().reaction_index("R5").unwrap();
        let linear = kin.network().complex_name(kin.network().reactions()[r5].reactant) == "A4";
        assert_eq!(linear, l == q(1) && m == q(0), "{}", method.code());
    }
}

#[test]
fn portfolio_errors() {
    let spec = CdrSpec::new(CdrMethod::Beccs, "A1");
    assert_eq!(rncdr_build(&[spec.clone(), spec.clone()], &ModelParams::default()), Err(Error::UnsupportedPortfolioSize(2)));
    let bad = CdrSpec { lambda: qf(3, 2), ..spec.clone() };
    assert!(matches!(rncdr_build(&[bad], &ModelParams::default()), Err(Error::InvalidParameter(_))));
    let bad = CdrSpec { source: "A7".into(), ..spec };
    assert!(matches!(rncdr_build(&[bad], &ModelParams::default()), Err(Error::InvalidParameter(_))));
    assert!(matches!(build_model("anderies", &ModelParams::default().with("a_m", q(1)).with("beta", q(-1))), Err(Error::InvalidParameter(_))));
}

#[test]
fn derived_rate_constants() {
    let kin = build_model("anderies", &ModelParams::default().with("a_m", qf(1, 2)).with("beta", q(3))).unwrap();
    assert_eq!(kin.bindings().get("k3"), Some(&qf(1, 2)));
    assert_eq!(kin.bindings().get("k4"), Some(&qf(3, 2)));
}

#[test]
fn weak_reversibility() {
    let f = |name: &str| structural_flags(build_model(name, &ModelParams::default()).unwrap().network()).weakly_reversible;
    assert!(f("anderies") && f("dac"));
    assert!(!f("beccs") && !f("ar"));
}

#[test]
fn notes() {
    assert!(model_notes("beccs")[0].starts_with("sl = 5"));
    assert!(model_notes("ar").is_empty());
}
