use crncdr::io::load_kinetics;
use crncdr::models::{build_model, ModelParams};
use crncdr::network::*;
use crncdr::rational::q;
use crncdr::ReactionNetwork;

fn net(text: &str) -> ReactionNetwork {
    load_kinetics(text).unwrap().network().clone()
}

fn model(name: &str) -> ReactionNetwork {
    build_model(name, &ModelParams::default()).unwrap().network().clone()
}

#[test]
fn anderies_translated_numbers() {
    let n = network_numbers(&model("anderies"));
    assert_eq!((n.m, n.n, n.n_r, n.r, n.l, n.s, n.delta), (3, 4, 4, 4, 2, 2, 0));
    assert!(structural_flags(&model("anderies")).weakly_reversible);
}

#[test]
fn beccs_flags() {
    let f = structural_flags(&model("beccs"));
    assert!(!f.weakly_reversible);
    assert!(f.t_minimal);
    assert!(f.cycle_terminal);
}

#[test]
fn single_reaction_flags() {
    let f = structural_flags(&net("species A, B\nreaction R: A -> B rate k"));
    assert!(!f.weakly_reversible);
    assert!(!f.cycle_terminal);
}

#[test]
fn beccs_stoichiometric_subspace() {
    let beccs = model("beccs");
    let s = stoichiometric_subspace(&beccs);
    assert_eq!(s.dimension(), 4);
    // A1 A2 A3 A4 A8
    for v in [[1, -1, 0, 0, 0], [0, -1, 1, 0, 0], [0, 1, 0, -1, 0], [-1, 0, 0, 0, 1]] {
        assert!(s.contains(&v.map(q)));
    }
    assert_eq!(stoichiometric_subspace(&model("ar")).dimension(), 4);
}

#[test]
fn reversible_pair_subspace() {
    let s = stoichiometric_subspace(&net("species A, B\nreaction R1: A -> B rate k1\nreaction R2: B -> A rate k2"));
    assert_eq!(s.dimension(), 1);
    assert!(s.contains(&[q(1), q(-1)]));
}

#[test]
fn conservation() {
    let v = is_conservative(&model("beccs"));
    assert!(v.holds);
    let w = v.witness.unwrap();
    assert!(w.iter().all(|x| *x == w[0]));
    assert!(is_conservative(&model("ar")).holds);
    assert!(!is_conservative(&net("species A\nreaction R: A -> 2 A rate k")).holds);
}

#[test]
fn positive_dependence() {
    assert!(is_positively_dependent(&model("beccs")).holds);
    assert!(!is_positively_dependent(&net("species A, B\nreaction R: A -> B rate k")).holds);
    let v = is_positively_dependent(&net("species A, B\nreaction R1: A -> B rate k1\nreaction R2: B -> A rate k2"));
    assert!(v.holds);
    assert_eq!(v.witness.unwrap(), vec![q(1), q(1)]);
}

#[test]
fn concordance_verdicts() {
    assert!(matches!(concordance(&model("beccs")).unwrap(), Concordance::Discordant { .. }));
    assert!(matches!(concordance(&model("ar")).unwrap(), Concordance::Discordant { .. }));
    let pair = net("species A, B\nreaction R1: A -> B rate k1\nreaction R2: B -> A rate k2");
    assert_eq!(concordance(&pair).unwrap(), Concordance::Concordant);
}

#[test]
fn discordance_witness_is_consistent() {
    let beccs = model("beccs");
    let Concordance::Discordant { alpha, sigma } = concordance(&beccs).unwrap() else { panic!() };
    let s = stoichiometric_subspace(&beccs);
    assert!(s.contains(&sigma));
    assert!(sigma.iter().any(|x| *x != q(0)));
    let mut sum = vec![q(0); beccs.m()];
    for (i, a) in alpha.iter().enumerate() {
        for (acc, v) in sum.iter_mut().zip(beccs.reaction_vector(i)) {
            *acc += a * v;
        }
    }
    assert!(sum.iter().all(|x| *x == q(0)));
}

#[test]
fn regularity() {
    assert!(is_regular(&model("beccs")).regular);
    assert!(is_regular(&model("ar")).regular);
    let r = is_regular(&net("species A, B\nreaction R: A -> B rate k"));
    assert!(!r.regular);
    assert!(r.violation.is_some());
}

#[test]
fn beccs_cut_pairs() {
    let beccs = model("beccs");
    let cuts = cut_pairs(&beccs);
    let idx = |s: &str| beccs.complex_by_name(s).unwrap();
    let find = |a: &str, b: &str| {
        cuts.iter()
            .find(|c| (c.a, c.b) == (idx(a), idx(b)) || (c.a, c.b) == (idx(b), idx(a)))
            .unwrap_or_else(|| panic!("{a} {b} not a cut pair"))
            .clone()
    };
    let c = find("A1+2A2", "2A1+A2");
    assert_eq!((c.side_a.len(), c.side_b.len()), (1, 1));
    let c = find("A2", "A3");
    let (big, small) = if c.side_a.len() > c.side_b.len() { (c.side_a, c.side_b) } else { (c.side_b, c.side_a) };
    assert_eq!(small, vec![idx("A3")]);
    let mut want = vec![idx("A1"), idx("A8"), idx("A4"), idx("A2")];
    want.sort();
    let mut big = big;
    big.sort();
    assert_eq!(big, want);
}

#[test]
fn chain_cut_pairs() {
    let chain = net("species A, B, C\nreaction R1: A -> B rate k1\nreaction R2: B -> C rate k2");
    assert_eq!(cut_pairs(&chain).len(), 2);
}

#[test]
fn linkage_independence() {
    assert!(!linkage_class_independence(&model("beccs")));
    assert!(!linkage_class_independence(&model("ar")));
    let two = net("species A, B, C, D\nreaction R1: A -> B rate k1\nreaction R2: B -> A rate k2\nreaction R3: C -> D rate k3\nreaction R4: D -> C rate k4");
    assert!(linkage_class_independence(&two));
}

#[test]
fn invalid_networks_rejected() {
    assert!(ReactionNetwork::from_pairs(vec!["A".into()], vec![("R".into(), vec![q(1)], vec![q(1)])]).is_err());
    assert!(load_kinetics("species A, B\nreaction R: A -> B rate k\nreaction R: B -> A rate k").is_err());
}
