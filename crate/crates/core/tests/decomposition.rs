use crncdr::decomposition::*;
use crncdr::io::load_kinetics;
use crncdr::models::{build_model, ModelParams};
use crncdr::network::linkage_class_reactions;
use crncdr::rational::q;
use crncdr::PowerLawKinetics;

/// P-null instance p = (1, 1), q = (2, 1) with unit constants.
fn pnull(name: &str) -> PowerLawKinetics {
    let mut p = ModelParams::default().orders(q(1), q(1), q(2), q(1)).rates(&vec![q(1); 7]);
    if name == "ar" {
        p = p.with("e15", q(2)).with("f15", q(-1));
    }
    build_model(name, &p).unwrap()
}

/// Flux balance on the five-reaction block at A1 = tau: A1 A2^2 - A1 A2 = A1, so A2 solves
/// A2^2 - A2 - 1 = 0; the capture/storage/emission chain then forces A8 (or A15) = A4 = tau,
/// and the A2/A3 block gives A3 = A2.
fn stitched(tau: f64) -> Vec<f64> {
    let a2 = (1.0 + 5f64.sqrt()) / 2.0;
    vec![tau, a2, a2, tau, tau]
}

#[test]
fn beccs_and_ar_blocks() {
    for name in ["beccs", "ar"] {
        let kin = pnull(name);
        let net = kin.network();
        let d = finest_independent_decomposition(net);
        assert!(d.independent);
        let r3 = net.reaction_index("R3").unwrap();
        let r4 = net.reaction_index("R4").unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert!(d.blocks.contains(&vec![r3, r4]));
        assert!(d.blocks.iter().any(|b| b.len() == 5));
    }
}

#[test]
fn independent_vectors_give_singletons() {
    let kin = load_kinetics("species A, B, C\nreaction R1: A -> B rate k1\nreaction R2: B -> C rate k2").unwrap();
    let d = finest_independent_decomposition(kin.network());
    assert_eq!(d.blocks, vec![vec![0], vec![1]]);
}

#[test]
fn independence_checks() {
    let net = build_model("beccs", &ModelParams::default()).unwrap().network().clone();
    assert!(is_independent(&net, &finest_independent_decomposition(&net).blocks));
    assert!(!is_independent(&net, &linkage_class_reactions(&net)));
    assert!(is_independent(&net, &[(0..net.r()).collect()]));
}

#[test]
fn stitched_equilibrium_passes_every_block() {
    for name in ["beccs", "ar"] {
        let kin = pnull(name);
        let d = finest_independent_decomposition(kin.network());
        for tau in [1.0, 0.3, 4.0] {
            let res = verify_equilibria_intersection(&kin, &d.blocks, &stitched(tau)).unwrap();
            assert!(all_blocks_at_equilibrium(&res), "{name} tau {tau}: {res:?}");
        }
        let res = verify_equilibria_intersection(&kin, &d.blocks, &[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert!(!all_blocks_at_equilibrium(&res));
    }
}

#[test]
fn symbolic_kinetics_rejected() {
    let kin = build_model("beccs", &ModelParams::default()).unwrap();
    let d = finest_independent_decomposition(kin.network());
    assert!(verify_equilibria_intersection(&kin, &d.blocks, &[1.0; 5]).is_err());
}
