use crncdr::acr::{classify_orders, ClassKind};
use crncdr::decomposition::{finest_independent_decomposition, is_independent};
use crncdr::doa::{confluence_vectors, cut_pair_sums_cancel, doa_search, terminal_condition, DoaOptions, DoaOutcome};
use crncdr::injectivity::{analyze as injectivity, Verdict as Inj};
use crncdr::io::{from_json, parse, serialize, to_json, NetworkDocument};
use crncdr::kinetics::{emission_power_law, EmissionParams, KineticOrder, RateConstant};
use crncdr::linalg::{dot, rank, SubspaceBasis};
use crncdr::lp::{LinearSystem, Relation};
use crncdr::models::{build_model, ModelParams};
use crncdr::network::{cut_pairs, is_conservative, network_numbers, split_count, stoichiometric_subspace};
use crncdr::rational::{q, qf, Q};
use crncdr::sim::NumericSystem;
use crncdr::transforms::{apply_transform, vcb_analysis, TransformStep};
use crncdr::{PowerLawKinetics, ReactionNetwork};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn small_q() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| qf(n, d))
}

fn complex(m: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(0i64..=2, m).prop_map(|v| v.into_iter().map(q).collect())
}

/// Random valid network on 2-4 species with 1-5 reactions.
fn network() -> impl Strategy<Value = ReactionNetwork> {
    (2usize..=4)
        .prop_flat_map(|m| prop::collection::vec((complex(m), complex(m)), 1..=5).prop_map(move |p| (m, p)))
        .prop_filter_map("degenerate network", |(m, pairs)| {
            let species: Vec<String> = (1..=m).map(|i| format!("X{i}")).collect();
            let pairs: Vec<_> = pairs.into_iter().enumerate().map(|(i, (a, b))| (format!("R{}", i + 1), a, b)).collect();
            ReactionNetwork::from_pairs(species, pairs).ok()
        })
}

/// Power-law kinetics on a random network: numeric orders on reactant species, symbolic constants.
fn kinetics() -> impl Strategy<Value = PowerLawKinetics> {
    network().prop_flat_map(|net| {
        let m = net.m();
        let r = net.r();
        prop::collection::vec(prop::collection::vec(small_q(), m), r).prop_map(move |raw| {
            let orders = net
                .reactions()
                .iter()
                .zip(raw)
                .map(|(rx, row)| {
                    let y = &net.complexes()[rx.reactant];
                    row.into_iter().zip(y).map(|(o, c)| KineticOrder::Value(if c.is_zero() { Q::zero() } else { o })).collect()
                })
                .collect();
            let rates = (1..=r).map(|i| RateConstant::symbol(format!("k{i}"))).collect();
            PowerLawKinetics::new(net.clone(), orders, rates, Default::default(), Default::default()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn network_number_inequalities(net in network()) {
        let n = network_numbers(&net);
        prop_assert!(n.delta >= 0);
        prop_assert_eq!(n.delta, n.n as i64 - n.l as i64 - n.s as i64);
        prop_assert!(n.t >= n.l);
        prop_assert!(n.sl >= n.t);
        prop_assert!(n.n_r <= n.n);
    }

    #[test]
    fn conservation_witness_is_valid(net in network()) {
        let v = is_conservative(&net);
        if let Some(w) = v.witness {
            prop_assert!(v.holds);
            prop_assert!(w.iter().all(|c| c.is_positive()));
            for i in 0..net.r() {
                prop_assert!(dot(&w, &net.reaction_vector(i)).is_zero());
            }
        } else {
            prop_assert!(!v.holds);
        }
    }

    #[test]
    fn cut_pairs_split_in_two(net in network()) {
        let cuts = cut_pairs(&net);
        for (a, b) in net.adjacent_pairs() {
            let pieces = split_count(&net, a, b);
            let reported = cuts.iter().any(|c| (c.a.min(c.b), c.a.max(c.b)) == (a.min(b), a.max(b)));
            prop_assert_eq!(pieces == 2, reported);
            prop_assert!(pieces <= 2);
        }
    }

    #[test]
    fn fid_blocks_partition_reactions(net in network()) {
        let d = finest_independent_decomposition(&net);
        let mut all: Vec<usize> = d.blocks.iter().flatten().copied().collect();
        all.sort();
        prop_assert_eq!(all, (0..net.r()).collect::<Vec<_>>());
        let total: usize = d.subspaces.iter().map(|s| s.dimension()).sum();
        prop_assert_eq!(d.independent, total == stoichiometric_subspace(&net).dimension());
        prop_assert!(d.independent);
        prop_assert!(is_independent(&net, &d.blocks));
    }

    #[test]
    fn subspace_basis_invariants(gens in prop::collection::vec(prop::collection::vec(small_q(), 4), 0..5)) {
        let s = SubspaceBasis::span(4, &gens);
        prop_assert_eq!(s.dimension(), rank(&gens, 4));
        prop_assert_eq!(rank(&s.vectors, 4), s.dimension());
        for g in &gens {
            prop_assert!(s.contains(g));
        }
        let perp = s.orthogonal_complement();
        prop_assert_eq!(s.dimension() + perp.dimension(), 4);
        for a in &s.vectors {
            for b in &perp.vectors {
                prop_assert!(dot(a, b).is_zero());
            }
        }
        prop_assert_eq!(SubspaceBasis::span(4, &s.vectors), s);
    }

    #[test]
    fn lp_solutions_satisfy_constraints(
        rows in prop::collection::vec((prop::collection::vec(small_q(), 3), 0u8..3, small_q()), 1..6),
        nonneg in prop::collection::vec(any::<bool>(), 3),
    ) {
        let mut lp = LinearSystem::new(3);
        for (i, nn) in nonneg.iter().enumerate() {
            if *nn {
                lp.set_nonneg(i);
            }
        }
        for (c, rel, rhs) in rows {
            let rel = [Relation::Le, Relation::Eq, Relation::Ge][rel as usize];
            lp.add(c, rel, rhs);
        }
        if let Some(x) = lp.solve() {
            prop_assert!(lp.satisfied_by(&x));
            for (i, nn) in nonneg.iter().enumerate() {
                prop_assert!(!nn || !x[i].is_negative());
            }
        }
    }

    #[test]
    fn emission_orders_sum_to_one(l in 0i64..=20, u in 0i64..=20, a4 in 1i64..=500, ai in 1i64..=500) {
        let p = EmissionParams { lambda: qf(l, 20), mu: qf(u, 20), a4: qf(a4, 10), ai: qf(ai, 10) };
        if let Ok((e, f)) = emission_power_law(&p) {
            prop_assert_eq!(&e + &f, Q::one());
            prop_assert!(e >= Q::one());
            prop_assert!(!f.is_positive());
        } else {
            prop_assert!(p.a4 <= p.leak() * &p.ai);
        }
    }

    #[test]
    fn classify_rules_and_scaling(p1 in small_q(), p2 in small_q(), q1 in small_q(), q2 in small_q(), c in 1i64..5) {
        let a = classify_orders(&p1, &p2, &q1, &q2);
        match a.kind {
            ClassKind::PNull => prop_assert!(p1 == p2 && q1 != q2),
            ClassKind::QNull => prop_assert!(q1 == q2 && p1 != p2),
            ClassKind::Undefined => prop_assert!(p1 == p2 && q1 == q2),
            _ => prop_assert!(p1 != p2 && q1 != q2),
        }
        let c = q(c);
        let b = classify_orders(&p1, &(&p1 + (&p2 - &p1) * &c), &q1, &(&q1 + (&q2 - &q1) * &c));
        prop_assert_eq!(a.kind, b.kind);
    }

    #[test]
    fn dsl_and_json_round_trip(kin in kinetics()) {
        let doc = NetworkDocument::from_kinetics(&kin);
        let text = serialize(&doc);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(serialize(&back), text);
        prop_assert_eq!(from_json(&to_json(&doc)).unwrap(), doc);
    }

    #[test]
    fn injectivity_determinant_homogeneous(kin in kinetics()) {
        // the criterion needs reactant-determined kinetics; other draws are skipped
        prop_assume!(crncdr::kinetics::is_pl_rdk(&kin));
        let (det, _) = injectivity(&kin).unwrap();
        if !det.is_zero() {
            prop_assert!(det.is_homogeneous_in(|s| s.starts_with('k')).is_some());
            prop_assert!(det.is_homogeneous_in(|s| s.starts_with('z')).is_some());
        }
    }
}

fn beccs(p1: Q, p2: Q, q1: Q, q2: Q) -> PowerLawKinetics {
    build_model("beccs", &ModelParams::default().orders(p1, p2, q1, q2).rates(&vec![q(1); 7])).unwrap()
}

fn positive_point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..20.0, 5)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn transforms_keep_dynamics(
        shift in complex(5),
        weights in prop::collection::vec(1i64..5, 2..4),
        pick in 0usize..7,
        x in prop::collection::vec(positive_point(), 100),
    ) {
        let kin = beccs(q(2), q(1), q(1), q(2));
        let label = kin.network().reactions()[pick].label.clone();
        let total: i64 = weights.iter().sum();
        let steps = vec![
            TransformStep::Shift { reaction: label.clone(), by: shift },
            TransformStep::Split { reaction: label, weights: weights.iter().map(|w| qf(*w, total)).collect() },
        ];
        let out = apply_transform(&kin, &steps).unwrap();
        prop_assert_eq!(stoichiometric_subspace(out.network()), stoichiometric_subspace(kin.network()));
        let a = NumericSystem::from_kinetics(&kin).unwrap();
        let b = NumericSystem::from_kinetics(&out).unwrap();
        for pt in &x {
            let (fa, fb) = (a.rhs(pt), b.rhs(pt));
            let scale = fa.iter().fold(1.0f64, |s, v| s.max(v.abs()));
            for (u, v) in fa.iter().zip(&fb) {
                prop_assert!((u - v).abs() <= 1e-12 * scale, "{u} vs {v}");
            }
        }
    }

    #[test]
    fn vcb_constants_balance_exactly(d in 1i64..4, p1 in 0i64..4, q1 in 0i64..4) {
        // balanced negative: p2 - p1 = q2 - q1 with opposite signs
        let kin = beccs(q(p1 + d), q(p1), q(q1), q(q1 + d));
        let v = vcb_analysis(&kin).unwrap();
        let wr = crncdr::transforms::beccs_wr_transform(&kin).unwrap();
        let net = wr.network();
        for c in 0..net.n() {
            let mut flow = Q::zero();
            for (rx, k) in net.reactions().iter().zip(&v.transform_rates) {
                if rx.product == c { flow += k; }
                if rx.reactant == c { flow -= k; }
            }
            prop_assert!(flow.is_zero());
        }
        prop_assert!(v.transform_rates.iter().all(|k| *k >= Q::one()));
    }

    #[test]
    fn injective_means_no_witness(p1 in -3i64..=3, p2 in -3i64..=3, q1 in -3i64..=3, q2 in -3i64..=3) {
        let kin = beccs(q(p1), q(p2), q(q1), q(q2));
        let (_, v) = injectivity(&kin).unwrap();
        if v.verdict == Inj::Injective {
            prop_assert_eq!(doa_search(&kin, DoaOptions::default()).unwrap(), DoaOutcome::NoWitness);
        }
    }
}

#[test]
fn confluence_vectors_meet_conditions() {
    for name in ["beccs", "ar"] {
        let kin = build_model(name, &ModelParams::default()).unwrap();
        let net = kin.network();
        for union_form in [false, true] {
            for h in confluence_vectors(net, union_form) {
                for s in 0..net.m() {
                    let y: Q = (0..net.n()).map(|c| &net.complexes()[c][s] * &h[c]).sum();
                    assert!(y.is_zero(), "{name}: Y h != 0");
                }
                for class in net.linkage_classes() {
                    let sum: Q = class.iter().map(|&c| h[c].clone()).sum();
                    assert!(sum.is_zero(), "{name}: linkage class sum");
                }
                assert!(terminal_condition(net, &h, union_form));
                assert!(cut_pair_sums_cancel(net, &h));
            }
        }
    }
}

#[test]
fn witness_satisfies_its_relations() {
    let kin = beccs(q(4), q(2), q(3), q(2));
    let DoaOutcome::Multistationary(w) = doa_search(&kin, DoaOptions::default()).unwrap() else { panic!("no witness") };
    for rel in &w.system.relations {
        let v = dot(&rel.coeffs, &w.mu);
        assert!(if rel.strict { v.is_positive() } else { v.is_zero() }, "{}", rel.text);
    }
    let s = stoichiometric_subspace(kin.network());
    let sign: Vec<i8> = w.mu.iter().map(|m| if m.is_positive() { 1 } else if m.is_negative() { -1 } else { 0 }).collect();
    assert!(crncdr::lp::sign_realizable(&s, &sign));
    assert!(w.mu.iter().any(|m| !m.is_zero()));
}
