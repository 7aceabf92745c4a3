use std::collections::BTreeMap;

use proptest::prelude::*;

use cat0_classify::classify::{analyze_join, doubled_nerve, quotient_k, JoinComplex, SphereModel};
use cat0_classify::covers::{parse_complex, write_complex};
use cat0_classify::group::{classify, GroupSpec, Isometry};
use cat0_classify::homology::{analyze_simplicial, SimplicialComplex};
use cat0_classify::model::{ModelSpace, TreeAutomorphism, TreePoint, TreeSpace};
use cat0_classify::rational::{q, qi};

fn complex(max_vertices: usize, max_dim: usize) -> impl Strategy<Value = SimplicialComplex> {
    (2..=max_vertices).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::btree_set(0..n as u32, 1..=max_dim + 1), 1..6).prop_map(move |facets| {
            let labels = (0..n).map(|i| format!("x{i}")).collect();
            SimplicialComplex::from_simplices(labels, facets.into_iter().map(|s| s.into_iter().collect()))
        })
    })
}

fn tree_point() -> impl Strategy<Value = TreePoint> {
    (0u32..=8).prop_flat_map(|level| {
        let addrs = if level == 0 { 1 } else { 1u64 << level };
        (0..addrs, 0i64..8).prop_map(move |(addr, up)| {
            let t = TreeSpace::new(8, true);
            let up = if level == 0 { qi(0) } else { t.edge_weight(level) * q(up, 8) };
            TreePoint { level, addr, up }
        })
    })
}

/// Words in the generators of a wallpaper preset.
fn element(name: &'static str) -> impl Strategy<Value = (GroupSpec, Isometry)> {
    prop::collection::vec((0usize..8, any::<bool>()), 0..6).prop_map(move |word| {
        let g = GroupSpec::preset(name, 6).unwrap();
        let mut x = g.identity();
        for (i, inv) in word {
            let s = &g.generators[i % g.generators.len()];
            let s = if inv { s.inverse(&g.space) } else { s.clone() };
            x = x.compose(&g.space, &s);
        }
        (g, x)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn complex_text_round_trips(c in complex(7, 3)) {
        let header = BTreeMap::from([("kind".to_string(), "test".to_string())]);
        let text = write_complex(&c, &header);
        let (h, back) = parse_complex(&text).unwrap();
        prop_assert_eq!(h, header);
        prop_assert_eq!(back.simplex_set(), c.simplex_set());
        prop_assert_eq!(write_complex(&back, &BTreeMap::new()), write_complex(&c, &BTreeMap::new()));
    }

    #[test]
    fn tree_distance_is_a_metric(a in tree_point(), b in tree_point(), c in tree_point(), k in 1i64..256) {
        let t = TreeSpace::new(8, true);
        let d = |x: &TreePoint, y: &TreePoint| t.distance(x, y);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        prop_assert_eq!(d(&a, &a), qi(0));
        let phi = TreeAutomorphism::Odometer(k);
        prop_assert_eq!(d(&phi.apply(&t, &a), &phi.apply(&t, &b)), d(&a, &b));
        // four-point condition for trees
        let m = t.median(&a, &b, &c);
        prop_assert_eq!(d(&a, &m) + d(&m, &b), d(&a, &b));
    }

    #[test]
    fn conjugation_preserves_translation_length((g, x) in element("pmm"), (_, h) in element("pmm")) {
        let y = x.conjugate(&g.space, &h);
        prop_assert!(g.contains(&y));
        prop_assert_eq!(classify(&g, &x).unwrap().translation_length2(), classify(&g, &y).unwrap().translation_length2());
        prop_assert!(x.compose(&g.space, &x.inverse(&g.space)).is_identity(&g.space));
    }

    #[test]
    fn glide_words_stay_in_pg((g, x) in element("pg")) {
        prop_assert!(g.contains(&x));
        if let ModelSpace::Euclidean(_) = &g.space {
            let o = g.space.origin();
            prop_assert_eq!(g.space.dist2(&o, &x.apply(&g.space, &o)).unwrap(), x.displacement2(&g.space, &o));
        }
    }

    #[test]
    fn join_homology_matches_direct(a in complex(4, 2), b in complex(4, 2)) {
        let j = JoinComplex::new(a.clone(), b.clone());
        let direct = analyze_simplicial(&j.to_simplicial(100_000).unwrap()).homology;
        let fast = analyze_join(&j, 100_000).unwrap().homology;
        prop_assert_eq!(&direct.betti, &fast.betti);
        prop_assert_eq!(direct.is_acyclic(), fast.is_acyclic());
    }

    #[test]
    fn quotient_is_product_with_sphere(c in complex(6, 2), n in 1usize..=3) {
        let k = quotient_k(&doubled_nerve(&c), n).unwrap();
        let sphere = SphereModel::new(n);
        prop_assert_eq!(k.cell_count(), c.simplex_count() * sphere.complex.simplex_count());
        prop_assert_eq!(k.self_identified, 0);
        prop_assert_eq!(k.two_preimages, 2 * k.cell_count());
        let chain = k.chain_complex();
        prop_assert!(chain.is_complex());
        // Euler characteristic is multiplicative
        let chi_s = if n % 2 == 0 { 2 } else { 0 };
        prop_assert_eq!(chain.euler_characteristic(), c.euler_characteristic() * chi_s);
    }
}
