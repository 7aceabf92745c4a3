use std::collections::{BTreeMap, HashSet};

use super::*;
use crate::covers::VertexAction;
use crate::group::{GroupSpec, Isometry};
use crate::homology::{analyze_simplicial, full_simplex, simplex_boundary, Contractibility, Homology, SimplicialComplex};
use crate::linalg::QMat;
use crate::rational::qi;

/// Every element reachable by words of length at most `len` in the generators and their inverses.
fn words(g: &GroupSpec, gens: &[Isometry], len: usize) -> HashSet<Isometry> {
    let space = &g.space;
    let letters: Vec<Isometry> = gens.iter().flat_map(|s| [s.clone(), s.inverse(space)]).collect();
    let mut all: HashSet<Isometry> = HashSet::from([g.identity()]);
    let mut frontier = vec![g.identity()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for s in &letters {
                let x = w.compose(space, s);
                if all.insert(x.clone()) {
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    all
}

/// Oracle: rank of the pure translations found among short words, and
/// whether some word reverses a translation direction.
fn word_oracle(g: &GroupSpec, gens: &[Isometry]) -> (usize, bool) {
    let elems = words(g, gens, 6);
    let id = QMat::identity(2);
    let trans: Vec<Vec<_>> = elems
        .iter()
        .filter(|e| e.lin() == Some(&id) && !e.is_identity(&g.space))
        .map(|e| e.trans().unwrap().clone())
        .collect();
    let rank = if trans.is_empty() { 0 } else { QMat::from_rows(trans.clone()).rank() };
    let reverses = rank == 1
        && elems.iter().any(|e| {
            let t = &trans[0];
            let neg: Vec<_> = t.iter().map(|x| -x).collect();
            e.lin().unwrap().mul_vec(t) == neg
        });
    (rank, reverses)
}

#[test]
fn battery_families_match_word_oracle() {
    for name in ["p1", "p2", "pm", "pg", "pmm", "cm", "p4", "p3", "p6"] {
        let g = GroupSpec::preset(name, 4).unwrap();
        for sub in default_battery(&g) {
            let tag = classify_family(&g, &sub.generators).unwrap();
            let (rank, reverses) = word_oracle(&g, &sub.generators);
            let expected = match (rank, reverses) {
                (0, _) => Family::Fin,
                (1, false) => Family::FbcInf,
                (1, true) => Family::VcInfNotFbc,
                _ => Family::NotVc,
            };
            assert_eq!(tag.family, expected, "{name} {}", sub.name);
            assert_eq!(tag.translation_rank, rank, "{name} {}", sub.name);
        }
    }
}

#[test]
fn named_families() {
    let fam = |p: &str, s: &str| {
        let g = GroupSpec::preset(p, 4).unwrap();
        let sub = select_battery(&g, s).unwrap().remove(0);
        classify_family(&g, &sub.generators).unwrap().family
    };
    assert_eq!(fam("pm", "glide"), Family::FbcInf);
    assert_eq!(fam("pg", "glide"), Family::FbcInf);
    assert_eq!(fam("pmm", "Dinf"), Family::VcInfNotFbc);
    assert_eq!(fam("p2", "Dinf"), Family::VcInfNotFbc);
    assert_eq!(fam("p6", "C6"), Family::Fin);
    assert_eq!(fam("p4", "Z2"), Family::NotVc);
    assert_eq!(fam("tree-odometer", "translation"), Family::FbcInf);
    assert_eq!(fam("tree-odometer", "trivial"), Family::Fin);
}

#[test]
fn glide_line_image_agrees_with_stabiliser_oracle() {
    use crate::group::{line_stabilizer_image, LineImage};
    use crate::lines::Line;
    use crate::linalg::int_vec;
    let g = GroupSpec::preset("pg", 4).unwrap();
    let sub = select_battery(&g, "glide").unwrap().remove(0);
    let tag = classify_family(&g, &sub.generators).unwrap();
    assert_eq!(tag.line_image.as_deref(), Some("translations"));
    let axis = Line::through(&g.space, &int_vec(&[0, 0]), &int_vec(&[1, 0])).unwrap();
    let report = line_stabilizer_image(&g, &axis, &qi(2)).unwrap();
    assert_eq!(report.image, LineImage::InfiniteCyclic);
}

#[test]
fn elements_outside_the_group_are_rejected() {
    let g = GroupSpec::preset("p1", 4).unwrap();
    let half = Isometry::translation(vec![crate::rational::q(1, 2), qi(0)]);
    assert!(classify_family(&g, &[half]).is_err());
    assert!(select_battery(&g, "mirror").is_err());
}

fn points(n: usize) -> SimplicialComplex {
    SimplicialComplex::from_simplices((0..n).map(|i| i.to_string()).collect(), (0..n as u32).map(|v| vec![v]))
}

#[test]
fn cone_joins_collapse() {
    let pt = analyze_simplicial(&points(1));
    let circle = analyze_simplicial(&simplex_boundary(2));
    let st = join_status(&pt, &circle);
    assert_eq!(st.status, Contractibility::Collapsible);
    let direct = analyze_join(&JoinComplex::new(points(1), simplex_boundary(2)), 10_000).unwrap();
    assert!(direct.collapsed_to_point);
}

#[test]
fn zero_spheres_join_to_a_square() {
    let j = JoinComplex::new(points(2), points(2));
    let x = j.to_simplicial(100).unwrap();
    assert_eq!(x.counts(), vec![4, 4]);
    let direct = analyze_join(&j, 100).unwrap();
    assert_eq!(direct.homology, Homology::sphere(1));
    let s0 = analyze_simplicial(&points(2));
    assert_eq!(join_status(&s0, &s0).homology, Some(Homology::sphere(1)));
    assert_eq!(j.simplices().count(), j.simplex_count());
}

#[test]
fn fixed_part_of_a_join_is_the_join_of_fixed_parts() {
    // a reflection of a triangle fan and a swap of two of three points, acting diagonally
    let left = SimplicialComplex::from_simplices((0..4).map(|i| i.to_string()).collect(), vec![vec![0, 1, 2], vec![0, 2, 3]]);
    let right = points(3);
    let g = vec![Isometry::translation(vec![qi(0), qi(0)])];
    let la = VertexAction { elements: g.clone(), perms: vec![vec![Some(0), Some(3), Some(2), Some(1)]] };
    let ra = VertexAction { elements: g, perms: vec![vec![Some(0), Some(2), Some(1)]] };
    let j = JoinComplex::new(left, right);
    let ja = join_action(&j, &la, &ra);
    let id = fix_join_identity(&j, &la, &ra);
    assert!(id.holds && id.not_pointwise == 0, "{id:?}");
    // oracle: brute force over all join simplices against the explicit join of the fixed parts
    let brute: HashSet<Vec<u32>> = j.simplices().filter(|s| s.iter().all(|&v| ja.perms[0][v as usize] == Some(v))).collect();
    let fixed = JoinComplex::new(crate::covers::fixed_subcomplex(&j.left, &la), crate::covers::fixed_subcomplex(&j.right, &ra));
    let rhs: HashSet<Vec<u32>> = fixed.simplices().collect();
    assert_eq!(brute, rhs);
    assert_eq!(brute.len(), id.invariant);
    assert_eq!(brute.len(), 7); // {0,2} * {0}

    // a swap of two vertices of an edge leaves the edge invariant but not pointwise fixed
    let edge = full_simplex(1);
    let flip = VertexAction { elements: la.elements.clone(), perms: vec![vec![Some(1), Some(0)]] };
    let j2 = JoinComplex::new(edge, points(1));
    let id2 = fix_join_identity(&j2, &flip, &VertexAction { elements: la.elements.clone(), perms: vec![vec![Some(0)]] });
    assert_eq!(id2.not_pointwise, 1);
    assert!(!id2.holds);
}

#[test]
fn two_points_give_the_sphere() {
    let base = points(1);
    for n in 0..4 {
        let k = quotient_k(&doubled_nerve(&base), n).unwrap();
        let s = SphereModel::new(n);
        assert_eq!(k.cell_count(), s.complex.simplex_count(), "n = {n}");
        assert_eq!(k.two_preimages, 2 * k.cell_count());
        assert_eq!(k.self_identified, 0);
        let cc = k.chain_complex();
        assert!(cc.is_complex());
        assert_eq!(cc.reduced_homology(), Homology::sphere(n));
    }
    assert_eq!(quotient_k(&doubled_nerve(&base), 0).unwrap().cell_count(), 2);
}

#[test]
fn product_with_a_contractible_nerve_is_a_sphere() {
    // doubled path a-b-c: K is the path times the sphere
    let path = SimplicialComplex::from_simplices((0..3).map(|i| i.to_string()).collect(), vec![vec![0, 1], vec![1, 2]]);
    for n in 1..3 {
        let k = quotient_k(&doubled_nerve(&path), n).unwrap();
        let cc = k.chain_complex();
        assert!(cc.is_complex());
        let s = SphereModel::new(n);
        let chi_s = s.complex.euler_characteristic();
        assert_eq!(cc.euler_characteristic(), path.euler_characteristic() * chi_s);
        assert_eq!(cc.reduced_homology(), Homology::sphere(n));
    }
}

#[test]
fn sheet_swapping_leaves_no_fixed_cell() {
    let k = quotient_k(&doubled_nerve(&points(1)), 2).unwrap();
    let id = Isometry::translation(vec![qi(0), qi(0)]);
    let swap = VertexAction { elements: vec![id.clone()], perms: vec![vec![Some(1), Some(0)]] };
    assert!(k.fixed_cells(&swap).is_empty());
    assert_eq!(k.analyze_fixed(&swap).unwrap().status(), Contractibility::Empty);
    let keep = VertexAction { elements: vec![id], perms: vec![vec![Some(0), Some(1)]] };
    assert_eq!(k.fixed_cells(&keep).len(), k.cell_count());
    let audit = k.check_action(&swap);
    assert!(audit.passed() && audit.invariant_cells == 0, "{audit:?}");
    assert_eq!(k.check_action(&keep).invariant_cells, k.cell_count());
    // a map that ignores the sheets does not commute with the swap
    let bad = VertexAction { elements: swap.elements.clone(), perms: vec![vec![Some(0), Some(0)]] };
    assert!(k.check_action(&bad).swap_failures > 0);
}

#[test]
fn swap_must_be_simplicial() {
    let lopsided = SimplicialComplex::from_simplices(vec!["a".into(), "b".into()], vec![vec![0]]);
    assert!(matches!(quotient_k(&lopsided, 1), Err(KError::SwapNotSimplicial(_))));
    let solid = full_simplex(1);
    assert!(quotient_k(&solid, 1).is_ok());
}

#[test]
fn k_text_lists_every_cell() {
    let k = quotient_k(&doubled_nerve(&points(1)), 1).unwrap();
    let txt = k.to_text(&BTreeMap::from([("kind".to_string(), "K".to_string())]));
    assert!(txt.starts_with("# kind K\n"));
    assert_eq!(txt.lines().filter(|l| l.starts_with("p ")).count(), k.cell_count());
    assert_eq!(txt, k.to_text(&BTreeMap::from([("kind".to_string(), "K".to_string())])));
}
