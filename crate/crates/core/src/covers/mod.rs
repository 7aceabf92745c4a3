//! Group-invariant good covers by balls, their nerves, fixed subcomplexes and
//! the restriction of a nerve to a fixed set.

mod axes_cover;
mod domain;
mod good;
mod nerve;
mod restrict;
mod text;

pub use axes_cover::{axes_nerve, build_axes_cover, check_axes_cover, AxesCover, ClassCover};
pub use domain::{CoverDomain, ElementSource, Piece, Window};
pub use good::{build_good_cover, check_good_cover, orbit_bundle, radius_at, CoverCheck, CoverError, CoverPolicy, GoodCover};
pub use nerve::{
    check_equivariance, clique_complex, fixed_subcomplex, multiplicity, nerve, vertex_label, window_witness, EquivarianceCheck,
    VertexAction,
};
pub use text::{parse_complex, write_complex, ParseError};
pub use restrict::{check_restriction, restricted_nerve, restriction_map, FixedSet, RestrictionCheck, RestrictionMap};

use crate::group::GroupSpec;
use crate::rational::Q;

/// The domain of a cover of the closed `R`-ball about the origin of the group's space.
pub fn group_domain(group: &GroupSpec, radius: &Q) -> CoverDomain {
    CoverDomain::new(
        group.space.clone(),
        ElementSource::Group(group.clone()),
        Window { center: group.space.origin(), radius: radius.clone() },
    )
}

/// Convenience: the good cover of the `R`-window of a group's space.
pub fn cover_window(group: &GroupSpec, radius: &Q, policy: &CoverPolicy) -> Result<GoodCover, CoverError> {
    build_good_cover(&group_domain(group, radius), policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_elements, Isometry};
    use crate::homology::analyze_simplicial;
    use crate::rational::qi;
    use num_traits::Signed;
    use crate::linalg::QMat;
    use crate::model::ModelSpace;

    #[test]
    fn trivial_group_unit_disk() {
        let g = GroupSpec::with_lattice("triv", ModelSpace::euclidean(2), vec![]).unwrap();
        let cover = cover_window(&g, &qi(1), &CoverPolicy::default()).unwrap();
        assert!(!cover.is_empty());
        assert!(check_good_cover(&cover).unwrap().passed());
    }

    #[test]
    fn p1_cover_is_good_and_nerve_collapses() {
        let g = GroupSpec::preset("p1", 8).unwrap();
        let t = std::time::Instant::now();
        let cover = cover_window(&g, &qi(2), &CoverPolicy::default()).unwrap();
        let built = t.elapsed();
        let check = check_good_cover(&cover).unwrap();
        assert!(check.passed(), "{check:?}");
        // independent oracle: scan every element moving the origin by at most 2R + 2r
        let bound = qi(4) + qi(2) * cover.max_radius();
        for h in enumerate_elements(&g, &bound, &g.space.origin()).unwrap() {
            if h.is_identity(&g.space) {
                continue;
            }
            for b in &cover.balls {
                let hb = cover.domain.image(&h, b);
                let d2 = g.space.dist2(&b.center, &hb.center).unwrap();
                assert!(d2 >= qi(4) * &b.radius * &b.radius, "translate of {b:?} overlaps");
            }
        }
        let n = nerve(&cover).unwrap();
        let r = analyze_simplicial(&n);
        eprintln!("p1 R=2: {} balls, counts {:?}, built {:?}, total {:?}", cover.len(), n.counts(), built, t.elapsed());
        assert!(r.collapsed_to_point);
        let unit = Isometry::translation(vec![qi(1), qi(0)]);
        let act = VertexAction::new(&cover, &[unit]).unwrap();
        assert!(fixed_subcomplex(&n, &act).is_empty());
    }

    /// Brute force: the preimage of `sigma` is the full simplex on the union of its vertices.
    fn fiber_is_simplex(map: &RestrictionMap, sigma: &[u32]) -> bool {
        let pre: Vec<&Vec<u32>> = map
            .source
            .simplices()
            .filter(|t| t.iter().all(|v| map.vertex_map[*v as usize].map_or(false, |w| sigma.contains(&w))))
            .collect();
        let verts: std::collections::BTreeSet<u32> = pre.iter().flat_map(|t| t.iter().copied()).collect();
        let all: Vec<u32> = verts.into_iter().collect();
        !all.is_empty() && pre.len() == (1usize << all.len()) - 1
    }

    #[test]
    fn trivial_subgroup_restricts_isomorphically() {
        let g = GroupSpec::preset("p1", 8).unwrap();
        let cover = cover_window(&g, &qi(1), &CoverPolicy::default()).unwrap();
        let n = nerve(&cover).unwrap();
        let act = VertexAction::new(&cover, &[g.identity()]).unwrap();
        let map = restriction_map(&cover, &n, &act).unwrap();
        assert_eq!(map.source.simplex_set(), map.target.simplex_set());
        assert!(check_restriction(&map).passed());
    }

    #[test]
    fn mirror_restricts_to_intervals_on_the_mirror() {
        let g = GroupSpec::preset("pm", 8).unwrap();
        let big_r = qi(2);
        let cover = cover_window(&g, &big_r, &CoverPolicy::default()).unwrap();
        let n = nerve(&cover).unwrap();
        let mirror = Isometry::linear(QMat::from_rows(vec![vec![qi(1), qi(0)], vec![qi(0), qi(-1)]]));
        let act = VertexAction::new(&cover, &[mirror]).unwrap();
        let map = restriction_map(&cover, &n, &act).unwrap();
        // a ball meets the mirror segment [-R, R] x {0} iff (|x| - R)_+^2 < r^2 - y^2
        let expected: Vec<u32> = (0..cover.len() as u32)
            .filter(|&i| {
                let b = &cover.balls[i as usize];
                let c = b.center.euclidean().unwrap();
                let gap = (c[0].abs() - &big_r).max(qi(0));
                &gap * &gap < &b.radius * &b.radius - &c[1] * &c[1]
            })
            .collect();
        assert!(!expected.is_empty());
        assert_eq!(map.target.vertices(), expected);
        let scan: Vec<u32> = (0..cover.len() as u32).filter(|&v| act.perms[0][v as usize] == Some(v)).collect();
        assert_eq!(map.source.vertices(), scan);
        let check = check_restriction(&map);
        assert!(check.passed(), "{check:?}");
        for s in map.target.simplices() {
            assert!(fiber_is_simplex(&map, s), "fiber over {s:?}");
        }
        assert!(check.target_homology.collapsed_to_point);
    }

    #[test]
    fn rotation_fixes_one_point_and_translation_none() {
        let g = GroupSpec::preset("p2", 8).unwrap();
        let cover = cover_window(&g, &qi(2), &CoverPolicy::default()).unwrap();
        let n = nerve(&cover).unwrap();
        let half_turn = Isometry::linear(QMat::from_rows(vec![vec![qi(-1), qi(0)], vec![qi(0), qi(-1)]]));
        let act = VertexAction::new(&cover, &[half_turn.clone()]).unwrap();
        let map = restriction_map(&cover, &n, &act).unwrap();
        assert_eq!(map.fixed, FixedSet::Affine { point: vec![qi(0), qi(0)], basis: vec![] });
        let check = check_restriction(&map);
        assert!(check.passed(), "{check:?}");
        assert_eq!(map.target.dim() + 1, map.target.vertices().len() as i64);

        // a half turn about (1/2, 0) together with the one about the origin generates D_inf
        let other = Isometry::affine(QMat::from_rows(vec![vec![qi(-1), qi(0)], vec![qi(0), qi(-1)]]), vec![qi(1), qi(0)]);
        let both = VertexAction::new(&cover, &[half_turn, other]).unwrap();
        let map = restriction_map(&cover, &n, &both).unwrap();
        assert!(map.fixed.is_empty());
        assert!(map.target.is_empty() && map.source.is_empty());
        assert!(check_restriction(&map).passed());
    }
}
