use itertools::Itertools;
use num_traits::{Signed, ToPrimitive};

use crate::linalg::{vadd, vsub};
use crate::model::{ModelSpace, Point};
use crate::rational::{qi, to_f64, Q};

use super::{GroupError, GroupKind, GroupSpec, Isometry};

/// All group elements `g` with `d(g·basepoint, basepoint) <= bound`, sorted by
/// displacement and then by a fixed structural order.
pub fn enumerate_elements(group: &GroupSpec, bound: &Q, basepoint: &Point) -> Result<Vec<Isometry>, GroupError> {
    if bound.is_negative() {
        return Ok(Vec::new());
    }
    if !group.space.contains(basepoint) {
        return Err(GroupError::Geometry(crate::model::GeometryError::DomainMismatch));
    }
    let bound2 = bound * bound;
    let mut found: Vec<(Q, usize, Vec<i64>, Isometry)> = Vec::new();
    match &group.kind {
        GroupKind::Crystallographic { cosets } => {
            let ModelSpace::Euclidean(e) = &group.space else { unreachable!() };
            let Point::Euclidean(b) = basepoint else { unreachable!() };
            let n = e.dim();
            let ginv = e.gram.inverse().expect("positive definite Gram matrix");
            let radius = to_f64(bound);
            let half_widths: Vec<f64> = (0..n).map(|i| radius * to_f64(ginv.get(i, i)).sqrt() + 1.0).collect();
            for (k, c) in cosets.iter().enumerate() {
                let Isometry::Affine { lin, trans } = c else { unreachable!() };
                // displacement of (lin, trans + lambda) at b is offset + lambda
                let offset = vsub(&vadd(&lin.mul_vec(b), trans), b);
                let ranges: Vec<std::ops::RangeInclusive<i64>> = offset
                    .iter()
                    .zip(&half_widths)
                    .map(|(o, w)| {
                        let centre = -to_f64(o);
                        ((centre - w).floor() as i64)..=((centre + w).ceil() as i64)
                    })
                    .collect();
                for lambda in ranges.into_iter().multi_cartesian_product() {
                    let lq: Vec<Q> = lambda.iter().map(|&x| qi(x)).collect();
                    let d = vadd(&offset, &lq);
                    let d2 = crate::linalg::gnorm2(&e.gram, &d);
                    if d2 <= bound2 {
                        let g = Isometry::affine(lin.clone(), vadd(trans, &lq));
                        found.push((d2, k, lambda, g));
                    }
                }
            }
        }
        GroupKind::TreeCyclic { generator } => {
            let Isometry::TreeLine { shift, .. } = generator else { unreachable!() };
            let kmax = (bound / shift.abs()).floor().to_integer().to_i64().unwrap_or(i64::MAX);
            for k in -kmax..=kmax {
                let g = group.power(generator, k);
                let d2 = g.displacement2(&group.space, basepoint);
                if d2 <= bound2 {
                    found.push((d2, 0, vec![k], g));
                }
            }
        }
        GroupKind::Generated => return Err(GroupError::Unbounded),
    }
    found.sort_by(|a, b| (&a.0, a.1, &a.2).cmp(&(&b.0, b.1, &b.2)));
    Ok(found.into_iter().map(|x| x.3).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn p1_unit_window() {
        let g = GroupSpec::preset("p1", 6).unwrap();
        let els = enumerate_elements(&g, &qi(1), &g.space.origin()).unwrap();
        assert_eq!(els.len(), 5);
        assert!(els[0].is_identity(&g.space));
    }

    #[test]
    fn bound_zero_is_the_stabilizer() {
        let g = GroupSpec::preset("p4", 6).unwrap();
        assert_eq!(enumerate_elements(&g, &qi(0), &g.space.origin()).unwrap().len(), 4);
        let centre = Point::Euclidean(vec![q(1, 2), q(1, 2)]);
        assert_eq!(enumerate_elements(&g, &qi(0), &centre).unwrap().len(), 4);
        let generic = Point::Euclidean(vec![q(1, 7), q(2, 9)]);
        assert_eq!(enumerate_elements(&g, &qi(0), &generic).unwrap().len(), 1);
    }

    #[test]
    fn pmm_half_window_is_point_group() {
        let g = GroupSpec::preset("pmm", 6).unwrap();
        let els = enumerate_elements(&g, &q(1, 2), &g.space.origin()).unwrap();
        assert_eq!(els.len(), 4);
        assert!(els.iter().all(|x| x.trans().unwrap().iter().all(|t| t == &qi(0))));
    }

    #[test]
    fn hexagonal_window_counts() {
        // six nearest neighbours in the triangular lattice
        let g = GroupSpec::preset("p3", 6).unwrap();
        let translations = enumerate_elements(&g, &qi(1), &g.space.origin())
            .unwrap()
            .into_iter()
            .filter(|x| x.lin().unwrap().is_identity())
            .count();
        assert_eq!(translations, 7);
    }

    #[test]
    fn tree_window() {
        let g = GroupSpec::preset("tree-odometer", 8).unwrap();
        let els = enumerate_elements(&g, &qi(2), &g.space.origin()).unwrap();
        assert_eq!(els.len(), 5);
    }

    #[test]
    fn custom_without_lattice_is_refused() {
        let mut g = GroupSpec::preset("p1", 6).unwrap();
        g.kind = GroupKind::Generated;
        assert_eq!(enumerate_elements(&g, &qi(1), &g.space.origin()), Err(GroupError::Unbounded));
    }
}
