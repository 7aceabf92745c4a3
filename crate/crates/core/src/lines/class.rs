//! Parallel classes: the space `X_c^0` of lines parallel to a given one, and
//! the action of direction-preserving group elements on it.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::group::{GroupKind, GroupSpec, Isometry};
use crate::linalg::{int_vec, QMat, QVec};
use crate::model::{EuclideanSpace, ModelSpace, Point, TreeSpace};
use crate::rational::Q;

use super::{DirectionFrame, Line};

/// The base `X_c^0` of a parallel class, itself a model space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassSpace {
    /// Lines of one lattice direction, coordinatised by the frame's class coordinates.
    Euclidean(DirectionFrame),
    /// Vertical lines `{x} × R`, coordinatised by the tree point `x`.
    Tree(TreeSpace),
}

impl ClassSpace {
    pub fn model(&self) -> ModelSpace {
        match self {
            ClassSpace::Euclidean(f) => ModelSpace::Euclidean(EuclideanSpace::with_gram(f.class_gram.clone())),
            ClassSpace::Tree(t) => ModelSpace::Tree(t.clone()),
        }
    }

    pub fn point_of(&self, line: &Line) -> Option<Point> {
        match (self, line) {
            (ClassSpace::Euclidean(f), Line::Euclidean { dir, class }) if *dir == f.dir => Some(Point::Euclidean(class.clone())),
            (ClassSpace::Tree(_), Line::Vertical(x)) => Some(Point::Tree(x.clone())),
            _ => None,
        }
    }

    pub fn line_at(&self, p: &Point) -> Line {
        match (self, p) {
            (ClassSpace::Euclidean(f), Point::Euclidean(s)) => Line::Euclidean { dir: f.dir.clone(), class: s.clone() },
            (ClassSpace::Tree(_), Point::Tree(x)) => Line::Vertical(x.clone()),
            _ => panic!("point from another class space"),
        }
    }

    /// Direction label used in reports and complex files.
    pub fn label(&self) -> String {
        match self {
            ClassSpace::Euclidean(f) => format!("{:?}", f.dir),
            ClassSpace::Tree(_) => "vertical".to_string(),
        }
    }
}

/// The parallel class of `c`.
pub fn parallel_class(space: &ModelSpace, c: &Line) -> ClassSpace {
    match (space, c) {
        (ModelSpace::Euclidean(e), Line::Euclidean { dir, .. }) => ClassSpace::Euclidean(DirectionFrame::new(&e.gram, dir)),
        (ModelSpace::TreeLine(t), Line::Vertical(_)) => ClassSpace::Tree(t.clone()),
        _ => panic!("line from another space"),
    }
}

/// The affine map between class spaces induced by `g`, which must send
/// direction `from.dir` to `±to.dir`. Returns `(M, tau)` acting on class coordinates.
pub fn class_map(from: &DirectionFrame, to: &DirectionFrame, g: &Isometry) -> (QMat, QVec) {
    let Isometry::Affine { lin, trans } = g else { panic!("class maps need Euclidean isometries") };
    let n = lin.rows;
    // s -> (to.u_inv (lin from.u (0, s) + trans))[1..]
    let m_full = to.u_inv.mul(lin).mul(&from.u);
    debug_assert!((1..n).all(|i| m_full.get(i, 0).is_zero()), "g does not map the direction class onto the target");
    let rows: Vec<usize> = (1..n).collect();
    let m = m_full.select(&rows, &rows);
    let tau = to.u_inv.mul_vec(trans)[1..].to_vec();
    (m, tau)
}

/// The isometry of the class space of `frame` induced by `g`, when `g`
/// preserves that direction class.
pub fn induced_isometry(frame: &DirectionFrame, g: &Isometry) -> Option<Isometry> {
    let Isometry::Affine { lin, .. } = g else { return None };
    let img = lin.mul_vec(&int_vec(&frame.dir));
    let v = int_vec(&frame.dir);
    let neg: QVec = v.iter().map(|x| -x).collect();
    if img != v && img != neg {
        return None;
    }
    let (m, tau) = class_map(frame, frame, g);
    Some(Isometry::affine(m, tau))
}

/// The group induced on the class space of `frame` by the stabiliser of the
/// direction class: a crystallographic group with lattice `Z^{n-1}`.
pub fn induced_group(group: &GroupSpec, frame: &DirectionFrame) -> GroupSpec {
    let GroupKind::Crystallographic { cosets } = &group.kind else { panic!("induced groups need a crystallographic group") };
    let n = frame.dir.len();
    let mut seen = BTreeSet::new();
    let mut induced = Vec::new();
    for c in cosets {
        let Some(Isometry::Affine { lin, trans }) = induced_isometry(frame, c) else { continue };
        let reduced: QVec = trans.iter().map(|t| t - t.floor()).collect();
        let key = format!("{lin:?}{reduced:?}");
        if seen.insert(key) {
            induced.push(Isometry::affine(lin, reduced));
        }
    }
    let space = ModelSpace::Euclidean(EuclideanSpace::with_gram(frame.class_gram.clone()));
    let mut generators: Vec<Isometry> = induced.iter().skip(1).cloned().collect();
    for i in 0..n - 1 {
        let mut v = vec![Q::zero(); n - 1];
        v[i] = Q::from_integer(1.into());
        generators.push(Isometry::translation(v));
    }
    GroupSpec {
        name: format!("{}|{:?}", group.name, frame.dir),
        space,
        generators,
        kind: GroupKind::Crystallographic { cosets: induced },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lines::flat_strip_distance;
    use crate::rational::{q, qi};

    #[test]
    fn x_axis_class_is_vertical_coordinate() {
        let s = ModelSpace::euclidean(2);
        let c = Line::through(&s, &int_vec(&[0, 0]), &int_vec(&[1, 0])).unwrap();
        let ClassSpace::Euclidean(f) = parallel_class(&s, &c) else { panic!() };
        assert_eq!(f.class_gram, QMat::identity(1));
        let l = Line::through(&s, &[qi(7), q(5, 2)], &int_vec(&[1, 0])).unwrap();
        let ClassSpace::Euclidean(_) = parallel_class(&s, &l) else { panic!() };
        let Line::Euclidean { class, .. } = &l else { panic!() };
        assert!(class[0] == q(5, 2) || class[0] == q(-5, 2));
    }

    #[test]
    fn pg_induces_reflections_on_the_glide_class() {
        let g = GroupSpec::preset("pg", 6).unwrap();
        let c = Line::through(&g.space, &int_vec(&[0, 0]), &int_vec(&[1, 0])).unwrap();
        let ClassSpace::Euclidean(f) = parallel_class(&g.space, &c) else { panic!() };
        let ind = induced_group(&g, &f);
        assert_eq!(ind.point_group_order(), 2);
        // the glide acts on the class coordinate as a reflection fixing the class of its axis
        let glide = &g.generators[0];
        let h = induced_isometry(&f, glide).unwrap();
        let origin_class = Point::Euclidean(vec![qi(0)]);
        assert_eq!(h.apply(&ind.space, &origin_class), origin_class);
        assert_eq!(*h.lin().unwrap(), QMat::from_i64(&[&[-1]]));
    }

    #[test]
    fn class_coordinates_are_isometric() {
        let g = GroupSpec::preset("p3", 6).unwrap();
        let d = int_vec(&[1, 1]);
        let a = Line::through(&g.space, &[q(1, 3), qi(0)], &d).unwrap();
        let b = Line::through(&g.space, &[qi(2), q(-1, 5)], &d).unwrap();
        let cs = parallel_class(&g.space, &a);
        let m = cs.model();
        let via = m.dist2(&cs.point_of(&a).unwrap(), &cs.point_of(&b).unwrap()).unwrap();
        assert_eq!(flat_strip_distance(&g.space, &a, &b).unwrap().unwrap().squared, via);
    }
}
