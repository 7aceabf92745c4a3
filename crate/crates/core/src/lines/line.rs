use std::fmt;

use num_traits::{Signed, Zero};

use crate::linalg::{canonical_sign, complete_to_unimodular, gdot, gnorm2, int_vec, primitive_direction, vsub, QMat, QVec};
use crate::model::{GeometryError, ModelSpace, Point, TreePoint};
use crate::rational::{fmt_vec, Length, Q};

use crate::group::Isometry;

/// Coordinates adapted to one direction `v` of a lattice: a unimodular basis
/// whose first vector is `v`. The remaining coordinates of a point are the
/// coordinates of the line through it in the space of lines parallel to `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionFrame {
    pub dir: Vec<i64>,
    pub u: QMat,
    pub u_inv: QMat,
    /// Gram matrix of the class space in the frame's remaining coordinates.
    pub class_gram: QMat,
}

impl DirectionFrame {
    pub fn new(gram: &QMat, dir: &[i64]) -> Self {
        let (dir, _) = canonical_sign(dir);
        let rows = complete_to_unimodular(&dir).expect("primitive direction");
        let u = QMat::from_rows(rows.iter().map(|r| int_vec(r)).collect());
        let u_inv = u.inverse().expect("unimodular");
        let n = dir.len();
        let v = int_vec(&dir);
        let vv = gnorm2(gram, &v);
        let perp: Vec<QVec> = (1..n)
            .map(|j| {
                let uj = u.column(j);
                let c = gdot(gram, &uj, &v) / &vv;
                vsub(&uj, &crate::linalg::vscale(&v, &c))
            })
            .collect();
        let mut class_gram = QMat::zeros(n - 1, n - 1);
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                class_gram.set(i, j, gdot(gram, &perp[i], &perp[j]));
            }
        }
        DirectionFrame { dir, u, u_inv, class_gram }
    }

    pub fn dir_q(&self) -> QVec {
        int_vec(&self.dir)
    }

    pub fn class_coords(&self, p: &[Q]) -> QVec {
        self.u_inv.mul_vec(p)[1..].to_vec()
    }

    /// Coordinate of `p` along the direction.
    pub fn along(&self, p: &[Q]) -> Q {
        self.u_inv.mul_vec(p)[0].clone()
    }

    /// The point with zero `along` coordinate on the line with class coordinates `s`.
    pub fn anchor(&self, s: &[Q]) -> QVec {
        let mut full = vec![Q::zero()];
        full.extend_from_slice(s);
        self.u.mul_vec(&full)
    }
}

/// A geodesic line. Euclidean lines carry their canonical primitive direction
/// and class coordinates, so equal values describe equal point sets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Line {
    Euclidean { dir: Vec<i64>, class: QVec },
    /// `{x} × R` in the tree-line product.
    Vertical(TreePoint),
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Euclidean { dir, class } => write!(f, "L[{dir:?}@{}]", fmt_vec(class)),
            Line::Vertical(x) => write!(f, "L[{x:?}xR]"),
        }
    }
}

impl Line {
    /// The line through `p` with direction `dir` (any non-zero rational vector).
    pub fn through(space: &ModelSpace, p: &[Q], dir: &[Q]) -> Result<Line, GeometryError> {
        let ModelSpace::Euclidean(e) = space else { return Err(GeometryError::DomainMismatch) };
        let prim = primitive_direction(dir).ok_or_else(|| GeometryError::InvalidPoint("zero direction".into()))?;
        let frame = DirectionFrame::new(&e.gram, &prim);
        Ok(Line::Euclidean { class: frame.class_coords(p), dir: frame.dir })
    }

    pub fn frame(&self, space: &ModelSpace) -> Option<DirectionFrame> {
        match (self, space) {
            (Line::Euclidean { dir, .. }, ModelSpace::Euclidean(e)) => Some(DirectionFrame::new(&e.gram, dir)),
            _ => None,
        }
    }

    pub fn anchor(&self, space: &ModelSpace) -> Point {
        match self {
            Line::Euclidean { class, .. } => Point::Euclidean(self.frame(space).expect("Euclidean line").anchor(class)),
            Line::Vertical(x) => Point::TreeLine(x.clone(), Q::zero()),
        }
    }

    pub fn contains(&self, space: &ModelSpace, p: &Point) -> bool {
        match (self, p) {
            (Line::Euclidean { class, .. }, Point::Euclidean(x)) => self.frame(space).map_or(false, |f| f.class_coords(x) == *class),
            (Line::Vertical(x), Point::TreeLine(y, _)) => x == y,
            _ => false,
        }
    }

    pub fn is_parallel(&self, other: &Line) -> bool {
        match (self, other) {
            (Line::Euclidean { dir: a, .. }, Line::Euclidean { dir: b, .. }) => a == b,
            (Line::Vertical(_), Line::Vertical(_)) => true,
            _ => false,
        }
    }

    /// Image of the line under an isometry.
    pub fn map(&self, space: &ModelSpace, g: &Isometry) -> Line {
        match (self, g) {
            (Line::Euclidean { dir, .. }, Isometry::Affine { lin, .. }) => {
                let Point::Euclidean(a) = g.apply(space, &self.anchor(space)) else { unreachable!() };
                Line::through(space, &a, &lin.mul_vec(&int_vec(dir))).expect("isometries preserve lines")
            }
            (Line::Vertical(x), Isometry::TreeLine { aut, .. }) => {
                let ModelSpace::TreeLine(t) = space else { unreachable!() };
                Line::Vertical(aut.apply(t, x))
            }
            _ => panic!("line and isometry from different spaces"),
        }
    }

    /// `+1` if `g` maps the canonical orientation of this line to the canonical
    /// orientation of its image, `-1` otherwise.
    pub fn orientation_sign(&self, g: &Isometry) -> i64 {
        match (self, g) {
            (Line::Euclidean { dir, .. }, Isometry::Affine { lin, .. }) => {
                let img = lin.mul_vec(&int_vec(dir));
                let prim = primitive_direction(&img).expect("non-zero");
                canonical_sign(&prim).1
            }
            (Line::Vertical(_), Isometry::TreeLine { .. }) => 1,
            _ => panic!("line and isometry from different spaces"),
        }
    }
}

/// Width of the flat strip between two lines: the distance between parallel
/// lines, `None` when they are not parallel.
pub fn flat_strip_distance(space: &ModelSpace, l1: &Line, l2: &Line) -> Result<Option<Length>, GeometryError> {
    match (space, l1, l2) {
        (ModelSpace::Euclidean(e), Line::Euclidean { dir: d1, .. }, Line::Euclidean { dir: d2, .. }) => {
            if d1 != d2 {
                return Ok(None);
            }
            let Point::Euclidean(a) = l1.anchor(space) else { unreachable!() };
            let Point::Euclidean(b) = l2.anchor(space) else { unreachable!() };
            let delta = vsub(&b, &a);
            let v = int_vec(d1);
            let along = gdot(&e.gram, &delta, &v);
            let w2 = gnorm2(&e.gram, &delta) - &along * &along / gnorm2(&e.gram, &v);
            debug_assert!(!w2.is_negative());
            Ok(Some(Length::from_squared(w2)))
        }
        (ModelSpace::TreeLine(t), Line::Vertical(x), Line::Vertical(y)) => Ok(Some(Length::from_rational(&t.distance(x, y)))),
        _ => Err(GeometryError::DomainMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn e2() -> ModelSpace {
        ModelSpace::euclidean(2)
    }

    fn line(p: [i64; 2], d: [i64; 2]) -> Line {
        Line::through(&e2(), &int_vec(&p), &int_vec(&d)).unwrap()
    }

    #[test]
    fn parallel_lines_strip_width() {
        let s = e2();
        let w = flat_strip_distance(&s, &line([0, 0], [1, 0]), &line([5, 3], [-2, 0])).unwrap().unwrap();
        assert_eq!(w.exact(), Some(qi(3)));
        assert_eq!(flat_strip_distance(&s, &line([0, 0], [1, 0]), &line([0, 0], [0, 1])).unwrap(), None);
        let l = line([1, 2], [1, 1]);
        assert!(flat_strip_distance(&s, &l, &l).unwrap().unwrap().is_zero());
    }

    #[test]
    fn equal_point_sets_compare_equal() {
        assert_eq!(line([0, 0], [1, 1]), line([3, 3], [-2, -2]));
        assert_ne!(line([0, 0], [1, 1]), line([1, 0], [1, 1]));
    }

    #[test]
    fn class_gram_matches_strip_width() {
        let s = e2();
        let l1 = line([0, 0], [1, 1]);
        let l2 = line([1, 0], [1, 1]);
        let f = l1.frame(&s).unwrap();
        let (Line::Euclidean { class: c1, .. }, Line::Euclidean { class: c2, .. }) = (&l1, &l2) else { panic!() };
        let d = vsub(c1, c2);
        let via_class = gnorm2(&f.class_gram, &d);
        assert_eq!(via_class, q(1, 2));
        assert_eq!(flat_strip_distance(&s, &l1, &l2).unwrap().unwrap().squared, via_class);
    }

    #[test]
    fn tree_lines() {
        let s = ModelSpace::tree_line(12);
        let ModelSpace::TreeLine(t) = &s else { panic!() };
        let root = Line::Vertical(TreePoint::root());
        let b = Line::Vertical(t.boundary_point(9));
        assert_eq!(flat_strip_distance(&s, &root, &b).unwrap().unwrap().exact(), Some(qi(1)));
    }
}
