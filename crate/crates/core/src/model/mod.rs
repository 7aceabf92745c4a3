//! Model spaces: Euclidean space with a lattice-adapted Gram metric, the
//! weighted binary tree, and the product of the tree with a line.

pub mod balls;
pub mod cat0;
pub mod power;
pub mod tree;

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::{gnorm2, vadd, vscale, vsub, QMat, QVec};
use crate::rational::{fmt_q, fmt_vec, Length, Q};

pub use balls::{balls_intersect, common_point, Ball};
pub use power::{minimax, WeightedPoint};
pub use tree::{TreeAutomorphism, TreePoint, TreeSpace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("points or balls from different model spaces")]
    DomainMismatch,
    #[error("geodesic parameter {0} lies outside [0, 1]")]
    ParameterOutOfRange(String),
    #[error("ball list is empty")]
    EmptyBallList,
    #[error("ball radius must be positive")]
    NonPositiveRadius,
    #[error("invalid point {0}")]
    InvalidPoint(String),
    #[error("invalid isometry: {0}")]
    InvalidIsometry(String),
}

/// Euclidean space `R^n` written in a fixed basis; `gram` holds the inner
/// products of the basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EuclideanSpace {
    pub gram: QMat,
}

impl EuclideanSpace {
    pub fn standard(dim: usize) -> Self {
        EuclideanSpace { gram: QMat::identity(dim) }
    }

    pub fn with_gram(gram: QMat) -> Self {
        assert!(gram.is_square() && gram == gram.transpose(), "Gram matrix must be symmetric");
        EuclideanSpace { gram }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows
    }

    pub fn dist2(&self, p: &[Q], q: &[Q]) -> Q {
        gnorm2(&self.gram, &vsub(p, q))
    }

    pub fn lerp(&self, p: &[Q], q: &[Q], t: &Q) -> QVec {
        vadd(p, &vscale(&vsub(q, p), t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ModelSpace {
    Euclidean(EuclideanSpace),
    Tree(TreeSpace),
    /// The tree crossed with a real line.
    TreeLine(TreeSpace),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Euclidean(QVec),
    Tree(TreePoint),
    TreeLine(TreePoint, Q),
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Euclidean(v) => write!(f, "{}", fmt_vec(v)),
            Point::Tree(p) => write!(f, "{p:?}"),
            Point::TreeLine(p, t) => write!(f, "{p:?}x{}", fmt_q(t)),
        }
    }
}

impl Point {
    pub fn euclidean(&self) -> Option<&QVec> {
        match self {
            Point::Euclidean(v) => Some(v),
            _ => None,
        }
    }
}

impl ModelSpace {
    pub fn euclidean(dim: usize) -> Self {
        ModelSpace::Euclidean(EuclideanSpace::standard(dim))
    }

    pub fn tree_line(depth: u32) -> Self {
        ModelSpace::TreeLine(TreeSpace::new(depth, true))
    }

    /// A distinguished basepoint: the origin, the root, or (root, 0).
    pub fn origin(&self) -> Point {
        match self {
            ModelSpace::Euclidean(e) => Point::Euclidean(vec![Q::zero(); e.dim()]),
            ModelSpace::Tree(_) => Point::Tree(TreePoint::root()),
            ModelSpace::TreeLine(_) => Point::TreeLine(TreePoint::root(), Q::zero()),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (ModelSpace::Euclidean(e), Point::Euclidean(v)) => v.len() == e.dim(),
            (ModelSpace::Tree(t), Point::Tree(x)) | (ModelSpace::TreeLine(t), Point::TreeLine(x, _)) => {
                t.validate(x).is_ok()
            }
            _ => false,
        }
    }

    fn check(&self, p: &Point) -> Result<(), GeometryError> {
        if self.contains(p) {
            Ok(())
        } else {
            match (self, p) {
                (ModelSpace::Tree(t), Point::Tree(x)) | (ModelSpace::TreeLine(t), Point::TreeLine(x, _)) => t.validate(x),
                _ => Err(GeometryError::DomainMismatch),
            }
        }
    }

    /// Exact squared distance.
    pub fn dist2(&self, p: &Point, q: &Point) -> Result<Q, GeometryError> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.dist2_unchecked(p, q))
    }

    pub(crate) fn dist2_unchecked(&self, p: &Point, q: &Point) -> Q {
        match (self, p, q) {
            (ModelSpace::Euclidean(e), Point::Euclidean(a), Point::Euclidean(b)) => e.dist2(a, b),
            (ModelSpace::Tree(t), Point::Tree(a), Point::Tree(b)) => {
                let d = t.distance(a, b);
                &d * &d
            }
            (ModelSpace::TreeLine(t), Point::TreeLine(a, s), Point::TreeLine(b, u)) => {
                let d = t.distance(a, b);
                let h = s - u;
                &d * &d + &h * &h
            }
            _ => panic!("dist2_unchecked on mismatched points"),
        }
    }

    pub fn distance(&self, p: &Point, q: &Point) -> Result<Length, GeometryError> {
        self.dist2(p, q).map(Length::from_squared)
    }

    pub fn geodesic_point(&self, p: &Point, q: &Point, t: &Q) -> Result<Point, GeometryError> {
        self.check(p)?;
        self.check(q)?;
        if t.is_negative() || *t > Q::one() {
            return Err(GeometryError::ParameterOutOfRange(fmt_q(t)));
        }
        if p == q {
            return Ok(p.clone());
        }
        Ok(match (self, p, q) {
            (ModelSpace::Euclidean(e), Point::Euclidean(a), Point::Euclidean(b)) => Point::Euclidean(e.lerp(a, b, t)),
            (ModelSpace::Tree(tr), Point::Tree(a), Point::Tree(b)) => Point::Tree(tr.geodesic_point(a, b, t)),
            (ModelSpace::TreeLine(tr), Point::TreeLine(a, s), Point::TreeLine(b, u)) => {
                Point::TreeLine(tr.geodesic_point(a, b, t), s + (u - s) * t)
            }
            _ => return Err(GeometryError::DomainMismatch),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn pythagoras_and_midpoint() {
        let e = ModelSpace::euclidean(2);
        let o = e.origin();
        let p = Point::Euclidean(vec![qi(3), qi(4)]);
        assert_eq!(e.distance(&o, &p).unwrap().exact(), Some(qi(5)));
        let m = e.geodesic_point(&o, &Point::Euclidean(vec![qi(2), qi(0)]), &q(1, 2)).unwrap();
        assert_eq!(m, Point::Euclidean(vec![qi(1), qi(0)]));
    }

    #[test]
    fn product_line_factor() {
        let s = ModelSpace::tree_line(12);
        let x = TreePoint::node(3, 5);
        let p = Point::TreeLine(x.clone(), qi(0));
        let r = Point::TreeLine(x.clone(), qi(4));
        assert_eq!(s.geodesic_point(&p, &r, &q(1, 4)).unwrap(), Point::TreeLine(x, qi(1)));
    }

    #[test]
    fn mismatch_and_range_errors() {
        let e = ModelSpace::euclidean(2);
        let t = ModelSpace::tree_line(4);
        assert_eq!(e.dist2(&e.origin(), &t.origin()), Err(GeometryError::DomainMismatch));
        assert!(matches!(
            e.geodesic_point(&e.origin(), &e.origin(), &qi(2)),
            Err(GeometryError::ParameterOutOfRange(_))
        ));
        let nc = ModelSpace::Tree(TreeSpace::new(4, false));
        let b = Point::Tree(TreePoint::node(5, 0));
        assert!(nc.dist2(&nc.origin(), &b).is_err());
    }
}
