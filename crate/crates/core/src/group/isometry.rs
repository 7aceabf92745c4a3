use std::fmt;

use num_traits::Zero;

use crate::linalg::{vadd, vsub, QMat, QVec};
use crate::model::{GeometryError, ModelSpace, Point, TreeAutomorphism, TreeSpace};
use crate::rational::{fmt_q, fmt_vec, Q};

/// An exact isometry of one of the model spaces.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Isometry {
    /// `x -> lin x + trans` in basis coordinates.
    Affine { lin: QMat, trans: QVec },
    Tree(TreeAutomorphism),
    /// `(x, t) -> (aut x, t + shift)`.
    TreeLine { aut: TreeAutomorphism, shift: Q },
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Isometry::Affine { lin, trans } => write!(f, "{lin:?}+{}", fmt_vec(trans)),
            Isometry::Tree(a) => write!(f, "{a:?}"),
            Isometry::TreeLine { aut, shift } => write!(f, "({aut:?},{})", fmt_q(shift)),
        }
    }
}

impl Isometry {
    pub fn translation(v: QVec) -> Self {
        Isometry::Affine { lin: QMat::identity(v.len()), trans: v }
    }

    pub fn linear(lin: QMat) -> Self {
        let n = lin.rows;
        Isometry::Affine { lin, trans: vec![Q::zero(); n] }
    }

    pub fn affine(lin: QMat, trans: QVec) -> Self {
        Isometry::Affine { lin, trans }
    }

    pub fn identity_for(space: &ModelSpace) -> Self {
        match space {
            ModelSpace::Euclidean(e) => Isometry::linear(QMat::identity(e.dim())),
            ModelSpace::Tree(_) => Isometry::Tree(TreeAutomorphism::identity()),
            ModelSpace::TreeLine(_) => Isometry::TreeLine { aut: TreeAutomorphism::identity(), shift: Q::zero() },
        }
    }

    /// Checks that the map preserves the metric of `space`.
    pub fn validate(&self, space: &ModelSpace) -> Result<(), GeometryError> {
        match (self, space) {
            (Isometry::Affine { lin, trans }, ModelSpace::Euclidean(e)) => {
                if lin.rows != e.dim() || lin.cols != e.dim() || trans.len() != e.dim() {
                    return Err(GeometryError::DomainMismatch);
                }
                if lin.transpose().mul(&e.gram).mul(lin) != e.gram {
                    return Err(GeometryError::InvalidIsometry(format!("{lin:?} does not preserve the metric")));
                }
                Ok(())
            }
            (Isometry::Tree(a), ModelSpace::Tree(t)) | (Isometry::TreeLine { aut: a, .. }, ModelSpace::TreeLine(t)) => {
                if let TreeAutomorphism::Table(_) = a {
                    TreeAutomorphism::from_tables(t, a.to_tables(t))?;
                }
                Ok(())
            }
            _ => Err(GeometryError::DomainMismatch),
        }
    }

    pub fn apply(&self, space: &ModelSpace, p: &Point) -> Point {
        match (self, space, p) {
            (Isometry::Affine { lin, trans }, _, Point::Euclidean(x)) => Point::Euclidean(vadd(&lin.mul_vec(x), trans)),
            (Isometry::Tree(a), ModelSpace::Tree(t), Point::Tree(x)) => Point::Tree(a.apply(t, x)),
            (Isometry::TreeLine { aut, shift }, ModelSpace::TreeLine(t), Point::TreeLine(x, s)) => {
                Point::TreeLine(aut.apply(t, x), s + shift)
            }
            _ => panic!("isometry {self} applied to a point of another space"),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, space: &ModelSpace, other: &Isometry) -> Isometry {
        match (self, other) {
            (Isometry::Affine { lin: l1, trans: t1 }, Isometry::Affine { lin: l2, trans: t2 }) => {
                Isometry::Affine { lin: l1.mul(l2), trans: vadd(&l1.mul_vec(t2), t1) }
            }
            (Isometry::Tree(a), Isometry::Tree(b)) => Isometry::Tree(a.compose(tree_of(space), b)),
            (Isometry::TreeLine { aut: a, shift: s }, Isometry::TreeLine { aut: b, shift: u }) => {
                Isometry::TreeLine { aut: a.compose(tree_of(space), b), shift: s + u }
            }
            _ => panic!("composing isometries of different spaces"),
        }
    }

    pub fn inverse(&self, space: &ModelSpace) -> Isometry {
        match self {
            Isometry::Affine { lin, trans } => {
                let inv = lin.inverse().expect("isometries are invertible");
                let t = inv.mul_vec(trans);
                Isometry::Affine { lin: inv, trans: t.iter().map(|x| -x).collect() }
            }
            Isometry::Tree(a) => Isometry::Tree(a.inverse(tree_of(space))),
            Isometry::TreeLine { aut, shift } => Isometry::TreeLine { aut: aut.inverse(tree_of(space)), shift: -shift },
        }
    }

    pub fn conjugate(&self, space: &ModelSpace, by: &Isometry) -> Isometry {
        by.compose(space, &self.compose(space, &by.inverse(space)))
    }

    pub fn is_identity(&self, space: &ModelSpace) -> bool {
        match self {
            Isometry::Affine { lin, trans } => lin.is_identity() && trans.iter().all(Zero::is_zero),
            Isometry::Tree(a) => a.is_identity(tree_of(space)),
            Isometry::TreeLine { aut, shift } => shift.is_zero() && aut.is_identity(tree_of(space)),
        }
    }

    /// The linear part (Euclidean isometries only).
    pub fn lin(&self) -> Option<&QMat> {
        match self {
            Isometry::Affine { lin, .. } => Some(lin),
            _ => None,
        }
    }

    pub fn trans(&self) -> Option<&QVec> {
        match self {
            Isometry::Affine { trans, .. } => Some(trans),
            _ => None,
        }
    }

    /// Displacement vector `g x - x` of a Euclidean isometry.
    pub fn displacement_vec(&self, x: &[Q]) -> QVec {
        match self {
            Isometry::Affine { lin, trans } => vsub(&vadd(&lin.mul_vec(x), trans), x),
            _ => panic!("displacement vector of a non-affine isometry"),
        }
    }

    /// Squared displacement `d(g p, p)^2`.
    pub fn displacement2(&self, space: &ModelSpace, p: &Point) -> Q {
        space.dist2_unchecked(&self.apply(space, p), p)
    }
}

pub(crate) fn tree_of(space: &ModelSpace) -> &TreeSpace {
    match space {
        ModelSpace::Tree(t) | ModelSpace::TreeLine(t) => t,
        ModelSpace::Euclidean(_) => panic!("tree isometry on a Euclidean space"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;
    use crate::rational::q;

    #[test]
    fn compose_and_invert_glide() {
        let s = ModelSpace::euclidean(2);
        let glide = Isometry::affine(QMat::from_i64(&[&[1, 0], &[0, -1]]), vec![q(1, 2), q(0, 1)]);
        glide.validate(&s).unwrap();
        let sq = glide.compose(&s, &glide);
        assert_eq!(sq, Isometry::translation(int_vec(&[1, 0])));
        assert!(glide.compose(&s, &glide.inverse(&s)).is_identity(&s));
    }

    #[test]
    fn rejects_non_isometric_matrix() {
        let s = ModelSpace::euclidean(2);
        let shear = Isometry::linear(QMat::from_i64(&[&[1, 1], &[0, 1]]));
        assert!(shear.validate(&s).is_err());
    }
}
