use num_traits::Zero;

use crate::linalg::{gnorm2, is_zero_vec, project_affine, project_onto_span, vsub, QMat, QVec};
use crate::lines::Line;
use crate::model::{ModelSpace, Point};
use crate::rational::{Length, Q};

use super::{GroupError, GroupSpec, Isometry};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsometryClass {
    Elliptic { fixed: Point },
    Hyperbolic { length: Length, axis: Line },
}

impl IsometryClass {
    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, IsometryClass::Hyperbolic { .. })
    }

    pub fn translation_length2(&self) -> Q {
        match self {
            IsometryClass::Elliptic { .. } => Q::zero(),
            IsometryClass::Hyperbolic { length, .. } => length.squared.clone(),
        }
    }
}

/// Translation part of `g` that survives on its minimal set: the projection
/// of the translation vector onto the fixed space of the linear part.
fn minimal_translation(gram: &QMat, lin: &QMat, trans: &[Q]) -> QVec {
    let fixed_dirs = lin.sub(&QMat::identity(lin.rows)).nullspace();
    project_onto_span(gram, &fixed_dirs, trans)
}

/// Minimal displacement set `{x : g x - x = t_min}` as a point plus directions.
fn min_set(lin: &QMat, trans: &[Q], t_min: &[Q]) -> (QVec, Vec<QVec>) {
    let a = lin.sub(&QMat::identity(lin.rows));
    a.solve_affine(&vsub(t_min, trans)).expect("minimal set of an isometry is non-empty")
}

/// Classifies `g` as elliptic (with the fixed point nearest the origin) or
/// hyperbolic (with its translation length and the axis nearest the origin).
pub fn classify(group: &GroupSpec, g: &Isometry) -> Result<IsometryClass, GroupError> {
    classify_near(&group.space, g, &group.space.origin())
}

/// As [`classify`], choosing the fixed point or axis nearest to `basepoint`.
pub fn classify_near(space: &ModelSpace, g: &Isometry, basepoint: &Point) -> Result<IsometryClass, GroupError> {
    g.validate(space)?;
    match (space, g) {
        (ModelSpace::Euclidean(e), Isometry::Affine { lin, trans }) => {
            let Point::Euclidean(b) = basepoint else { return Err(GroupError::Geometry(crate::model::GeometryError::DomainMismatch)) };
            let t_min = minimal_translation(&e.gram, lin, trans);
            let (x0, dirs) = min_set(lin, trans, &t_min);
            let nearest = project_affine(&e.gram, &x0, &dirs, b);
            if is_zero_vec(&t_min) {
                Ok(IsometryClass::Elliptic { fixed: Point::Euclidean(nearest) })
            } else {
                let axis = Line::through(space, &nearest, &t_min)?;
                Ok(IsometryClass::Hyperbolic { length: Length::from_squared(gnorm2(&e.gram, &t_min)), axis })
            }
        }
        (ModelSpace::Tree(t), Isometry::Tree(a)) => {
            let Point::Tree(x) = basepoint else { return Err(GroupError::Geometry(crate::model::GeometryError::DomainMismatch)) };
            Ok(IsometryClass::Elliptic { fixed: Point::Tree(a.nearest_fixed(t, x)) })
        }
        (ModelSpace::TreeLine(t), Isometry::TreeLine { aut, shift }) => {
            let Point::TreeLine(x, s) = basepoint else { return Err(GroupError::Geometry(crate::model::GeometryError::DomainMismatch)) };
            let y = aut.nearest_fixed(t, x);
            if shift.is_zero() {
                Ok(IsometryClass::Elliptic { fixed: Point::TreeLine(y, s.clone()) })
            } else {
                Ok(IsometryClass::Hyperbolic { length: Length::from_rational(shift), axis: Line::Vertical(y) })
            }
        }
        _ => Err(GroupError::Geometry(crate::model::GeometryError::DomainMismatch)),
    }
}

/// Whether `line` is an axis of `g`: `g` preserves it and moves it along itself
/// by a non-trivial translation.
pub fn is_axis(space: &ModelSpace, g: &Isometry, line: &Line) -> bool {
    if line.map(space, g) != *line || line.orientation_sign(g) != 1 {
        return false;
    }
    let a = line.anchor(space);
    let ga = g.apply(space, &a);
    ga != a
}
