//! Isometry groups of the model spaces: wallpaper presets, the tree odometer
//! example, enumeration of finite windows and semisimple classification.

pub mod classify;
pub mod enumerate;
pub mod isometry;
pub mod stabilizer;

use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;

use crate::linalg::QMat;
use crate::model::{EuclideanSpace, GeometryError, ModelSpace, TreeAutomorphism, TreeSpace};
use crate::rational::{q, qi, Q};

pub use classify::{classify, IsometryClass};
pub use enumerate::enumerate_elements;
pub use isometry::Isometry;
pub use stabilizer::{line_stabilizer_image, LineImage, StabilizerReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("unknown group preset `{0}`")]
    UnknownPreset(String),
    #[error("cannot enumerate a group without a declared lattice")]
    Unbounded,
    #[error("isometry {0} is neither elliptic nor hyperbolic within the truncated tree")]
    NotSemisimple(String),
    #[error("point group generated by the given isometries is infinite or too large")]
    InfinitePointGroup,
    #[error("{0} is not an element of the group")]
    NotInGroup(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    /// The lattice `Z^n` of basis translations together with one coset
    /// representative per point-group element.
    Crystallographic { cosets: Vec<Isometry> },
    /// The infinite cyclic group generated by a single tree-line isometry.
    TreeCyclic { generator: Isometry },
    /// Only generators are known.
    Generated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub name: String,
    pub space: ModelSpace,
    pub generators: Vec<Isometry>,
    pub kind: GroupKind,
}

pub const PRESETS: &[&str] = &["p1", "p2", "pm", "pg", "cm", "pmm", "p4", "p3", "p6", "tree-odometer"];

fn square() -> ModelSpace {
    ModelSpace::euclidean(2)
}

fn hexagonal() -> ModelSpace {
    ModelSpace::Euclidean(EuclideanSpace::with_gram(QMat::from_rows(vec![vec![qi(1), q(-1, 2)], vec![q(-1, 2), qi(1)]])))
}

fn powers(m: &QMat, k: usize) -> Vec<Isometry> {
    let mut out = vec![Isometry::linear(QMat::identity(m.rows))];
    let mut cur = QMat::identity(m.rows);
    for _ in 1..k {
        cur = m.mul(&cur);
        out.push(Isometry::linear(cur.clone()));
    }
    out
}

fn mat(rows: &[&[i64]]) -> QMat {
    QMat::from_i64(rows)
}

impl GroupSpec {
    /// Builds a preset by name; `tree_depth` only matters for `tree-odometer`.
    pub fn preset(name: &str, tree_depth: u32) -> Result<GroupSpec, GroupError> {
        let (space, cosets) = match name {
            "p1" => (square(), powers(&mat(&[&[1, 0], &[0, 1]]), 1)),
            "p2" => (square(), powers(&mat(&[&[-1, 0], &[0, -1]]), 2)),
            "pm" => (square(), powers(&mat(&[&[1, 0], &[0, -1]]), 2)),
            "pg" => (
                square(),
                vec![
                    Isometry::linear(QMat::identity(2)),
                    Isometry::affine(mat(&[&[1, 0], &[0, -1]]), vec![q(1, 2), qi(0)]),
                ],
            ),
            "pmm" => (
                square(),
                [mat(&[&[1, 0], &[0, 1]]), mat(&[&[1, 0], &[0, -1]]), mat(&[&[-1, 0], &[0, 1]]), mat(&[&[-1, 0], &[0, -1]])]
                    .into_iter()
                    .map(Isometry::linear)
                    .collect(),
            ),
            "cm" => {
                // basis (1, 1/2), (0, 1); the mirror is x -> -x
                let gram = QMat::from_rows(vec![vec![q(5, 4), q(1, 2)], vec![q(1, 2), qi(1)]]);
                (ModelSpace::Euclidean(EuclideanSpace::with_gram(gram)), powers(&mat(&[&[-1, 0], &[1, 1]]), 2))
            }
            "p4" => (square(), powers(&mat(&[&[0, -1], &[1, 0]]), 4)),
            "p3" => (hexagonal(), powers(&mat(&[&[0, -1], &[1, -1]]), 3)),
            "p6" => (hexagonal(), powers(&mat(&[&[1, -1], &[1, 0]]), 6)),
            "tree-odometer" => {
                let space = ModelSpace::TreeLine(TreeSpace::new(tree_depth, true));
                let gamma = Isometry::TreeLine { aut: TreeAutomorphism::Odometer(1), shift: qi(1) };
                return Ok(GroupSpec {
                    name: name.to_string(),
                    space,
                    generators: vec![gamma.clone()],
                    kind: GroupKind::TreeCyclic { generator: gamma },
                });
            }
            other => return Err(GroupError::UnknownPreset(other.to_string())),
        };
        let n = match &space {
            ModelSpace::Euclidean(e) => e.dim(),
            _ => unreachable!(),
        };
        let mut generators: Vec<Isometry> = cosets.iter().skip(1).cloned().collect();
        for i in 0..n {
            let mut v = vec![Q::zero(); n];
            v[i] = qi(1);
            generators.push(Isometry::translation(v));
        }
        Ok(GroupSpec { name: name.to_string(), space, generators, kind: GroupKind::Crystallographic { cosets } })
    }

    /// A crystallographic group given by generators, with the basis lattice `Z^n`
    /// declared to be its translation subgroup.
    pub fn with_lattice(name: &str, space: ModelSpace, generators: Vec<Isometry>) -> Result<GroupSpec, GroupError> {
        for g in &generators {
            g.validate(&space)?;
        }
        let n = match &space {
            ModelSpace::Euclidean(e) => e.dim(),
            _ => return Err(GroupError::Geometry(GeometryError::DomainMismatch)),
        };
        let reduce = |g: &Isometry| -> Isometry {
            let Isometry::Affine { lin, trans } = g else { unreachable!() };
            Isometry::affine(lin.clone(), trans.iter().map(|t| t - t.floor()).collect())
        };
        let id = Isometry::linear(QMat::identity(n));
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut cosets = vec![id.clone()];
        seen.insert(format!("{id}"));
        let mut queue = VecDeque::from([id]);
        while let Some(c) = queue.pop_front() {
            for g in &generators {
                let next = reduce(&g.compose(&space, &c));
                if seen.insert(format!("{next}")) {
                    if cosets.len() >= 48 {
                        return Err(GroupError::InfinitePointGroup);
                    }
                    cosets.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        let mut gens = generators;
        for i in 0..n {
            let mut v = vec![Q::zero(); n];
            v[i] = qi(1);
            gens.push(Isometry::translation(v));
        }
        Ok(GroupSpec { name: name.to_string(), space, generators: gens, kind: GroupKind::Crystallographic { cosets } })
    }

    pub fn dim(&self) -> Option<usize> {
        match &self.space {
            ModelSpace::Euclidean(e) => Some(e.dim()),
            _ => None,
        }
    }

    pub fn identity(&self) -> Isometry {
        Isometry::identity_for(&self.space)
    }

    /// Order of the point group (1 for the tree example).
    pub fn point_group_order(&self) -> usize {
        match &self.kind {
            GroupKind::Crystallographic { cosets } => cosets.len(),
            _ => 1,
        }
    }

    /// Membership test for isometries of the ambient space.
    pub fn contains(&self, g: &Isometry) -> bool {
        match (&self.kind, g) {
            (GroupKind::Crystallographic { cosets }, Isometry::Affine { lin, trans }) => cosets.iter().any(|c| {
                let Isometry::Affine { lin: cl, trans: ct } = c else { return false };
                cl == lin && trans.iter().zip(ct).all(|(a, b)| (a - b).is_integer())
            }),
            (GroupKind::TreeCyclic { generator }, Isometry::TreeLine { aut, shift }) => {
                let Isometry::TreeLine { shift: s0, .. } = generator else { return false };
                let k = shift / s0;
                let Some(k) = k.is_integer().then(|| k.to_integer()).and_then(|k| i64::try_from(k).ok()) else {
                    return false;
                };
                let Isometry::TreeLine { aut: pa, .. } = self.power(generator, k) else { return false };
                let t = isometry::tree_of(&self.space);
                pa.compose(t, &aut.inverse(t)).is_identity(t)
            }
            _ => false,
        }
    }

    pub fn power(&self, g: &Isometry, k: i64) -> Isometry {
        if let Isometry::TreeLine { aut: TreeAutomorphism::Odometer(a), shift } = g {
            return Isometry::TreeLine { aut: TreeAutomorphism::Odometer(a * k), shift: shift * Q::from_integer(k.into()) };
        }
        let base = if k < 0 { g.inverse(&self.space) } else { g.clone() };
        let mut out = self.identity();
        for _ in 0..k.unsigned_abs() {
            out = base.compose(&self.space, &out);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for name in PRESETS {
            let g = GroupSpec::preset(name, 6).unwrap();
            for x in &g.generators {
                x.validate(&g.space).unwrap();
            }
            if let GroupKind::Crystallographic { cosets } = &g.kind {
                for c in cosets {
                    c.validate(&g.space).unwrap();
                }
            }
        }
        assert!(GroupSpec::preset("p7", 6).is_err());
    }

    #[test]
    fn lattice_closure_recovers_p4() {
        let p4 = GroupSpec::preset("p4", 6).unwrap();
        let rot = p4.generators[0].clone();
        let g = GroupSpec::with_lattice("custom", p4.space.clone(), vec![rot]).unwrap();
        assert_eq!(g.point_group_order(), 4);
    }

    #[test]
    fn membership() {
        let pg = GroupSpec::preset("pg", 6).unwrap();
        let glide = Isometry::affine(mat(&[&[1, 0], &[0, -1]]), vec![q(3, 2), qi(2)]);
        assert!(pg.contains(&glide));
        let mirror = Isometry::linear(mat(&[&[1, 0], &[0, -1]]));
        assert!(!pg.contains(&mirror));
    }
}
