//! Good covers of a space of axes, built one parallel class at a time on the
//! class spaces and moved between classes of one orbit by coset representatives.

use std::collections::HashSet;

use itertools::Itertools;

use crate::group::{GroupKind, GroupSpec, Isometry};
use crate::homology::SimplicialComplex;
use crate::linalg::{canonical_sign, int_vec, vadd};
use crate::lines::{class_map, induced_group, AxesKind, AxesSpace, ClassSpace, DirectionFrame};
use crate::model::{Ball, ModelSpace, Point, TreeAutomorphism};
use crate::rational::{fmt_q, Q};

use super::domain::{CoverDomain, ElementSource, Window};
use super::good::{build_good_cover, check_good_cover, orbit_bundle, CoverCheck, CoverError, CoverPolicy, GoodCover};
use super::nerve::{nerve, VertexAction};

/// The cover of one parallel class, with its vertex ids starting at `offset`.
#[derive(Debug, Clone)]
pub struct ClassCover {
    pub class: ClassSpace,
    /// Index of the class orbit this class belongs to.
    pub orbit: usize,
    pub cover: GoodCover,
    pub offset: u32,
}

#[derive(Debug, Clone)]
pub struct AxesCover {
    pub space: ModelSpace,
    pub classes: Vec<ClassCover>,
}

impl AxesCover {
    pub fn len(&self) -> usize {
        self.classes.iter().map(|c| c.cover.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Class index and ball index of vertex `v`.
    pub fn locate(&self, v: u32) -> (usize, usize) {
        let k = self.classes.iter().rposition(|c| c.offset <= v).expect("vertex id in range");
        (k, (v - self.classes[k].offset) as usize)
    }

    pub fn label(&self, v: u32) -> String {
        let (k, i) = self.locate(v);
        let c = &self.classes[k];
        let b = &c.cover.balls[i];
        format!("{}:o{}:{}:{}", c.class.label(), c.cover.orbit[i], b.center, fmt_q(&b.radius)).replace(' ', "")
    }

    fn class_of_dir(&self, dir: &[i64]) -> Option<usize> {
        self.classes.iter().position(|c| matches!(&c.class, ClassSpace::Euclidean(f) if f.dir == dir))
    }

    /// Image of vertex `v` under `g`, when it lies in the window.
    pub fn image(&self, g: &Isometry, v: u32) -> Option<u32> {
        let (k, i) = self.locate(v);
        let from = &self.classes[k];
        let ball = &from.cover.balls[i];
        match (&from.class, g) {
            (ClassSpace::Euclidean(f), Isometry::Affine { lin, .. }) => {
                let img = lin.mul_vec(&int_vec(&f.dir));
                let dir: Vec<i64> = img.iter().map(|x| x.to_integer().try_into().expect("integral direction")).collect();
                let j = self.class_of_dir(&canonical_sign(&dir).0)?;
                let ClassSpace::Euclidean(to) = &self.classes[j].class else { return None };
                let (m, tau) = class_map(f, to, g);
                let Point::Euclidean(s) = &ball.center else { return None };
                let moved = Ball { center: Point::Euclidean(vadd(&m.mul_vec(s), &tau)), ..ball.clone() };
                self.classes[j].cover.index_of(&moved).map(|b| self.classes[j].offset + b as u32)
            }
            (ClassSpace::Tree(_), Isometry::TreeLine { aut, .. }) => {
                from.cover.image(&Isometry::Tree(aut.clone()), i).map(|b| from.offset + b as u32)
            }
            _ => None,
        }
    }

    /// Whether `g` reverses the canonical orientation of the lines of vertex `v`.
    pub fn reverses(&self, g: &Isometry, v: u32) -> bool {
        let (k, _) = self.locate(v);
        match (&self.classes[k].class, g) {
            (ClassSpace::Euclidean(f), Isometry::Affine { lin, .. }) => {
                let img = lin.mul_vec(&int_vec(&f.dir));
                let dir: Vec<i64> = img.iter().map(|x| x.to_integer().try_into().expect("integral direction")).collect();
                canonical_sign(&dir).1 < 0
            }
            _ => false,
        }
    }

    pub fn action(&self, elements: &[Isometry]) -> VertexAction {
        let perms = elements.iter().map(|g| (0..self.len() as u32).map(|v| self.image(g, v)).collect()).collect();
        VertexAction { elements: elements.to_vec(), perms }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len() as u32).map(|v| self.label(v)).collect()
    }
}

/// Builds the cover of the axes meeting the `radius` window about the origin.
pub fn build_axes_cover(group: &GroupSpec, axes: &AxesSpace, radius: &Q, policy: &CoverPolicy) -> Result<AxesCover, CoverError> {
    let mut classes: Vec<ClassCover> = Vec::new();
    match &axes.kind {
        AxesKind::Euclidean { classes: found } => {
            let GroupKind::Crystallographic { cosets } = &group.kind else {
                return Err(CoverError::Unsupported("axes of a non-crystallographic group in Euclidean space".into()));
            };
            let frames: Vec<DirectionFrame> = found
                .iter()
                .map(|c| match &c.class {
                    ClassSpace::Euclidean(f) => f.clone(),
                    ClassSpace::Tree(_) => unreachable!("euclidean axes"),
                })
                .collect();
            let mut done: HashSet<usize> = HashSet::new();
            let mut orbit = 0;
            for r in 0..frames.len() {
                if done.contains(&r) {
                    continue;
                }
                let rep = &frames[r];
                let base = build_good_cover(&class_domain(group, rep, radius), policy)?;
                for (k, target) in frames.iter().enumerate() {
                    if done.contains(&k) {
                        continue;
                    }
                    let Some(g) = cosets.iter().find(|g| maps_direction(g, rep, target)) else { continue };
                    done.insert(k);
                    let cover = if k == r { base.clone() } else { transport(group, &base, rep, target, g, radius)? };
                    classes.push(ClassCover { class: ClassSpace::Euclidean(target.clone()), orbit, cover, offset: 0 });
                }
                orbit += 1;
            }
            classes.sort_by(|a, b| a.class.label().cmp(&b.class.label()));
        }
        AxesKind::Tree { tree, max_level: Some(m) } => {
            let period = 1i64 << tree.depth.min(62);
            let elements = (0..period).map(|k| Isometry::Tree(TreeAutomorphism::Odometer(k))).collect();
            let domain = CoverDomain::new(
                ModelSpace::Tree(tree.clone()),
                ElementSource::Finite(elements),
                Window { center: ModelSpace::Tree(tree.clone()).origin(), radius: tree.node_depth(*m) },
            );
            let cover = build_good_cover(&domain, policy)?;
            classes.push(ClassCover { class: ClassSpace::Tree(tree.clone()), orbit: 0, cover, offset: 0 });
        }
        AxesKind::Tree { max_level: None, .. } => {}
    }
    let mut offset = 0u32;
    for c in &mut classes {
        c.offset = offset;
        offset += c.cover.len() as u32;
    }
    Ok(AxesCover { space: axes.space.clone(), classes })
}

fn class_domain(group: &GroupSpec, frame: &DirectionFrame, radius: &Q) -> CoverDomain {
    let induced = induced_group(group, frame);
    let origin = induced.space.origin();
    CoverDomain::new(induced.space.clone(), ElementSource::Group(induced), Window { center: origin, radius: radius.clone() })
}

fn maps_direction(g: &Isometry, from: &DirectionFrame, to: &DirectionFrame) -> bool {
    let Isometry::Affine { lin, .. } = g else { return false };
    let img = lin.mul_vec(&int_vec(&from.dir));
    let t = int_vec(&to.dir);
    img == t || img.iter().zip(&t).all(|(a, b)| *a == -b.clone())
}

/// The cover of `to` obtained by moving the orbit representatives of `base` with `g`.
fn transport(group: &GroupSpec, base: &GoodCover, from: &DirectionFrame, to: &DirectionFrame, g: &Isometry, radius: &Q) -> Result<GoodCover, CoverError> {
    let (m, tau) = class_map(from, to, g);
    let domain = class_domain(group, to, radius);
    let reps: Vec<Ball> = base
        .reps
        .iter()
        .map(|b| {
            let Point::Euclidean(s) = &b.center else { unreachable!("euclidean class space") };
            Ball { center: Point::Euclidean(vadd(&m.mul_vec(s), &tau)), ..b.clone() }
        })
        .collect();
    let mut tagged = Vec::new();
    for (o, b) in reps.iter().enumerate() {
        tagged.extend(orbit_bundle(&domain, b)?.into_iter().map(|x| (x, o)));
    }
    Ok(GoodCover::from_parts(domain, base.policy.clone(), tagged, reps, base.shells.clone()))
}

/// The nerve of the axes cover: the disjoint union of the class nerves.
pub fn axes_nerve(cover: &AxesCover) -> Result<SimplicialComplex, CoverError> {
    let mut facets = Vec::new();
    for c in &cover.classes {
        let n = nerve(&c.cover)?;
        facets.extend(n.facets().into_iter().map(|s| s.iter().map(|v| v + c.offset).collect_vec()));
    }
    Ok(SimplicialComplex::from_simplices(cover.labels(), facets))
}

/// Good-cover axioms class by class.
pub fn check_axes_cover(cover: &AxesCover) -> Result<Vec<CoverCheck>, CoverError> {
    cover.classes.iter().map(|c| check_good_cover(&c.cover)).collect()
}
