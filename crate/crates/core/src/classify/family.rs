//! Which of the families FIN ⊂ FBC ⊂ VC a finitely generated subgroup lies in.
//!
//! For crystallographic groups this is exact: the point group of `H` is
//! closed up, Schreier generators span the translation lattice of `H`, and
//! its rank decides finiteness and virtual cyclicity. A rank-one `H` is
//! finite-by-cyclic exactly when no element reverses the lattice direction.

use std::collections::HashMap;

use serde::Serialize;

use crate::group::{GroupError, GroupKind, GroupSpec, Isometry};
use crate::linalg::{canonical_sign, int_vec, primitive_direction, QMat, QVec};
use crate::model::ModelSpace;
use crate::rational::fmt_vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    #[serde(rename = "FIN")]
    Fin,
    #[serde(rename = "FBC_INF")]
    FbcInf,
    #[serde(rename = "VC_INF_NOT_FBC")]
    VcInfNotFbc,
    #[serde(rename = "NOT_VC")]
    NotVc,
    #[serde(rename = "INDETERMINATE")]
    Indeterminate,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Fin => "FIN",
            Family::FbcInf => "FBC_INF",
            Family::VcInfNotFbc => "VC_INF_NOT_FBC",
            Family::NotVc => "NOT_VC",
            Family::Indeterminate => "INDETERMINATE",
        }
    }
}

/// The family of a subgroup with the data that decided it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyTag {
    pub family: Family,
    pub point_group_order: usize,
    /// Rank of the translation subgroup (or of the shifts, for the tree line).
    pub translation_rank: usize,
    pub translations: Vec<String>,
    /// Primitive direction of the invariant line class, when virtually cyclic.
    pub line_direction: Option<Vec<i64>>,
    /// `translations` or `has-involution`, when virtually cyclic.
    pub line_image: Option<String>,
    pub reversing_element: Option<String>,
    pub note: String,
}

impl FamilyTag {
    fn new(family: Family, note: impl Into<String>) -> Self {
        FamilyTag {
            family,
            point_group_order: 1,
            translation_rank: 0,
            translations: Vec::new(),
            line_direction: None,
            line_image: None,
            reversing_element: None,
            note: note.into(),
        }
    }
}

/// Largest point group closed up before giving up.
const POINT_GROUP_CAP: usize = 96;

pub fn classify_family(group: &GroupSpec, generators: &[Isometry]) -> Result<FamilyTag, GroupError> {
    let space = &group.space;
    for g in generators {
        g.validate(space)?;
        if !matches!(group.kind, GroupKind::Generated) && !group.contains(g) {
            return Err(GroupError::NotInGroup(g.to_string()));
        }
    }
    let gens: Vec<&Isometry> = generators.iter().filter(|g| !g.is_identity(space)).collect();
    match space {
        ModelSpace::Euclidean(_) => Ok(euclidean_family(space, &gens)),
        ModelSpace::TreeLine(_) => {
            let shifted: Vec<String> = gens
                .iter()
                .filter_map(|g| match g {
                    Isometry::TreeLine { shift, .. } if !num_traits::Zero::is_zero(shift) => Some(g.to_string()),
                    _ => None,
                })
                .collect();
            if shifted.is_empty() {
                return Ok(FamilyTag::new(Family::Fin, "no generator moves the line factor"));
            }
            // every element preserves the orientation of the line factor
            let mut tag = FamilyTag::new(Family::FbcInf, "shifts along the line factor, no reflections");
            tag.translation_rank = 1;
            tag.translations = shifted;
            tag.line_image = Some("translations".into());
            Ok(tag)
        }
        ModelSpace::Tree(_) => Ok(FamilyTag::new(Family::Fin, "tree automorphisms fix the root")),
    }
}

fn euclidean_family(space: &ModelSpace, gens: &[&Isometry]) -> FamilyTag {
    if gens.is_empty() {
        return FamilyTag::new(Family::Fin, "trivial subgroup");
    }
    let n = gens[0].lin().expect("affine").rows;
    // transversal: one element of H for each linear part
    let mut reps: Vec<Isometry> = vec![Isometry::linear(QMat::identity(n))];
    let mut seen: HashMap<QMat, usize> = HashMap::from([(QMat::identity(n), 0)]);
    let mut i = 0;
    while i < reps.len() {
        for s in gens {
            let h = reps[i].compose(space, s);
            let lin = h.lin().expect("affine").clone();
            if !seen.contains_key(&lin) {
                if reps.len() >= POINT_GROUP_CAP {
                    return FamilyTag::new(Family::Indeterminate, "point group did not close");
                }
                seen.insert(lin, reps.len());
                reps.push(h);
            }
        }
        i += 1;
    }
    let mut lattice: Vec<QVec> = Vec::new();
    for r in &reps {
        for s in gens {
            let h = r.compose(space, s);
            let back = &reps[seen[h.lin().expect("affine")]];
            let t = h.compose(space, &back.inverse(space));
            let v = t.trans().expect("affine").clone();
            if v.iter().any(|x| !num_traits::Zero::is_zero(x)) && !lattice.contains(&v) {
                lattice.push(v);
            }
        }
    }
    lattice.sort();
    let rank = if lattice.is_empty() { 0 } else { QMat::from_rows(lattice.clone()).rank() };
    let mut tag = FamilyTag::new(Family::Fin, "");
    tag.point_group_order = reps.len();
    tag.translation_rank = rank;
    tag.translations = lattice.iter().map(|v| fmt_vec(v)).collect();
    match rank {
        0 => tag.note = "no translations: H is its finite point group".into(),
        1 => {
            let (dir, _) = canonical_sign(&primitive_direction(&lattice[0]).expect("nonzero"));
            let v = int_vec(&dir);
            let neg: QVec = v.iter().map(|x| -x).collect();
            let reversing = reps.iter().find(|r| r.lin().expect("affine").mul_vec(&v) == neg);
            tag.line_direction = Some(dir);
            match reversing {
                Some(r) => {
                    tag.family = Family::VcInfNotFbc;
                    tag.line_image = Some("has-involution".into());
                    tag.reversing_element = Some(r.to_string());
                    tag.note = "an element reverses the invariant direction".into();
                }
                None => {
                    tag.family = Family::FbcInf;
                    tag.line_image = Some("translations".into());
                    tag.note = "every element preserves the invariant direction".into();
                }
            }
        }
        _ => {
            tag.family = Family::NotVc;
            tag.note = "translation subgroup of rank at least two".into();
        }
    }
    tag
}
