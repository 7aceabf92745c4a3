//! Checks a construction against a family: fixed sets of family members must
//! be contractible and all other fixed sets empty.

use rayon::prelude::*;
use serde::Serialize;

use crate::covers::{check_equivariance, check_restriction, fixed_subcomplex, nerve, restriction_map, GoodCover, VertexAction};
use crate::group::{enumerate_elements, GroupSpec, Isometry};
use crate::homology::{analyze_simplicial, Contractibility, HomologyResult, SimplicialComplex};
use crate::lines::{induced_isometry, ClassSpace};
use crate::rational::Q;

use super::battery::Subgroup;
use super::build::Construction;
use super::family::{classify_family, Family, FamilyTag};
use super::join::{fix_join_identity, join_status, JoinComplex, JoinIdentity};
use super::quotient::{doubled_action, KActionCheck};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Fin,
    Vc,
    Fbc,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Fin => "fin",
            Target::Vc => "vc",
            Target::Fbc => "fbc",
        }
    }

    /// `None` when the family is undecided.
    pub fn contains(self, f: Family) -> Option<bool> {
        match (self, f) {
            (_, Family::Indeterminate) => None,
            (Target::Fin, f) => Some(f == Family::Fin),
            (Target::Vc, f) => Some(f != Family::NotVc),
            (Target::Fbc, f) => Some(matches!(f, Family::Fin | Family::FbcInf)),
        }
    }
}

impl std::str::FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fin" | "FIN" => Ok(Target::Fin),
            "vc" | "VC" => Ok(Target::Vc),
            "fbc" | "FBC" => Ok(Target::Fbc),
            _ => Err(format!("unknown family `{s}` (expected fin, vc or fbc)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Contractible,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Pass,
    Fail,
    Skipped,
}

/// Simplicity and pointwise fixedness of an action on a complex.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ActionAudit {
    pub elements: usize,
    pub simplices_checked: usize,
    /// Simplices whose vertices all map but whose image is not a simplex.
    pub not_simplicial: usize,
    /// Simplices mapped to themselves without being fixed vertex by vertex.
    pub not_pointwise: usize,
}

impl ActionAudit {
    pub fn passed(&self) -> bool {
        self.not_simplicial == 0 && self.not_pointwise == 0
    }

    fn merge(&mut self, o: &ActionAudit) {
        self.elements += o.elements;
        self.simplices_checked += o.simplices_checked;
        self.not_simplicial += o.not_simplicial;
        self.not_pointwise += o.not_pointwise;
    }
}

pub fn audit_action(complex: &SimplicialComplex, action: &VertexAction) -> ActionAudit {
    let simplices: Vec<&Vec<u32>> = complex.simplices().collect();
    let mut audit = ActionAudit { elements: action.perms.len(), ..ActionAudit::default() };
    for p in &action.perms {
        let (bad, loose) = simplices
            .par_iter()
            .map(|s| match SimplicialComplex::map_simplex(p, s) {
                None => (0, 0),
                Some(mut img) => {
                    img.sort_unstable();
                    let not_simplex = !complex.contains(&img);
                    let loose = img == **s && s.iter().any(|&v| p[v as usize] != Some(v));
                    (not_simplex as usize, loose as usize)
                }
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        audit.simplices_checked += simplices.len();
        audit.not_simplicial += bad;
        audit.not_pointwise += loose;
    }
    audit
}

/// Like [`audit_action`], but an image only has to be a simplex when the
/// moved witness point stays in the window.
pub fn audit_cover_action(cover: &GoodCover, complex: &SimplicialComplex, action: &VertexAction) -> ActionAudit {
    let chk = check_equivariance(cover, complex, action);
    ActionAudit {
        elements: action.perms.len(),
        simplices_checked: chk.simplices_checked,
        not_simplicial: chk.not_simplicial.len(),
        not_pointwise: chk.not_pointwise.len(),
    }
}

/// Summary of one restriction map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionSummary {
    pub factor: String,
    pub fixed_set: String,
    pub source_simplices: usize,
    pub target_simplices: usize,
    pub simplex_fibers: usize,
    pub homology_agrees: bool,
    pub passed: bool,
}

/// One battery subgroup checked against the target family.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub subgroup: String,
    pub generators: Vec<String>,
    pub tag: FamilyTag,
    pub expected: Option<Expectation>,
    /// `empty`, `collapsible`, `acyclic-only`, `acyclic-to-degree-k` or `not-acyclic`.
    pub observed: String,
    /// `exact`, `collapse`, `collapse (factor)`, `homology`, `acyclic-to-degree-k` or `none`.
    pub certificate: String,
    pub homology: Option<String>,
    pub fix_u: Vec<usize>,
    pub fix_v: Option<Vec<usize>>,
    pub fix_k: Option<Vec<usize>>,
    pub join_identity: Option<JoinIdentity>,
    pub restrictions: Vec<RestrictionSummary>,
    pub audit_u: ActionAudit,
    pub audit_v: Option<ActionAudit>,
    pub audit_k: Option<KActionCheck>,
    pub status: RowStatus,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub target: Target,
    pub rows: Vec<Row>,
    /// Every row passed and none was skipped.
    pub passed: bool,
}

/// What the fixed set was shown to be, with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub observed: String,
    pub certificate: String,
    pub homology: Option<String>,
    pub contractible_within: bool,
}

fn observe(r: &HomologyResult, truncation: Option<usize>) -> Observation {
    let homology = Some(r.homology.describe());
    let (observed, certificate, ok) = match r.status() {
        Contractibility::Empty => ("empty".to_string(), "exact".to_string(), false),
        Contractibility::Collapsible => ("collapsible".into(), "collapse".into(), true),
        Contractibility::AcyclicOnly => ("acyclic-only".into(), "homology".into(), true),
        Contractibility::NotAcyclic => match truncation {
            Some(k) if r.acyclic_through(k) => (format!("acyclic-to-degree-{k}"), format!("acyclic-to-degree-{k}"), true),
            _ => ("not-acyclic".into(), "homology".into(), false),
        },
    };
    Observation { observed, certificate, homology, contractible_within: ok }
}

/// Status of `left * right` where `right` is known through degree `truncation` only.
fn observe_join(left: &HomologyResult, right: &HomologyResult, truncation: Option<usize>) -> Observation {
    if left.homology.empty {
        return observe(right, truncation);
    }
    if right.homology.empty {
        return observe(left, None);
    }
    let js = join_status(left, right);
    let homology = js.homology.as_ref().map(|h| h.describe());
    match js.status {
        Contractibility::Collapsible => Observation { observed: "collapsible".into(), certificate: js.certificate, homology, contractible_within: true },
        Contractibility::AcyclicOnly => Observation { observed: "acyclic-only".into(), certificate: "homology".into(), homology, contractible_within: true },
        _ => {
            // the join shifts degrees up by one
            let through = truncation.map(|k| k + 1);
            let ok = match (&js.homology, through) {
                (Some(h), Some(k)) => (0..=k).all(|d| h.betti.get(d).map_or(true, |b| *b == 0) && h.torsion.get(d).map_or(true, Vec::is_empty)),
                _ => false,
            };
            match (ok, through) {
                (true, Some(k)) => Observation { observed: format!("acyclic-to-degree-{k}"), certificate: format!("acyclic-to-degree-{k}"), homology, contractible_within: true },
                _ => Observation { observed: "not-acyclic".into(), certificate: js.certificate, homology, contractible_within: false },
            }
        }
    }
}

fn summary(factor: String, check: &crate::covers::RestrictionCheck) -> RestrictionSummary {
    RestrictionSummary {
        factor,
        fixed_set: check.fixed_set.clone(),
        source_simplices: check.source_simplices,
        target_simplices: check.target_simplices,
        simplex_fibers: check.simplex_fibers,
        homology_agrees: check.homology_agrees,
        passed: check.passed(),
    }
}

/// Restriction maps of `H` on the class covers of `V` whose class `H` preserves.
fn class_restrictions(c: &Construction, gens: &[Isometry]) -> Vec<RestrictionSummary> {
    let Some(v) = c.v() else { return Vec::new() };
    let mut out = Vec::new();
    for class in &v.cover.classes {
        let induced: Option<Vec<Isometry>> = match &class.class {
            ClassSpace::Euclidean(f) => gens.iter().map(|g| induced_isometry(f, g)).collect(),
            ClassSpace::Tree(_) => gens
                .iter()
                .map(|g| match g {
                    Isometry::TreeLine { aut, .. } => Some(Isometry::Tree(aut.clone())),
                    _ => None,
                })
                .collect(),
        };
        let Some(induced) = induced else { continue };
        let Ok(complex) = nerve(&class.cover) else { continue };
        let Ok(action) = VertexAction::new(&class.cover, &induced) else { continue };
        let fixed = fixed_subcomplex(&complex, &action);
        if fixed.is_empty() {
            continue;
        }
        if let Ok(map) = restriction_map(&class.cover, &complex, &action) {
            out.push(summary(format!("V{}", class.class.label()), &check_restriction(&map)));
        }
    }
    out
}

/// Verifies one subgroup.
pub fn verify_row(group: &GroupSpec, c: &Construction, target: Target, sub: &Subgroup, restrictions: bool) -> Row {
    let gens = &sub.generators;
    let tag = match classify_family(group, gens) {
        Ok(t) => t,
        Err(e) => {
            let mut t = FamilyTag { family: Family::Indeterminate, ..classify_family(group, &[]).expect("trivial subgroup") };
            t.note = e.to_string();
            t
        }
    };
    let expected = target.contains(tag.family).map(|m| if m { Expectation::Contractible } else { Expectation::Empty });
    let u = c.u();
    let act_u = VertexAction::new(&u.cover, gens).unwrap_or_else(|_| VertexAction { elements: gens.clone(), perms: vec![vec![None; u.cover.len()]; gens.len()] });
    let fix_u = fixed_subcomplex(&u.nerve, &act_u);
    let res_u = analyze_simplicial(&fix_u);
    let audit_u = audit_cover_action(&u.cover, &u.nerve, &act_u);
    let mut restrictions_out = Vec::new();
    if restrictions && !fix_u.is_empty() {
        match restriction_map(&u.cover, &u.nerve, &act_u) {
            Ok(map) => restrictions_out.push(summary("U".into(), &check_restriction(&map))),
            Err(e) => restrictions_out.push(RestrictionSummary {
                factor: "U".into(),
                fixed_set: e.to_string(),
                source_simplices: fix_u.simplex_count(),
                target_simplices: 0,
                simplex_fibers: 0,
                homology_agrees: false,
                passed: false,
            }),
        }
    }
    let mut row = Row {
        subgroup: sub.name.clone(),
        generators: gens.iter().map(|g| g.to_string()).collect(),
        tag,
        expected,
        observed: String::new(),
        certificate: String::new(),
        homology: None,
        fix_u: fix_u.counts(),
        fix_v: None,
        fix_k: None,
        join_identity: None,
        restrictions: restrictions_out,
        audit_u,
        audit_v: None,
        audit_k: None,
        status: RowStatus::Fail,
        reason: String::new(),
    };
    let obs = match c {
        Construction::Fin { .. } => observe(&res_u, None),
        Construction::Vc { v, .. } => {
            let act_v = v.cover.action(gens);
            let fix_v = fixed_subcomplex(&v.nerve, &act_v);
            row.fix_v = Some(fix_v.counts());
            row.audit_v = Some(audit_action(&v.nerve, &act_v));
            let join = JoinComplex::new(u.nerve.clone(), v.nerve.clone());
            row.join_identity = Some(fix_join_identity(&join, &act_u, &act_v));
            if restrictions && !fix_v.is_empty() {
                row.restrictions.extend(class_restrictions(c, gens));
            }
            observe_join(&res_u, &analyze_simplicial(&fix_v), None)
        }
        Construction::Fbc { v, k, .. } => {
            let act_d = doubled_action(&v.cover, gens);
            row.audit_k = Some(k.quotient.check_action(&act_d));
            let fixed_cells = k.quotient.fixed_cells(&act_d).len();
            let res_k = k.quotient.analyze_fixed(&act_d).expect("fixed cells form a subcomplex");
            row.fix_k = Some(res_k.cells.clone());
            if fixed_cells == 0 {
                row.fix_k = Some(Vec::new());
            }
            let n = k.quotient.sphere.dim;
            observe_join(&res_u, &res_k, Some(n.saturating_sub(1)))
        }
    };
    row.observed = obs.observed;
    row.certificate = obs.certificate;
    row.homology = obs.homology;
    let audits_ok = row.audit_u.passed()
        && row.audit_v.as_ref().map_or(true, ActionAudit::passed)
        && row.audit_k.as_ref().map_or(true, KActionCheck::passed)
        && row.join_identity.as_ref().map_or(true, |j| j.holds)
        && row.restrictions.iter().all(|r| r.passed);
    let (status, reason) = match expected {
        None => (RowStatus::Skipped, format!("family undecided: {}", row.tag.note)),
        Some(Expectation::Empty) if row.observed != "empty" => (RowStatus::Fail, format!("expected an empty fixed set, found {}", row.observed)),
        Some(Expectation::Contractible) if !obs.contractible_within => {
            (RowStatus::Fail, format!("expected a contractible fixed set, found {}", row.observed))
        }
        Some(_) if !audits_ok => (RowStatus::Fail, "an audit failed".into()),
        Some(_) => (RowStatus::Pass, String::new()),
    };
    row.status = status;
    row.reason = reason;
    row
}

pub fn verify(group: &GroupSpec, c: &Construction, target: Target, battery: &[Subgroup], restrictions: bool) -> Verification {
    let rows: Vec<Row> = battery.par_iter().map(|s| verify_row(group, c, target, s, restrictions)).collect();
    let passed = rows.iter().all(|r| r.status == RowStatus::Pass);
    Verification { target, rows, passed }
}

/// Audits of every element of displacement at most `bound` on every factor.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EquivarianceAudit {
    pub elements: usize,
    pub u: ActionAudit,
    pub v: Option<ActionAudit>,
    pub k: Option<KActionCheck>,
}

impl EquivarianceAudit {
    pub fn passed(&self) -> bool {
        self.u.passed() && self.v.as_ref().map_or(true, ActionAudit::passed) && self.k.as_ref().map_or(true, KActionCheck::passed)
    }
}

pub fn audit_construction(group: &GroupSpec, c: &Construction, bound: &Q) -> Result<EquivarianceAudit, crate::group::GroupError> {
    let elements = enumerate_elements(group, bound, &group.space.origin())?;
    let u = c.u();
    let mut out = EquivarianceAudit { elements: elements.len(), ..EquivarianceAudit::default() };
    for g in &elements {
        let one = std::slice::from_ref(g);
        if let Ok(a) = VertexAction::new(&u.cover, one) {
            out.u.merge(&audit_cover_action(&u.cover, &u.nerve, &a));
        }
        if let Some(v) = c.v() {
            let a = v.cover.action(one);
            out.v.get_or_insert_with(ActionAudit::default).merge(&audit_action(&v.nerve, &a));
        }
        if let Some(k) = c.k() {
            let v = c.v().expect("K comes with V");
            let chk = k.quotient.check_action(&doubled_action(&v.cover, one));
            let acc = out.k.get_or_insert_with(KActionCheck::default);
            acc.swap_failures += chk.swap_failures;
            acc.ill_defined += chk.ill_defined;
            acc.undefined_images += chk.undefined_images;
            acc.invariant_cells += chk.invariant_cells;
            acc.not_pointwise += chk.not_pointwise;
        }
    }
    Ok(out)
}
