//! Simplicial joins with the diagonal action.

use std::collections::HashSet;

use serde::Serialize;

use crate::covers::{fixed_subcomplex, VertexAction};
use crate::homology::{analyze_simplicial, Contractibility, Homology, HomologyResult, Simplex, SimplicialComplex};

/// `left * right`; right vertex ids are shifted by the left vertex count.
#[derive(Debug, Clone)]
pub struct JoinComplex {
    pub left: SimplicialComplex,
    pub right: SimplicialComplex,
}

impl JoinComplex {
    pub fn new(left: SimplicialComplex, right: SimplicialComplex) -> Self {
        JoinComplex { left, right }
    }

    pub fn offset(&self) -> u32 {
        self.left.vertex_count() as u32
    }

    pub fn labels(&self) -> Vec<String> {
        let l = self.left.labels.iter().map(|s| format!("U|{s}"));
        let r = self.right.labels.iter().map(|s| format!("V|{s}"));
        l.chain(r).collect()
    }

    pub fn simplex_count(&self) -> usize {
        (self.left.simplex_count() + 1) * (self.right.simplex_count() + 1) - 1
    }

    /// Splits a join simplex into its two (possibly empty) parts.
    pub fn split(&self, s: &[u32]) -> (Simplex, Simplex) {
        let o = self.offset();
        let (l, r): (Vec<u32>, Vec<u32>) = s.iter().partition(|&&v| v < o);
        (l, r.into_iter().map(|v| v - o).collect())
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        if s.is_empty() {
            return false;
        }
        let (l, r) = self.split(s);
        (l.is_empty() || self.left.contains(&l)) && (r.is_empty() || self.right.contains(&r))
    }

    /// Facets of the join are joins of facets.
    pub fn facets(&self) -> Vec<Simplex> {
        let o = self.offset();
        let lf = self.left.facets();
        let rf = self.right.facets();
        if lf.is_empty() {
            return rf.into_iter().map(|t| t.into_iter().map(|v| v + o).collect()).collect();
        }
        if rf.is_empty() {
            return lf;
        }
        let mut out = Vec::with_capacity(lf.len() * rf.len());
        for s in &lf {
            for t in &rf {
                out.push(s.iter().copied().chain(t.iter().map(|v| v + o)).collect());
            }
        }
        out
    }

    /// The explicit simplicial complex; `None` above `cap` simplices.
    pub fn to_simplicial(&self, cap: usize) -> Option<SimplicialComplex> {
        (self.simplex_count() <= cap).then(|| SimplicialComplex::from_simplices(self.labels(), self.facets()))
    }

    /// Every simplex, enumerated as pairs of factor simplices.
    pub fn simplices(&self) -> impl Iterator<Item = Simplex> + '_ {
        let o = self.offset();
        let left: Vec<Option<&Simplex>> = std::iter::once(None).chain(self.left.simplices().map(Some)).collect();
        let right: Vec<Option<&Simplex>> = std::iter::once(None).chain(self.right.simplices().map(Some)).collect();
        left.into_iter().flat_map(move |s| {
            let right = right.clone();
            right.into_iter().filter_map(move |t| {
                if s.is_none() && t.is_none() {
                    return None;
                }
                let mut out: Simplex = s.cloned().unwrap_or_default();
                out.extend(t.into_iter().flatten().map(|v| v + o));
                Some(out)
            })
        })
    }
}

/// The diagonal action on the join's vertices.
pub fn join_action(join: &JoinComplex, left: &VertexAction, right: &VertexAction) -> VertexAction {
    let o = join.offset();
    let perms = left
        .perms
        .iter()
        .zip(&right.perms)
        .map(|(pl, pr)| pl.iter().copied().chain(pr.iter().map(|x| x.map(|v| v + o))).collect())
        .collect();
    VertexAction { elements: left.elements.clone(), perms }
}

/// Outcome of comparing `Fix(X * Y)` with `Fix X * Fix Y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JoinIdentity {
    /// Simplices of the join mapped to themselves by every generator.
    pub invariant: usize,
    /// Simplices of the join of the fixed subcomplexes.
    pub joined: usize,
    /// Invariant simplices that are not fixed vertex by vertex.
    pub not_pointwise: usize,
    pub holds: bool,
}

fn invariant_simplices<'a>(c: &'a SimplicialComplex, action: &VertexAction) -> Vec<&'a Simplex> {
    c.simplices()
        .filter(|s| {
            action.perms.iter().all(|p| SimplicialComplex::map_simplex(p, s).map_or(false, |mut t| {
                t.sort_unstable();
                t == **s
            }))
        })
        .collect()
}

/// Checks the Fix-join identity exactly. A join simplex `s ⊔ t` is invariant
/// under the diagonal action iff both parts are, so both sides are products of
/// factor sets (each with the empty simplex) and are equal iff the factor sets are.
pub fn fix_join_identity(join: &JoinComplex, left: &VertexAction, right: &VertexAction) -> JoinIdentity {
    let mut not_pointwise = 0;
    let mut factor = |c: &SimplicialComplex, a: &VertexAction| {
        let fixed = a.fixed_vertices();
        let inv: HashSet<&Simplex> = invariant_simplices(c, a).into_iter().collect();
        not_pointwise += inv.iter().filter(|s| !s.iter().all(|v| fixed.contains(v))).count();
        let fix = fixed_subcomplex(c, a);
        let same = fix.simplex_count() == inv.len() && fix.simplices().all(|s| inv.contains(s));
        (inv.len(), fix.simplex_count(), same)
    };
    let (il, fl, sl) = factor(&join.left, left);
    let (ir, fr, sr) = factor(&join.right, right);
    JoinIdentity { invariant: (il + 1) * (ir + 1) - 1, joined: (fl + 1) * (fr + 1) - 1, not_pointwise, holds: sl && sr }
}

/// What is known about a join from its factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JoinStatus {
    pub status: Contractibility,
    pub homology: Option<Homology>,
    /// How the status was obtained.
    pub certificate: String,
}

/// A join collapses when either factor collapses (the join is then a collapsible cone
/// over the other factor); otherwise the homology comes from the factors.
pub fn join_status(left: &HomologyResult, right: &HomologyResult) -> JoinStatus {
    let (l, r) = (&left.homology, &right.homology);
    if l.empty && r.empty {
        return JoinStatus { status: Contractibility::Empty, homology: Some(l.clone()), certificate: "exact".into() };
    }
    if l.empty || r.empty {
        let other = if l.empty { right } else { left };
        let certificate = if other.collapsed_to_point { "collapse" } else { "homology" };
        return JoinStatus { status: other.status(), homology: Some(other.homology.clone()), certificate: certificate.into() };
    }
    if left.collapsed_to_point || right.collapsed_to_point {
        return JoinStatus { status: Contractibility::Collapsible, homology: Some(Homology::trivial()), certificate: "collapse (factor)".into() };
    }
    match l.join(r) {
        Some(h) => {
            let status = if h.is_acyclic() { Contractibility::AcyclicOnly } else { Contractibility::NotAcyclic };
            JoinStatus { status, homology: Some(h), certificate: "homology (join formula)".into() }
        }
        None => JoinStatus { status: Contractibility::NotAcyclic, homology: None, certificate: "undetermined (torsion in both factors)".into() },
    }
}

/// Direct analysis of a small join, used to cross-check [`join_status`].
pub fn analyze_join(join: &JoinComplex, cap: usize) -> Option<HomologyResult> {
    join.to_simplicial(cap).map(|c| analyze_simplicial(&c))
}
