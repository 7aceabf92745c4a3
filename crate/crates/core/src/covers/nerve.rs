use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::group::Isometry;
use crate::homology::{Simplex, SimplicialComplex};
use crate::model::{common_point, Ball, GeometryError, Point};
use crate::rational::{fmt_q, to_f64};

use super::good::GoodCover;

/// All sets of vertices accepted by `extend`, grown one vertex at a time in
/// increasing order, pruned by the pairwise relation `adjacent`.
///
/// `start(v)` seeds the state of the singleton `{v}`; `extend(state, s, u)`
/// returns the state of `s ∪ {u}` when that set is accepted.
pub fn clique_complex<S, F, G>(labels: Vec<String>, adjacency: &[Vec<u32>], start: F, extend: G) -> SimplicialComplex
where
    S: Send,
    F: Fn(u32) -> Option<S> + Sync,
    G: Fn(&S, &[u32], u32) -> Option<S> + Sync,
{
    let n = adjacency.len();
    let per_vertex: Vec<Vec<Simplex>> = (0..n as u32)
        .into_par_iter()
        .map(|v| {
            let mut out = Vec::new();
            if let Some(state) = start(v) {
                let cand: Vec<u32> = adjacency[v as usize].iter().copied().filter(|&u| u > v).collect();
                grow(&mut out, adjacency, &extend, vec![v], &state, &cand);
            }
            out
        })
        .collect();
    let all: HashSet<Simplex> = per_vertex.into_iter().flatten().collect();
    SimplicialComplex::from_closed_set(labels, all)
}

fn grow<S, G>(out: &mut Vec<Simplex>, adjacency: &[Vec<u32>], extend: &G, simplex: Vec<u32>, state: &S, cand: &[u32])
where
    G: Fn(&S, &[u32], u32) -> Option<S>,
{
    out.push(simplex.clone());
    for (k, &u) in cand.iter().enumerate() {
        let Some(next) = extend(state, &simplex, u) else { continue };
        let adj = &adjacency[u as usize];
        let rest: Vec<u32> = cand[k + 1..].iter().copied().filter(|w| adj.binary_search(w).is_ok()).collect();
        let mut s = simplex.clone();
        s.push(u);
        grow(out, adjacency, extend, s, &next, &rest);
    }
}

/// Common point of the listed balls inside the cover's window.
pub fn window_witness(cover: &GoodCover, idx: &[u32]) -> Result<Option<Point>, GeometryError> {
    let d = &cover.domain;
    let mut balls: Vec<Ball> = idx.iter().map(|&i| cover.balls[i as usize].clone()).collect();
    match d.window.as_ball() {
        Some(w) => {
            balls.push(w);
            common_point(&d.space, &balls)
        }
        None => {
            let c = &d.window.center;
            Ok(balls.iter().all(|b| b.contains(&d.space, c).unwrap_or(false)).then(|| c.clone()))
        }
    }
}

pub fn vertex_label(cover: &GoodCover, i: usize) -> String {
    let b = &cover.balls[i];
    format!("o{}:{}:{}", cover.orbit[i], b.center, fmt_q(&b.radius)).replace(' ', "")
}

/// The nerve of the windowed cover: a set of balls spans a simplex when the
/// balls have a common point inside the window.
pub fn nerve(cover: &GoodCover) -> Result<SimplicialComplex, GeometryError> {
    let n = cover.len();
    let space = &cover.domain.space;
    let approx: Vec<Vec<f64>> = cover
        .balls
        .iter()
        .map(|b| match &b.center {
            Point::Euclidean(x) => x.iter().map(to_f64).collect(),
            _ => Vec::new(),
        })
        .collect();
    let euclid_gram = match space {
        crate::model::ModelSpace::Euclidean(e) => Some(e.gram.clone()),
        _ => None,
    };
    let gram_f: Option<Vec<Vec<f64>>> = euclid_gram.map(|g| (0..g.rows).map(|i| (0..g.cols).map(|j| to_f64(g.get(i, j))).collect()).collect());
    let radii: Vec<f64> = cover.balls.iter().map(|b| to_f64(&b.radius)).collect();
    let adjacency: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .filter(|&j| match &gram_f {
                    Some(g) => {
                        let d: Vec<f64> = approx[i].iter().zip(&approx[j]).map(|(a, b)| a - b).collect();
                        let d2: f64 = (0..d.len()).flat_map(|a| (0..d.len()).map(move |b| (a, b))).map(|(a, b)| d[a] * g[a][b] * d[b]).sum();
                        d2.max(0.0).sqrt() <= radii[i] + radii[j] + 1e-9
                    }
                    None => true,
                })
                .filter(|&j| {
                    let pair = if i < j { [i as u32, j as u32] } else { [j as u32, i as u32] };
                    matches!(window_witness(cover, &pair), Ok(Some(_)))
                })
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    let labels = (0..n).map(|i| vertex_label(cover, i)).collect();
    let complex = clique_complex(
        labels,
        &adjacency,
        |v| window_witness(cover, &[v]).ok().flatten(),
        |w: &Point, s: &[u32], u| {
            let b = &cover.balls[u as usize];
            if b.contains(space, w).unwrap_or(false) {
                return Some(w.clone());
            }
            let mut idx = s.to_vec();
            idx.push(u);
            window_witness(cover, &idx).ok().flatten()
        },
    );
    Ok(complex)
}

/// Local finiteness constant: the largest number of balls sharing a window point.
pub fn multiplicity(complex: &SimplicialComplex) -> usize {
    (complex.dim() + 1) as usize
}

/// Partial vertex permutations induced by group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexAction {
    pub elements: Vec<Isometry>,
    /// `perms[k][v]` is the image of vertex `v` under `elements[k]`, when in the window.
    pub perms: Vec<Vec<Option<u32>>>,
}

impl VertexAction {
    pub fn new(cover: &GoodCover, elements: &[Isometry]) -> Result<Self, GeometryError> {
        for g in elements {
            g.validate(&cover.domain.space)?;
        }
        let perms = elements
            .iter()
            .map(|g| (0..cover.len()).map(|i| cover.image(g, i).map(|j| j as u32)).collect())
            .collect();
        Ok(VertexAction { elements: elements.to_vec(), perms })
    }

    /// Vertices fixed by every listed element.
    pub fn fixed_vertices(&self) -> BTreeSet<u32> {
        let n = self.perms.first().map_or(0, Vec::len);
        (0..n as u32).filter(|&v| self.perms.iter().all(|p| p[v as usize] == Some(v))).collect()
    }
}

/// The full subcomplex on the vertices fixed by every generator of `H`.
pub fn fixed_subcomplex(complex: &SimplicialComplex, action: &VertexAction) -> SimplicialComplex {
    if action.elements.is_empty() {
        return complex.clone();
    }
    complex.full_subcomplex(&action.fixed_vertices())
}

/// Result of auditing a simplicial action on a windowed nerve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct EquivarianceCheck {
    pub simplices_checked: usize,
    /// Simplices whose image should be a simplex (its witness stays in the window) but is not.
    pub not_simplicial: Vec<String>,
    /// Simplices mapped to themselves without being fixed vertex by vertex.
    pub not_pointwise: Vec<String>,
}

impl EquivarianceCheck {
    pub fn passed(&self) -> bool {
        self.not_simplicial.is_empty() && self.not_pointwise.is_empty()
    }
}

pub fn check_equivariance(cover: &GoodCover, complex: &SimplicialComplex, action: &VertexAction) -> EquivarianceCheck {
    let d = &cover.domain;
    let results: Vec<EquivarianceCheck> = action
        .elements
        .par_iter()
        .zip(action.perms.par_iter())
        .map(|(g, perm)| {
            let mut out = EquivarianceCheck::default();
            for s in complex.simplices() {
                out.simplices_checked += 1;
                let Some(img) = SimplicialComplex::map_simplex(perm, s) else { continue };
                if img == *s && s.iter().any(|&v| perm[v as usize] != Some(v)) {
                    out.not_pointwise.push(format!("{g} permutes {s:?}"));
                }
                if !complex.contains(&img) {
                    if let Ok(Some(w)) = window_witness(cover, s) {
                        if d.window.contains(&d.space, &g.apply(&d.space, &w)) {
                            out.not_simplicial.push(format!("{g} maps {s:?} to non-simplex {img:?}"));
                        }
                    }
                }
            }
            out
        })
        .collect();
    results.into_iter().fold(EquivarianceCheck::default(), |mut acc, r| {
        acc.simplices_checked += r.simplices_checked;
        acc.not_simplicial.extend(r.not_simplicial);
        acc.not_pointwise.extend(r.not_pointwise);
        acc
    })
}
