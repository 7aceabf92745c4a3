//! Fixed sets of subgroups in the model space and the restriction of a nerve
//! to such a fixed set.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::group::Isometry;
use crate::homology::{analyze_simplicial, HomologyResult, Simplex, SimplicialComplex};
use crate::linalg::{gnorm2, vadd, vsub, QMat, QVec};
use crate::model::{minimax, ModelSpace, Point, TreeAutomorphism, TreePoint, TreeSpace, WeightedPoint};
use crate::rational::{fmt_vec, to_f64, Q};

use super::good::{CoverError, GoodCover};
use super::nerve::{clique_complex, fixed_subcomplex, vertex_label, VertexAction};

/// The points of the model space fixed by every generator of a subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedSet {
    Empty,
    Whole,
    /// `point + span(basis)` in lattice coordinates.
    Affine { point: QVec, basis: Vec<QVec> },
    /// A rooted subtree: the points fixed by all listed automorphisms.
    Subtree(Vec<TreeAutomorphism>),
}

impl FixedSet {
    pub fn of(space: &ModelSpace, generators: &[Isometry]) -> Result<FixedSet, CoverError> {
        for g in generators {
            g.validate(space)?;
        }
        let moving: Vec<&Isometry> = generators.iter().filter(|g| !g.is_identity(space)).collect();
        match space {
            ModelSpace::Euclidean(e) => {
                let n = e.dim();
                let mut rows = Vec::new();
                let mut rhs = Vec::new();
                for g in &moving {
                    let (lin, trans) = (g.lin().expect("affine"), g.trans().expect("affine"));
                    for r in 0..n {
                        rows.push((0..n).map(|c| if r == c { lin.get(r, c) - Q::one() } else { lin.get(r, c).clone() }).collect());
                        rhs.push(-trans[r].clone());
                    }
                }
                if rows.is_empty() {
                    let basis = (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
                    return Ok(FixedSet::Affine { point: vec![Q::zero(); n], basis });
                }
                Ok(match QMat::from_rows(rows).solve_affine(&rhs) {
                    Some((point, basis)) => FixedSet::Affine { point, basis },
                    None => FixedSet::Empty,
                })
            }
            _ if moving.is_empty() => Ok(FixedSet::Whole),
            ModelSpace::Tree(_) => {
                Ok(FixedSet::Subtree(moving.iter().map(|g| match g {
                    Isometry::Tree(a) => a.clone(),
                    _ => unreachable!("validated"),
                }).collect()))
            }
            ModelSpace::TreeLine(_) => {
                if moving.iter().any(|g| matches!(g, Isometry::TreeLine { shift, .. } if !shift.is_zero())) {
                    Ok(FixedSet::Empty)
                } else {
                    Err(CoverError::Unsupported("fixed sets of tree automorphisms on the tree times a line".into()))
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, FixedSet::Empty)
    }

    pub fn contains(&self, space: &ModelSpace, p: &Point) -> bool {
        match (self, p) {
            (FixedSet::Empty, _) => false,
            (FixedSet::Whole, _) => true,
            (FixedSet::Affine { point, basis }, Point::Euclidean(x)) => {
                let d = vsub(x, point);
                if basis.is_empty() {
                    return d.iter().all(Zero::is_zero);
                }
                let m = QMat::from_columns(basis);
                m.solve_affine(&d).is_some()
            }
            (FixedSet::Subtree(gens), Point::Tree(x)) => {
                let ModelSpace::Tree(t) = space else { return false };
                gens.iter().all(|a| a.fixes(t, x))
            }
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FixedSet::Empty => "empty".into(),
            FixedSet::Whole => "whole space".into(),
            FixedSet::Affine { point, basis } => {
                format!("{} + span{{{}}}", fmt_vec(point), basis.iter().map(|b| fmt_vec(b)).join(", "))
            }
            FixedSet::Subtree(gens) => format!("subtree fixed by {gens:?}"),
        }
    }
}

/// Coordinates on an affine subspace: `x = point + B y`.
struct Flat {
    point: QVec,
    b: QMat,
    /// Gram matrix of the basis.
    gram: QMat,
    /// Orthogonal projection to `y` coordinates.
    proj: QMat,
    ambient: QMat,
}

impl Flat {
    fn new(ambient: &QMat, point: &QVec, basis: &[QVec]) -> Flat {
        let n = ambient.rows;
        let k = basis.len();
        if k == 0 {
            return Flat { point: point.clone(), b: QMat::zeros(n, 0), gram: QMat::zeros(0, 0), proj: QMat::zeros(0, n), ambient: ambient.clone() };
        }
        let b = QMat::from_columns(basis);
        let bt = b.transpose();
        let gram = bt.mul(ambient).mul(&b);
        let proj = gram.inverse().expect("independent basis").mul(&bt).mul(ambient);
        Flat { point: point.clone(), b, gram, proj, ambient: ambient.clone() }
    }

    /// The trace of the ball `|x - c|^2 < r2` as a weighted point in `y`
    /// coordinates; the trace is `{y : |y - y_c|^2 - weight < 0}`.
    fn restrict(&self, c: &[Q], r2: &Q) -> WeightedPoint {
        let y = self.proj.mul_vec(&vsub(c, &self.point));
        let foot = self.lift(&y);
        let d2 = gnorm2(&self.ambient, &vsub(c, &foot));
        WeightedPoint::new(y, r2 - d2)
    }

    fn lift(&self, y: &[Q]) -> QVec {
        vadd(&self.point, &self.b.mul_vec(y))
    }
}

/// A point with every open term negative and the closed term non-positive.
/// Exact: the minimiser of the largest power is unique, so a feasible point
/// exists only if the minimiser is one.
fn feasible(gram: &QMat, open: &[&WeightedPoint], closed: &WeightedPoint) -> Option<QVec> {
    if open.iter().any(|t| !t.weight.is_positive()) || closed.weight.is_negative() {
        return None;
    }
    let mut terms: Vec<WeightedPoint> = open.iter().map(|t| (*t).clone()).collect();
    terms.push(closed.clone());
    let sol = minimax(gram, &terms);
    let ok = open.iter().all(|t| t.power(gram, &sol.point).is_negative()) && !closed.power(gram, &sol.point).is_positive();
    ok.then_some(sol.point)
}

/// The nerve of `{U ∩ Fix : U in the cover}` over the window, on the cover's vertex ids.
pub fn restricted_nerve(cover: &GoodCover, fix: &FixedSet) -> Result<SimplicialComplex, CoverError> {
    let labels: Vec<String> = (0..cover.len()).map(|i| vertex_label(cover, i)).collect();
    let d = &cover.domain;
    match (fix, &d.space) {
        (FixedSet::Empty, _) => Ok(SimplicialComplex::empty(labels)),
        (FixedSet::Whole, _) => Ok(super::nerve::nerve(cover)?),
        (FixedSet::Affine { point, basis }, ModelSpace::Euclidean(e)) => {
            let flat = Flat::new(&e.gram, point, basis);
            let center = d.window.center.euclidean().expect("euclidean window").clone();
            let window = flat.restrict(&center, &(&d.window.radius * &d.window.radius));
            let traces: Vec<WeightedPoint> = cover
                .balls
                .iter()
                .map(|b| flat.restrict(b.center.euclidean().expect("euclidean ball"), &(&b.radius * &b.radius)))
                .collect();
            let verts: Vec<u32> = (0..cover.len() as u32)
                .into_par_iter()
                .filter(|&i| feasible(&flat.gram, &[&traces[i as usize]], &window).is_some())
                .collect();
            let gf = flat.gram.to_f64();
            let yf: Vec<Vec<f64>> = traces.iter().map(|t| t.center.iter().map(to_f64).collect()).collect();
            let rf: Vec<f64> = traces.iter().map(|t| to_f64(&t.weight).max(0.0).sqrt()).collect();
            let near = |i: usize, j: usize| {
                let v: Vec<f64> = yf[i].iter().zip(&yf[j]).map(|(a, b)| a - b).collect();
                let d2: f64 = (0..v.len()).cartesian_product(0..v.len()).map(|(a, b)| v[a] * gf[a][b] * v[b]).sum();
                d2.max(0.0).sqrt() <= rf[i] + rf[j] + 1e-9
            };
            let mut adjacency = vec![Vec::new(); cover.len()];
            let pairs: Vec<(u32, u32)> = verts
                .iter()
                .tuple_combinations()
                .filter(|(&i, &j)| near(i as usize, j as usize))
                .map(|(&i, &j)| (i, j))
                .collect::<Vec<_>>()
                .into_par_iter()
                .filter(|&(i, j)| feasible(&flat.gram, &[&traces[i as usize], &traces[j as usize]], &window).is_some())
                .collect();
            for (i, j) in pairs {
                adjacency[i as usize].push(j);
                adjacency[j as usize].push(i);
            }
            adjacency.iter_mut().for_each(|a| a.sort_unstable());
            let gram = &flat.gram;
            Ok(clique_complex(
                labels,
                &adjacency,
                |v| verts.binary_search(&v).ok().and_then(|_| feasible(gram, &[&traces[v as usize]], &window)),
                |y: &QVec, s: &[u32], u| {
                    let t = &traces[u as usize];
                    if t.power(gram, y).is_negative() {
                        return Some(y.clone());
                    }
                    let mut terms: Vec<&WeightedPoint> = s.iter().map(|&i| &traces[i as usize]).collect();
                    terms.push(t);
                    feasible(gram, &terms, &window)
                },
            ))
        }
        (FixedSet::Subtree(gens), ModelSpace::Tree(t)) => Ok(subtree_nerve(cover, t, gens, labels)),
        _ => Err(CoverError::Unsupported(format!("restriction to {} in this space", fix.describe()))),
    }
}

fn nearest_fixed(t: &TreeSpace, gens: &[TreeAutomorphism], p: &TreePoint) -> TreePoint {
    if gens.iter().all(|a| a.fixes(t, p)) {
        return p.clone();
    }
    (0..p.level)
        .rev()
        .map(|l| TreePoint::node(l, t.prefix(p.addr, l)))
        .find(|n| gens.iter().all(|a| a.fixes(t, n)))
        .unwrap_or_else(TreePoint::root)
}

/// Balls, the fixed subtree and the window are convex in a tree, so a family
/// meets as soon as it meets pairwise.
fn subtree_nerve(cover: &GoodCover, t: &TreeSpace, gens: &[TreeAutomorphism], labels: Vec<String>) -> SimplicialComplex {
    let tp = |p: &Point| match p {
        Point::Tree(x) => x.clone(),
        _ => unreachable!("tree cover"),
    };
    let w = tp(&cover.domain.window.center);
    let big_r = &cover.domain.window.radius;
    let n = cover.len();
    let empty = || SimplicialComplex::empty(labels.clone());
    if t.distance(&w, &nearest_fixed(t, gens, &w)) > *big_r {
        return empty();
    }
    let centers: Vec<TreePoint> = cover.balls.iter().map(|b| tp(&b.center)).collect();
    let live: Vec<bool> = (0..n)
        .map(|i| {
            let c = &centers[i];
            let r = &cover.balls[i].radius;
            t.distance(c, &nearest_fixed(t, gens, c)) < *r && t.distance(c, &w) < r + big_r
        })
        .collect();
    let adjacency: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && live[i] && live[j])
                .filter(|&j| t.distance(&centers[i], &centers[j]) < &cover.balls[i].radius + &cover.balls[j].radius)
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    clique_complex(labels, &adjacency, |v| live[v as usize].then_some(()), |_, _, _| Some(()))
}

/// The simplicial map `Fix_N(H) -> N(U ∩ Fix)` sending a ball to its trace.
#[derive(Debug, Clone)]
pub struct RestrictionMap {
    pub fixed: FixedSet,
    pub source: SimplicialComplex,
    pub target: SimplicialComplex,
    pub vertex_map: Vec<Option<u32>>,
}

pub fn restriction_map(cover: &GoodCover, complex: &SimplicialComplex, action: &VertexAction) -> Result<RestrictionMap, CoverError> {
    let fixed = FixedSet::of(&cover.domain.space, &action.elements)?;
    let source = fixed_subcomplex(complex, action);
    let target = restricted_nerve(cover, &fixed)?;
    let live: BTreeSet<u32> = target.vertices().into_iter().collect();
    let mut vertex_map = vec![None; cover.len()];
    for v in source.vertices() {
        if live.contains(&v) {
            vertex_map[v as usize] = Some(v);
        }
    }
    Ok(RestrictionMap { fixed, source, target, vertex_map })
}

/// Audit of a restriction map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionCheck {
    pub fixed_set: String,
    pub source_vertices: usize,
    pub target_vertices: usize,
    /// Vertices in exactly one of the two vertex sets.
    pub vertex_mismatch: Vec<u32>,
    pub source_simplices: usize,
    pub not_simplicial: usize,
    pub target_simplices: usize,
    pub simplex_fibers: usize,
    pub bad_fibers: Vec<Simplex>,
    pub source_homology: HomologyResult,
    pub target_homology: HomologyResult,
    pub homology_agrees: bool,
}

impl RestrictionCheck {
    pub fn passed(&self) -> bool {
        self.vertex_mismatch.is_empty()
            && self.not_simplicial == 0
            && self.simplex_fibers == self.target_simplices
            && self.homology_agrees
    }
}

pub fn check_restriction(map: &RestrictionMap) -> RestrictionCheck {
    let src: BTreeSet<u32> = map.source.vertices().into_iter().collect();
    let tgt: BTreeSet<u32> = map.target.vertices().into_iter().collect();
    let vertex_mismatch: Vec<u32> = src.symmetric_difference(&tgt).copied().collect();
    let source_list: Vec<&Simplex> = map.source.simplices().collect();
    let not_simplicial = source_list
        .par_iter()
        .filter(|s| SimplicialComplex::map_simplex(&map.vertex_map, s).map_or(true, |img| !map.target.contains(&img)))
        .count();
    let mut preimage: HashMap<u32, Vec<u32>> = HashMap::new();
    for (v, img) in map.vertex_map.iter().enumerate() {
        if let Some(w) = img {
            preimage.entry(*w).or_default().push(v as u32);
        }
    }
    let target_list: Vec<&Simplex> = map.target.simplices().collect();
    let bad: Vec<Simplex> = target_list
        .par_iter()
        .filter(|s| {
            let mut fiber: Simplex = s.iter().flat_map(|w| preimage.get(w).into_iter().flatten().copied()).collect();
            fiber.sort_unstable();
            fiber.is_empty() || !map.source.contains(&fiber)
        })
        .map(|s| (*s).clone())
        .collect();
    let source_homology = analyze_simplicial(&map.source);
    let target_homology = analyze_simplicial(&map.target);
    RestrictionCheck {
        fixed_set: map.fixed.describe(),
        source_vertices: src.len(),
        target_vertices: tgt.len(),
        vertex_mismatch,
        source_simplices: source_list.len(),
        not_simplicial,
        target_simplices: target_list.len(),
        simplex_fibers: target_list.len() - bad.len(),
        bad_fibers: bad.into_iter().sorted().take(20).collect(),
        homology_agrees: source_homology.homology == target_homology.homology,
        source_homology,
        target_homology,
    }
}
