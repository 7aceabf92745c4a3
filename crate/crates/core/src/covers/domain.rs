//! Where a cover lives: a model space, the group elements acting on it, a
//! closed window to be covered, and the pieces used to certify coverage.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::group::{enumerate_elements, GroupError, GroupSpec, Isometry};
use crate::linalg::{project_affine, QMat, QVec};
use crate::model::{Ball, ModelSpace, Point, TreePoint, TreeSpace};
use crate::rational::{pow2_neg, q, qi, sqrt_f64, to_f64, Q};

/// The group elements acting on a cover domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementSource {
    /// A group with a lattice or cyclic structure, enumerated on demand.
    Group(GroupSpec),
    /// An explicit finite list (e.g. the odometer acting on a finite subtree).
    Finite(Vec<Isometry>),
}

/// The closed window `{x : d(x, center) <= radius}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub center: Point,
    pub radius: Q,
}

impl Window {
    pub fn contains(&self, space: &ModelSpace, p: &Point) -> bool {
        space.dist2_unchecked(&self.center, p) <= &self.radius * &self.radius
    }

    /// Whether an open ball meets the window.
    pub fn meets(&self, space: &ModelSpace, b: &Ball) -> bool {
        let r = &self.radius + &b.radius;
        space.dist2_unchecked(&self.center, &b.center) < &r * &r
    }

    /// The window as a closed ball, or `None` when it is a single point.
    pub fn as_ball(&self) -> Option<Ball> {
        self.radius.is_positive().then(|| Ball::closed(self.center.clone(), self.radius.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverDomain {
    pub space: ModelSpace,
    pub elements: ElementSource,
    pub window: Window,
}

/// A compact convex region whose containment in a ball is decidable exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Piece {
    /// The cube `lo + [0, size]^n` in lattice coordinates.
    Box { lo: QVec, size: Q },
    /// The edge above the node `v` together with the subtree below it,
    /// optionally times an interval of the line factor.
    Cell { v: TreePoint, s: Option<(Q, Q)> },
    /// A segment of a root path (top is an ancestor of bottom), optionally
    /// times an interval.
    Seg { top: TreePoint, bottom: TreePoint, s: Option<(Q, Q)> },
}

fn tree(space: &ModelSpace) -> &TreeSpace {
    match space {
        ModelSpace::Tree(t) | ModelSpace::TreeLine(t) => t,
        ModelSpace::Euclidean(_) => panic!("tree piece in a Euclidean space"),
    }
}

fn parent(t: &TreeSpace, v: &TreePoint) -> TreePoint {
    debug_assert!(v.level > 0);
    let level = v.level - 1;
    TreePoint::node(level, t.prefix(v.addr, level))
}

fn with_s(space: &ModelSpace, x: &TreePoint, s: &Q) -> Point {
    match space {
        ModelSpace::TreeLine(_) => Point::TreeLine(x.clone(), s.clone()),
        _ => Point::Tree(x.clone()),
    }
}

fn mid(s: &Option<(Q, Q)>) -> Q {
    s.as_ref().map_or_else(Q::zero, |(a, b)| (a + b) / qi(2))
}

impl CoverDomain {
    pub fn new(space: ModelSpace, elements: ElementSource, window: Window) -> Self {
        CoverDomain { space, elements, window }
    }

    /// Elements whose displacement at `x` is at most `bound`.
    pub fn elements_near(&self, x: &Point, bound: &Q) -> Result<Vec<Isometry>, GroupError> {
        match &self.elements {
            ElementSource::Group(g) => enumerate_elements(g, bound, x),
            ElementSource::Finite(list) => {
                let b2 = bound * bound;
                Ok(list.iter().filter(|g| g.displacement2(&self.space, x) <= b2).cloned().collect())
            }
        }
    }

    pub fn image(&self, g: &Isometry, b: &Ball) -> Ball {
        Ball { center: g.apply(&self.space, &b.center), radius: b.radius.clone(), closed: b.closed }
    }

    /// Pieces whose union contains the window.
    pub fn initial_pieces(&self, size: &Q) -> Vec<Piece> {
        let r = &self.window.radius;
        match &self.space {
            ModelSpace::Euclidean(e) => {
                let Point::Euclidean(c) = &self.window.center else { unreachable!() };
                let ginv = e.gram.inverse().expect("positive definite");
                let steps: Vec<std::ops::RangeInclusive<i64>> = (0..e.dim())
                    .map(|i| {
                        let w = to_f64(r) * to_f64(ginv.get(i, i)).sqrt();
                        let lo = ((to_f64(&c[i]) - w) / to_f64(size)).floor() as i64 - 1;
                        let hi = ((to_f64(&c[i]) + w) / to_f64(size)).ceil() as i64;
                        lo..=hi
                    })
                    .collect();
                steps
                    .into_iter()
                    .multi_cartesian_product()
                    .map(|k| Piece::Box { lo: k.iter().map(|&k| Q::from_integer(k.into()) * size).collect(), size: size.clone() })
                    .filter(|p| self.may_meet_window(p))
                    .collect()
            }
            ModelSpace::TreeLine(_) => {
                let n = (r / size).ceil().to_integer();
                let n: i64 = n.try_into().unwrap_or(i64::MAX);
                (-n..n)
                    .map(|k| Piece::Cell { v: TreePoint::root(), s: Some((qi(k) * size, qi(k + 1) * size)) })
                    .filter(|p| self.may_meet_window(p))
                    .collect()
            }
            ModelSpace::Tree(t) => {
                // the window is a root ball; cover it by its own edges
                let Point::Tree(c) = &self.window.center else { unreachable!() };
                assert_eq!(*c, TreePoint::root(), "tree windows are centred at the root");
                let mut out = vec![Piece::Seg { top: TreePoint::root(), bottom: TreePoint::root(), s: None }];
                for v in t.nodes_up_to(t.depth).into_iter().filter(|v| v.level > 0) {
                    if t.node_depth(v.level) <= *r {
                        out.push(Piece::Seg { top: parent(t, &v), bottom: v, s: None });
                    } else if t.node_depth(v.level - 1) < *r {
                        let bottom = t.on_root_path(&v, r);
                        out.push(Piece::Seg { top: parent(t, &v), bottom, s: None });
                    }
                }
                out
            }
        }
    }

    /// Conservative test: `false` only if the piece is certainly outside the window.
    pub fn may_meet_window(&self, p: &Piece) -> bool {
        let r = &self.window.radius;
        match p {
            Piece::Box { lo, size } => {
                let ModelSpace::Euclidean(e) = &self.space else { unreachable!() };
                let Point::Euclidean(c) = &self.window.center else { unreachable!() };
                let half = size / qi(2);
                let centre: QVec = lo.iter().map(|x| x + &half).collect();
                let d = sqrt_f64(&e.dist2(&centre, c));
                let diag: Q = (0..e.dim()).map(|i| e.gram.get(i, i).clone()).sum::<Q>() * &half * &half;
                // generous slack makes the float test safe
                d - sqrt_f64(&diag) * 1.5 <= to_f64(r) + 1e-6
            }
            Piece::Cell { v, s } => {
                let t = tree(&self.space);
                let top = if v.level == 0 { Q::zero() } else { t.node_depth(v.level - 1) };
                let sv = s.as_ref().map_or_else(Q::zero, |(a, b)| if a.is_positive() { a.clone() } else if b.is_negative() { -b.clone() } else { Q::zero() });
                &top * &top + &sv * &sv <= r * r
            }
            Piece::Seg { top, s, .. } => {
                let t = tree(&self.space);
                let d = t.point_depth(top);
                let sv = s.as_ref().map_or_else(Q::zero, |(a, b)| if a.is_positive() { a.clone() } else if b.is_negative() { -b.clone() } else { Q::zero() });
                &d * &d + &sv * &sv <= r * r
            }
        }
    }

    /// A point of the piece used to order and seed the search.
    pub fn representative(&self, p: &Piece) -> Point {
        match p {
            Piece::Box { lo, size } => Point::Euclidean(lo.iter().map(|x| x + size / qi(2)).collect()),
            Piece::Cell { v, s } => with_s(&self.space, v, &mid(s)),
            Piece::Seg { top, bottom, s } => {
                let t = tree(&self.space);
                with_s(&self.space, &t.geodesic_point(top, bottom, &q(1, 2)), &mid(s))
            }
        }
    }

    /// Exact test that the whole piece lies in the open ball.
    pub fn piece_in_ball(&self, p: &Piece, b: &Ball) -> bool {
        let r2 = &b.radius * &b.radius;
        match p {
            Piece::Box { lo, size } => {
                let n = lo.len();
                (0..1usize << n).all(|mask| {
                    let corner: QVec = (0..n).map(|i| if mask >> i & 1 == 1 { &lo[i] + size } else { lo[i].clone() }).collect();
                    self.space.dist2_unchecked(&b.center, &Point::Euclidean(corner)) < r2
                })
            }
            Piece::Cell { v, s } => {
                let t = tree(&self.space);
                let reach = if v.level == 0 { qi(1) } else { pow2_neg(v.level) };
                let (c, ct) = match &b.center {
                    Point::TreeLine(c, ct) => (c, ct.clone()),
                    Point::Tree(c) => (c, Q::zero()),
                    _ => unreachable!(),
                };
                let dt = t.distance(c, v) + reach;
                let ds = s.as_ref().map_or_else(Q::zero, |(a, bb)| (a - &ct).abs().max((bb - &ct).abs()));
                &dt * &dt + &ds * &ds < r2
            }
            Piece::Seg { top, bottom, s } => {
                let ends = [top, bottom];
                let ss: Vec<Q> = s.as_ref().map_or_else(|| vec![Q::zero()], |(a, bb)| vec![a.clone(), bb.clone()]);
                ends.iter()
                    .cartesian_product(ss.iter())
                    .all(|(x, sv)| self.space.dist2_unchecked(&b.center, &with_s(&self.space, x, sv)) < r2)
            }
        }
    }

    /// Splits a piece into smaller ones covering it; `None` below the size floor.
    pub fn refine(&self, p: &Piece, min_size: &Q) -> Option<Vec<Piece>> {
        match p {
            Piece::Box { lo, size } => {
                let half = size / qi(2);
                if half < *min_size {
                    return None;
                }
                let n = lo.len();
                Some(
                    (0..1usize << n)
                        .map(|mask| Piece::Box {
                            lo: (0..n).map(|i| if mask >> i & 1 == 1 { &lo[i] + &half } else { lo[i].clone() }).collect(),
                            size: half.clone(),
                        })
                        .filter(|p| self.may_meet_window(p))
                        .collect(),
                )
            }
            Piece::Cell { v, s } => {
                let t = tree(&self.space);
                let reach = if v.level == 0 { qi(1) } else { pow2_neg(v.level) };
                if let Some((a, b)) = s {
                    if &(b - a) > &reach && &(b - a) / qi(2) >= *min_size {
                        let m = (a + b) / qi(2);
                        return Some(
                            [(a.clone(), m.clone()), (m, b.clone())]
                                .into_iter()
                                .map(|s| Piece::Cell { v: v.clone(), s: Some(s) })
                                .filter(|p| self.may_meet_window(p))
                                .collect(),
                        );
                    }
                }
                let mut out = Vec::new();
                if v.level > 0 {
                    out.push(Piece::Seg { top: parent(t, v), bottom: v.clone(), s: s.clone() });
                }
                if v.level < t.depth {
                    for bit in 0..2u64 {
                        let child = TreePoint::node(v.level + 1, v.addr + (bit << v.level));
                        out.push(Piece::Cell { v: child, s: s.clone() });
                    }
                } else if t.compactified {
                    out.push(Piece::Seg { top: v.clone(), bottom: t.boundary_point(v.addr), s: s.clone() });
                }
                Some(out.into_iter().filter(|p| self.may_meet_window(p)).collect())
            }
            Piece::Seg { top, bottom, s } => {
                let t = tree(&self.space);
                let len = t.distance(top, bottom);
                let slen = s.as_ref().map_or_else(Q::zero, |(a, b)| b - a);
                if len.clone().max(slen.clone()) / qi(2) < *min_size {
                    return None;
                }
                if slen > len {
                    let (a, b) = s.clone().unwrap();
                    let m = (&a + &b) / qi(2);
                    return Some(vec![
                        Piece::Seg { top: top.clone(), bottom: bottom.clone(), s: Some((a, m.clone())) },
                        Piece::Seg { top: top.clone(), bottom: bottom.clone(), s: Some((m, b)) },
                    ]);
                }
                let m = t.geodesic_point(top, bottom, &q(1, 2));
                Some(vec![
                    Piece::Seg { top: top.clone(), bottom: m.clone(), s: s.clone() },
                    Piece::Seg { top: m, bottom: bottom.clone(), s: s.clone() },
                ])
            }
        }
    }

    /// Candidate ball centres near a piece, in a fixed order.
    pub fn candidates(&self, p: &Piece, grid: &Q, reach: &Q, near: &[Isometry]) -> Vec<Point> {
        let rep = self.representative(p);
        let mut out: BTreeSet<Point> = BTreeSet::new();
        out.insert(rep.clone());
        match (&self.space, p) {
            (ModelSpace::Euclidean(e), Piece::Box { .. }) => {
                let Point::Euclidean(x) = &rep else { unreachable!() };
                let ginv = e.gram.inverse().expect("positive definite");
                let ranges: Vec<Vec<Q>> = (0..e.dim())
                    .map(|i| {
                        let w = to_f64(reach) * to_f64(ginv.get(i, i)).sqrt();
                        let lo = ((to_f64(&x[i]) - w) / to_f64(grid)).floor() as i64;
                        let hi = ((to_f64(&x[i]) + w) / to_f64(grid)).ceil() as i64;
                        (lo..=hi).map(|k| qi(k) * grid).collect()
                    })
                    .collect();
                let r2 = reach * reach;
                for c in ranges.into_iter().multi_cartesian_product() {
                    if e.dist2(&c, x) <= r2 {
                        out.insert(Point::Euclidean(c));
                    }
                }
                // nearest points of nearby fixed sets
                for g in near {
                    let Isometry::Affine { lin, trans } = g else { continue };
                    let a = lin.sub(&QMat::identity(lin.rows));
                    let neg: QVec = trans.iter().map(|t| -t).collect();
                    if let Some((x0, dirs)) = a.solve_affine(&neg) {
                        out.insert(Point::Euclidean(project_affine(&e.gram, &x0, &dirs, x)));
                    }
                }
            }
            (_, Piece::Cell { v, s }) => {
                let t = tree(&self.space);
                let mut nodes = vec![v.clone()];
                if v.level > 0 {
                    nodes.push(parent(t, v));
                }
                for n in nodes {
                    for sv in s_grid(s, grid, reach) {
                        out.insert(with_s(&self.space, &n, &sv));
                    }
                }
            }
            (_, Piece::Seg { top, bottom, s }) => {
                for n in [top, bottom] {
                    for sv in s_grid(s, grid, reach) {
                        out.insert(with_s(&self.space, n, &sv));
                    }
                }
            }
            _ => unreachable!("piece from another space"),
        }
        out.into_iter().filter(|c| self.space.contains(c)).collect()
    }
}

fn s_grid(s: &Option<(Q, Q)>, grid: &Q, reach: &Q) -> Vec<Q> {
    let Some((a, b)) = s else { return vec![Q::zero()] };
    let m = (a + b) / qi(2);
    let k = (reach / grid).floor().to_integer();
    let k: i64 = k.try_into().unwrap_or(0);
    let base = (&m / grid).round() * grid;
    let mut out: Vec<Q> = (-k..=k).map(|i| &base + qi(i) * grid).collect();
    out.push(m);
    out
}
