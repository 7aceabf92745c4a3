use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use itertools::Itertools;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::group::{GroupError, Isometry};
use crate::model::{Ball, ModelSpace, Point};
use crate::rational::{ceil_sqrt_dyadic, floor_sqrt_dyadic, fmt_q, q, qi, to_f64, Q};

use super::domain::{CoverDomain, Piece};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("radius rule gives a non-positive radius at {0}")]
    NonPositiveRadius(String),
    #[error("could not cover the window near {0} at the finest piece size")]
    Uncoverable(String),
    #[error("local finiteness constant {found} exceeds the cap {cap}")]
    TooManyOverlaps { found: usize, cap: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Geometry(#[from] crate::model::GeometryError),
    #[error("not supported: {0}")]
    Unsupported(String),
}

/// Parameters of the radius rule and of the covering search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverPolicy {
    /// Upper bound on every radius.
    #[serde(serialize_with = "ser_q")]
    pub cap: Q,
    /// Radii are at most this fraction of the least positive displacement.
    #[serde(serialize_with = "ser_q")]
    pub fraction: Q,
    /// Radii are rounded down to multiples of `2^-bits`.
    pub bits: u32,
    /// Spacing of candidate centres.
    #[serde(serialize_with = "ser_q")]
    pub grid: Q,
    #[serde(serialize_with = "ser_q")]
    pub start_piece: Q,
    #[serde(serialize_with = "ser_q")]
    pub min_piece: Q,
    /// Cap on the local finiteness constant.
    pub max_overlap: usize,
}

pub(crate) fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

impl Default for CoverPolicy {
    fn default() -> Self {
        CoverPolicy {
            cap: q(1, 4),
            fraction: q(1, 3),
            bits: 10,
            grid: q(1, 8),
            start_piece: q(1, 4),
            min_piece: q(1, 512),
            max_overlap: 64,
        }
    }
}

/// A finite window of a group-invariant good cover by open balls.
#[derive(Debug, Clone)]
pub struct GoodCover {
    pub domain: CoverDomain,
    pub policy: CoverPolicy,
    /// Balls meeting the window, in a fixed order; these are the nerve vertices.
    pub balls: Vec<Ball>,
    /// Orbit index of each ball.
    pub orbit: Vec<usize>,
    /// One representative ball per orbit, in the order chosen.
    pub reps: Vec<Ball>,
    /// Shell in which each orbit was introduced.
    pub shells: Vec<u32>,
    index: HashMap<Ball, usize>,
}

impl GoodCover {
    pub fn from_parts(domain: CoverDomain, policy: CoverPolicy, mut tagged: Vec<(Ball, usize)>, reps: Vec<Ball>, shells: Vec<u32>) -> Self {
        let space = domain.space.clone();
        let centre = domain.window.center.clone();
        tagged.sort_by(|(a, oa), (b, ob)| {
            let da = space.dist2_unchecked(&a.center, &centre);
            let db = space.dist2_unchecked(&b.center, &centre);
            da.cmp(&db).then_with(|| oa.cmp(ob)).then_with(|| a.cmp(b))
        });
        tagged.dedup_by(|a, b| a.0 == b.0);
        let index = tagged.iter().enumerate().map(|(i, (b, _))| (b.clone(), i)).collect();
        let (balls, orbit) = tagged.into_iter().unzip();
        GoodCover { domain, policy, balls, orbit, reps, shells, index }
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn index_of(&self, b: &Ball) -> Option<usize> {
        self.index.get(b).copied()
    }

    /// Vertex image of ball `i` under `g`, if that ball is in the window.
    pub fn image(&self, g: &Isometry, i: usize) -> Option<usize> {
        self.index_of(&self.domain.image(g, &self.balls[i]))
    }

    pub fn max_radius(&self) -> Q {
        self.balls.iter().map(|b| b.radius.clone()).max().unwrap_or_else(Q::zero)
    }

    pub fn min_radius(&self) -> Q {
        self.balls.iter().map(|b| b.radius.clone()).min().unwrap_or_else(Q::zero)
    }
}

/// Bucketed ball centres for quick proximity queries while building.
struct Spatial {
    cell: f64,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
    coords: Vec<Vec<f64>>,
    /// Per-axis bucket reach for a unit metric distance.
    scale: Vec<f64>,
}

impl Spatial {
    fn new(space: &ModelSpace) -> Self {
        let scale = match space {
            ModelSpace::Euclidean(e) => {
                let ginv = e.gram.inverse().expect("positive definite");
                (0..e.dim()).map(|i| to_f64(ginv.get(i, i)).sqrt()).collect()
            }
            _ => Vec::new(),
        };
        Spatial { cell: 0.5, buckets: HashMap::new(), coords: Vec::new(), scale }
    }

    fn coords(p: &Point) -> Vec<f64> {
        match p {
            Point::Euclidean(x) => x.iter().map(to_f64).collect(),
            _ => Vec::new(),
        }
    }

    fn key(&self, c: &[f64]) -> Vec<i64> {
        c.iter().map(|x| (x / self.cell).floor() as i64).collect()
    }

    fn insert(&mut self, b: &Ball) {
        let c = Self::coords(&b.center);
        let k = self.key(&c);
        self.buckets.entry(k).or_default().push(self.coords.len());
        self.coords.push(c);
    }

    /// Indices of balls with centre within `reach` (metric units) of `p`, plus slack.
    fn query(&self, p: &Point, reach: f64) -> Vec<usize> {
        let c = Self::coords(p);
        if c.is_empty() {
            return (0..self.coords.len()).collect();
        }
        let k = self.key(&c);
        let spans: Vec<std::ops::RangeInclusive<i64>> = k
            .iter()
            .zip(&self.scale)
            .map(|(&k, s)| {
                let w = (reach * s / self.cell).ceil() as i64 + 1;
                (k - w)..=(k + w)
            })
            .collect();
        let mut out: Vec<usize> = spans
            .into_iter()
            .multi_cartesian_product()
            .filter_map(|key| self.buckets.get(&key))
            .flatten()
            .copied()
            .collect();
        out.sort_unstable();
        out
    }
}

/// The radius the policy assigns to a centre `x`: `min(cap, fraction * delta)`
/// rounded down, `delta` being the least positive displacement of `x`.
pub fn radius_at(domain: &CoverDomain, policy: &CoverPolicy, x: &Point) -> Result<Q, CoverError> {
    let probe = &policy.cap / &policy.fraction;
    let near = domain.elements_near(x, &probe)?;
    let delta2 = near.iter().map(|g| g.displacement2(&domain.space, x)).filter(|d| d.is_positive()).min();
    let eps = match delta2 {
        Some(d2) => floor_sqrt_dyadic(&(d2 * &policy.fraction * &policy.fraction), policy.bits).min(policy.cap.clone()),
        None => policy.cap.clone(),
    };
    if !eps.is_positive() {
        return Err(CoverError::NonPositiveRadius(format!("{x}")));
    }
    Ok(eps)
}

#[derive(PartialEq, Eq)]
struct Queued {
    shell: u32,
    dist2: Q,
    piece: Piece,
}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap pops the largest: invert so the innermost piece comes first
        (other.shell, &other.dist2, &other.piece).cmp(&(self.shell, &self.dist2, &self.piece))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Builds a good cover of the window shell by shell: pieces of the closed
/// shells `n-1 < d <= n` are covered in order of distance, each uncovered
/// piece by a new orbit of balls `{g B(x, eps_x)}`.
pub fn build_good_cover(domain: &CoverDomain, policy: &CoverPolicy) -> Result<GoodCover, CoverError> {
    let space = &domain.space;
    let centre = &domain.window.center;
    let mut heap = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<Queued>, piece: Piece| {
        let rep = domain.representative(&piece);
        let dist2 = space.dist2_unchecked(&rep, centre);
        let shell = ceil_sqrt_dyadic(&dist2, 0).to_integer().try_into().unwrap_or(u32::MAX);
        heap.push(Queued { shell, dist2, piece });
    };
    for p in domain.initial_pieces(&policy.start_piece) {
        push(&mut heap, p);
    }
    let mut tagged: Vec<(Ball, usize)> = Vec::new();
    let mut seen: HashMap<Ball, usize> = HashMap::new();
    let mut reps: Vec<Ball> = Vec::new();
    let mut shells: Vec<u32> = Vec::new();
    let mut spatial = Spatial::new(space);
    let mut radius_cache: BTreeMap<Point, Q> = BTreeMap::new();
    let reach = to_f64(&policy.cap) + to_f64(&policy.start_piece) * 2.0;
    let probe = &policy.cap / &policy.fraction;
    while let Some(Queued { shell, piece, .. }) = heap.pop() {
        let rep = domain.representative(&piece);
        if spatial.query(&rep, reach).into_iter().any(|i| domain.piece_in_ball(&piece, &tagged[i].0)) {
            continue;
        }
        let nearby = domain.elements_near(&rep, &probe)?;
        let mut best: Option<(Q, Q, Point)> = None;
        for c in domain.candidates(&piece, &policy.grid, &policy.cap, &nearby) {
            let eps = match radius_cache.get(&c) {
                Some(e) => e.clone(),
                None => {
                    let e = radius_at(domain, policy, &c)?;
                    radius_cache.insert(c.clone(), e.clone());
                    e
                }
            };
            if !domain.piece_in_ball(&piece, &Ball::open(c.clone(), eps.clone())) {
                continue;
            }
            let d2 = space.dist2_unchecked(&c, &rep);
            let better = match &best {
                None => true,
                Some((be, bd, bc)) => eps > *be || (eps == *be && (d2 < *bd || (d2 == *bd && c < *bc))),
            };
            if better {
                best = Some((eps, d2, c));
            }
        }
        match best {
            Some((eps, _, c)) => {
                let orbit = reps.len();
                let ball = Ball::open(c, eps);
                for b in orbit_bundle(domain, &ball)? {
                    if seen.insert(b.clone(), orbit).is_none() {
                        spatial.insert(&b);
                        tagged.push((b, orbit));
                    }
                }
                reps.push(ball);
                shells.push(shell);
            }
            None => match domain.refine(&piece, &policy.min_piece) {
                Some(children) => children.into_iter().for_each(|p| push(&mut heap, p)),
                None => return Err(CoverError::Uncoverable(format!("{rep}"))),
            },
        }
    }
    Ok(GoodCover::from_parts(domain.clone(), policy.clone(), tagged, reps, shells))
}

/// All translates `g B` meeting the window.
pub fn orbit_bundle(domain: &CoverDomain, ball: &Ball) -> Result<Vec<Ball>, CoverError> {
    let w = &domain.window;
    let d = ceil_sqrt_dyadic(&domain.space.dist2_unchecked(&ball.center, &w.center), 4);
    let bound = &w.radius + &ball.radius + d;
    let mut out: Vec<Ball> = domain
        .elements_near(&ball.center, &bound)?
        .iter()
        .map(|g| domain.image(g, ball))
        .filter(|b| w.meets(&domain.space, b))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Outcome of the exhaustive check of the good-cover axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverCheck {
    pub elements_checked: usize,
    pub balls: usize,
    #[serde(serialize_with = "ser_q")]
    pub displacement_bound: Q,
    /// Images of window balls that meet the window but are missing.
    pub invariance_failures: Vec<String>,
    /// Pairs `B, gB` that meet without being equal.
    pub overlap_failures: Vec<String>,
}

impl CoverCheck {
    pub fn passed(&self) -> bool {
        self.invariance_failures.is_empty() && self.overlap_failures.is_empty()
    }
}

/// Checks `G U = U` within the window and that `gB` meets `B` only when equal,
/// for every element of displacement at most `2R + 2 max radius` at the window centre.
pub fn check_good_cover(cover: &GoodCover) -> Result<CoverCheck, CoverError> {
    use rayon::prelude::*;
    let d = &cover.domain;
    let bound = qi(2) * &d.window.radius + qi(2) * cover.max_radius();
    let elements = d.elements_near(&d.window.center, &bound)?;
    let failures: Vec<(Vec<String>, Vec<String>)> = elements
        .par_iter()
        .map(|g| {
            let mut inv = Vec::new();
            let mut ovl = Vec::new();
            for b in &cover.balls {
                let gb = d.image(g, b);
                if d.window.meets(&d.space, &gb) && cover.index_of(&gb).is_none() {
                    inv.push(format!("{g} sends {b:?} to missing {gb:?}"));
                }
                if gb != *b {
                    let sum = &b.radius + &gb.radius;
                    if d.space.dist2_unchecked(&b.center, &gb.center) < &sum * &sum {
                        ovl.push(format!("{g} moves {b:?} onto an overlapping translate"));
                    }
                }
            }
            (inv, ovl)
        })
        .collect();
    let (inv, ovl): (Vec<_>, Vec<_>) = failures.into_iter().unzip();
    Ok(CoverCheck {
        elements_checked: elements.len(),
        balls: cover.balls.len(),
        displacement_bound: bound,
        invariance_failures: inv.into_iter().flatten().collect(),
        overlap_failures: ovl.into_iter().flatten().collect(),
    })
}
