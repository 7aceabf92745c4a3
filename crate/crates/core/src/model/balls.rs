//! Metric balls and the exact test for a common point of finitely many of them.

use std::fmt;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::linalg::QMat;
use crate::rational::{fmt_q, Q};

use super::power::{minimax, WeightedPoint};
use super::tree::{TreePoint, TreeSpace};
use super::{GeometryError, ModelSpace, Point};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ball {
    pub center: Point,
    pub radius: Q,
    pub closed: bool,
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = if self.closed { ('[', ']') } else { ('(', ')') };
        write!(f, "B{l}{};{}{r}", self.center, fmt_q(&self.radius))
    }
}

impl Ball {
    pub fn open(center: Point, radius: Q) -> Self {
        Ball { center, radius, closed: false }
    }

    pub fn closed(center: Point, radius: Q) -> Self {
        Ball { center, radius, closed: true }
    }

    pub fn contains(&self, space: &ModelSpace, p: &Point) -> Result<bool, GeometryError> {
        let d2 = space.dist2(&self.center, p)?;
        let r2 = &self.radius * &self.radius;
        Ok(if self.closed { d2 <= r2 } else { d2 < r2 })
    }
}

/// Decides whether the balls have a common point, exactly.
pub fn balls_intersect(space: &ModelSpace, balls: &[Ball]) -> Result<bool, GeometryError> {
    Ok(common_point(space, balls)?.is_some())
}

/// A point in the intersection of all balls, if there is one.
///
/// For Euclidean and product spaces this is the minimiser of the largest power
/// distance, so it is deterministic; for trees it is a point on a geodesic
/// between two centres.
pub fn common_point(space: &ModelSpace, balls: &[Ball]) -> Result<Option<Point>, GeometryError> {
    if balls.is_empty() {
        return Err(GeometryError::EmptyBallList);
    }
    for b in balls {
        if !b.radius.is_positive() {
            return Err(GeometryError::NonPositiveRadius);
        }
        if !space.contains(&b.center) {
            return Err(GeometryError::DomainMismatch);
        }
    }
    match space {
        ModelSpace::Euclidean(e) => {
            let terms: Vec<WeightedPoint> = balls
                .iter()
                .map(|b| WeightedPoint::new(b.center.euclidean().expect("checked").clone(), &b.radius * &b.radius))
                .collect();
            let sol = minimax(&e.gram, &terms);
            let x = Point::Euclidean(sol.point);
            Ok(feasible_at(space, balls, &x, &sol.value).then_some(x))
        }
        ModelSpace::Tree(t) => Ok(tree_common_point(t, balls)),
        ModelSpace::TreeLine(t) => {
            let (x, value) = tree_line_minimax(t, balls);
            Ok(feasible_at(space, balls, &x, &value).then_some(x))
        }
    }
}

/// Given the minimiser `x` of the largest power distance and that value,
/// decides feasibility taking open/closed flags into account.
fn feasible_at(space: &ModelSpace, balls: &[Ball], x: &Point, value: &Q) -> bool {
    if value.is_negative() {
        return true;
    }
    if value.is_positive() {
        return false;
    }
    // The optimum touches zero: only the closed balls may be tight there.
    balls.iter().all(|b| {
        let p = space.dist2_unchecked(&b.center, x) - &b.radius * &b.radius;
        p.is_negative() || b.closed
    })
}

fn tree_common_point(t: &TreeSpace, balls: &[Ball]) -> Option<Point> {
    let centers: Vec<&TreePoint> = balls
        .iter()
        .map(|b| match &b.center {
            Point::Tree(p) => p,
            _ => unreachable!(),
        })
        .collect();
    // Convex subsets of a tree have the Helly property with pairwise intersections.
    for (i, j) in (0..balls.len()).tuple_combinations() {
        let d = t.distance(centers[i], centers[j]);
        let sum = &balls[i].radius + &balls[j].radius;
        let ok = if balls[i].closed && balls[j].closed { d <= sum } else { d < sum };
        if !ok {
            return None;
        }
    }
    // Witness: the weighted tree centre lies on a geodesic between two centres,
    // at the balance point of that pair (or at a centre).
    let space = ModelSpace::Tree(t.clone());
    let two = Q::from_integer(2.into());
    let mut candidates: Vec<TreePoint> = centers.iter().map(|c| (*c).clone()).collect();
    for (i, j) in (0..balls.len()).tuple_combinations() {
        let d = t.distance(centers[i], centers[j]);
        if d.is_zero() {
            continue;
        }
        let along = ((&d + &balls[i].radius - &balls[j].radius) / &two).max(Q::zero()).min(d.clone());
        candidates.push(t.geodesic_point(centers[i], centers[j], &(along / &d)));
    }
    let slack = |x: &TreePoint| balls.iter().zip(&centers).map(|(b, c)| t.distance(x, c) - &b.radius).max().unwrap();
    candidates.sort_by_key(|x| slack(x));
    candidates
        .into_iter()
        .map(Point::Tree)
        .find(|x| balls.iter().all(|b| b.contains(&space, x).unwrap_or(false)))
}

fn tree_center(b: &Ball) -> (&TreePoint, &Q) {
    match &b.center {
        Point::TreeLine(p, s) => (p, s),
        _ => unreachable!(),
    }
}

/// Minimiser of `max_i (d((y,t), c_i)^2 - r_i^2)` on the tree-line product.
///
/// The tree coordinate of the optimum lies in the subtree spanned by the
/// centres. On an edge of that subtree free of branch points every tree
/// distance is affine, so the problem there is a planar power problem; at the
/// branch and leaf points it is one-dimensional.
fn tree_line_minimax(t: &TreeSpace, balls: &[Ball]) -> (Point, Q) {
    let centers: Vec<(&TreePoint, &Q)> = balls.iter().map(tree_center).collect();
    let weights: Vec<Q> = balls.iter().map(|b| &b.radius * &b.radius).collect();
    let base = centers[0].0;

    let mut breaks: Vec<TreePoint> = centers.iter().map(|c| c.0.clone()).collect();
    for (i, j) in (1..centers.len()).tuple_combinations() {
        breaks.push(t.median(base, centers[i].0, centers[j].0));
    }
    breaks.sort();
    breaks.dedup();

    let line = QMat::identity(1);
    let plane = QMat::identity(2);
    let mut best: Option<(Point, Q)> = None;
    let mut consider = |p: Point, v: Q| {
        if best.as_ref().map_or(true, |(_, b)| v < *b) {
            best = Some((p, v));
        }
    };

    for p in &breaks {
        let terms: Vec<WeightedPoint> = centers
            .iter()
            .zip(&weights)
            .map(|((x, s), w)| {
                let d = t.distance(p, x);
                WeightedPoint::new(vec![(*s).clone()], w - &d * &d)
            })
            .collect();
        let sol = minimax(&line, &terms);
        consider(Point::TreeLine(p.clone(), sol.point[0].clone()), sol.value);
    }

    let mut edges: Vec<(TreePoint, TreePoint)> = Vec::new();
    for (leaf, _) in &centers[1..] {
        let full = t.distance(base, leaf);
        let mut on: Vec<(Q, &TreePoint)> = breaks
            .iter()
            .filter_map(|b| {
                let a = t.distance(base, b);
                (&a + t.distance(b, leaf) == full).then_some((a, b))
            })
            .collect();
        on.sort();
        for w in on.windows(2) {
            let e = if w[0].1 <= w[1].1 { (w[0].1.clone(), w[1].1.clone()) } else { (w[1].1.clone(), w[0].1.clone()) };
            edges.push(e);
        }
    }
    edges.sort();
    edges.dedup();

    for (p, q) in &edges {
        let len = t.distance(p, q);
        if len.is_zero() {
            continue;
        }
        let terms: Vec<WeightedPoint> = centers
            .iter()
            .zip(&weights)
            .map(|((x, s), w)| {
                let a = t.distance(p, x);
                // x hangs off the q side of the edge exactly when d(q, x) + len = d(p, x)
                let toward_q = t.distance(q, x) + &len == a;
                let u0 = if toward_q { a } else { -a };
                WeightedPoint::new(vec![u0, (*s).clone()], w.clone())
            })
            .collect();
        let sol = minimax(&plane, &terms);
        let u = &sol.point[0];
        if !u.is_negative() && *u <= len {
            let y = t.geodesic_point(p, q, &(u / &len));
            consider(Point::TreeLine(y, sol.point[1].clone()), sol.value);
        }
    }
    best.expect("at least one breakpoint")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn e2(x: Q, y: Q, r: Q) -> Ball {
        Ball::open(Point::Euclidean(vec![x, y]), r)
    }

    #[test]
    fn far_apart_balls_miss() {
        let s = ModelSpace::euclidean(2);
        assert!(!balls_intersect(&s, &[e2(qi(0), qi(0), qi(1)), e2(qi(3), qi(0), qi(1))]).unwrap());
    }

    #[test]
    fn exhibited_witness_triple() {
        let s = ModelSpace::euclidean(2);
        let b = [e2(qi(0), qi(0), qi(1)), e2(qi(1), qi(0), qi(1)), e2(q(1, 2), q(1, 2), qi(1))];
        assert!(balls_intersect(&s, &b).unwrap());
    }

    #[test]
    fn pairwise_touching_unit_diameter_triple_is_empty() {
        let s = ModelSpace::euclidean(2);
        let h = q(1, 2);
        let b = [e2(qi(0), qi(0), h.clone()), e2(qi(1), qi(0), h.clone()), e2(qi(0), qi(1), h.clone())];
        assert!(!balls_intersect(&s, &b).unwrap());
        // closed versions touch pairwise
        let c: Vec<Ball> = b.iter().map(|x| Ball { closed: true, ..x.clone() }).collect();
        assert!(balls_intersect(&s, &c[..2]).unwrap());
        assert!(!balls_intersect(&s, &b[..2]).unwrap());
    }

    #[test]
    fn empty_list_is_an_error() {
        assert_eq!(balls_intersect(&ModelSpace::euclidean(2), &[]), Err(GeometryError::EmptyBallList));
    }

    #[test]
    fn tree_line_balls() {
        let t = TreeSpace::new(8, true);
        let s = ModelSpace::TreeLine(t);
        let a = Ball::open(Point::TreeLine(TreePoint::node(1, 0), qi(0)), q(3, 5));
        let b = Ball::open(Point::TreeLine(TreePoint::node(1, 1), qi(0)), q(3, 5));
        // tree distance 1, radii sum 6/5: they meet near the root
        assert!(balls_intersect(&s, &[a.clone(), b.clone()]).unwrap());
        let c = Ball::open(Point::TreeLine(TreePoint::root(), qi(1)), q(1, 2));
        // root at height 1/2 is at distance 1/2 from a's centre only in the line factor
        assert!(!balls_intersect(&s, &[a.clone(), b.clone(), c.clone()]).unwrap());
        let c2 = Ball::open(Point::TreeLine(TreePoint::root(), q(1, 2)), q(3, 4));
        let w = common_point(&s, &[a.clone(), b.clone(), c2.clone()]).unwrap().unwrap();
        for ball in [&a, &b, &c2] {
            assert!(ball.contains(&s, &w).unwrap());
        }
    }

    #[test]
    fn tree_balls_helly() {
        let t = TreeSpace::new(6, true);
        let s = ModelSpace::Tree(t.clone());
        let a = Ball::open(Point::Tree(TreePoint::node(2, 0)), q(1, 2));
        let b = Ball::open(Point::Tree(TreePoint::node(2, 2)), q(1, 2));
        let c = Ball::closed(Point::Tree(t.boundary_point(1)), q(3, 2));
        let w = common_point(&s, &[a.clone(), b.clone(), c.clone()]).unwrap().unwrap();
        for ball in [&a, &b, &c] {
            assert!(ball.contains(&s, &w).unwrap(), "{ball:?} misses {w:?}");
        }
    }
}
