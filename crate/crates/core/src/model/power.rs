//! Exact minimisation of `max_i (|x - c_i|^2 - w_i)` over `x` in a Euclidean
//! space with Gram metric.
//!
//! Each term is a power distance to a weighted point. The maximum is a strictly
//! convex function with a unique minimiser, found by a Welzl-style recursion:
//! the optimum is pinned by at most `n + 1` active terms whose power distances
//! agree there. An open ball `B(c, r)` corresponds to the term with `w = r^2`,
//! and the balls share a point exactly when the optimum is negative.

use num_traits::Zero;

use crate::linalg::{gdot, gnorm2, vadd, vscale, vsub, QMat, QVec};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPoint {
    pub center: QVec,
    pub weight: Q,
}

impl WeightedPoint {
    pub fn new(center: QVec, weight: Q) -> Self {
        WeightedPoint { center, weight }
    }

    pub fn power(&self, gram: &QMat, x: &[Q]) -> Q {
        gnorm2(gram, &vsub(x, &self.center)) - &self.weight
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimaxSolution {
    pub point: QVec,
    pub value: Q,
}

/// The point where all terms in `basis` take equal value and which lies in
/// the affine hull of their centres; `None` when no such point exists.
fn equal_power_point(gram: &QMat, terms: &[&WeightedPoint]) -> Option<QVec> {
    let first = terms[0];
    let k = terms.len() - 1;
    if k == 0 {
        return Some(first.center.clone());
    }
    let dirs: Vec<QVec> = terms[1..].iter().map(|t| vsub(&t.center, &first.center)).collect();
    let mut m = QMat::zeros(k, k);
    let mut rhs = vec![Q::zero(); k];
    for j in 0..k {
        for l in 0..k {
            let v = gdot(gram, &dirs[j], &dirs[l]);
            m.set(j, l, &v + &v);
        }
        rhs[j] = gnorm2(gram, &dirs[j]) - (&terms[j + 1].weight - &first.weight);
    }
    let (mu, _) = m.solve_affine(&rhs)?;
    let mut x = first.center.clone();
    for (d, c) in dirs.iter().zip(&mu) {
        x = vadd(&x, &vscale(d, c));
    }
    Some(x)
}

enum Partial {
    Empty,
    At(MinimaxSolution),
}

struct Welzl<'a> {
    gram: &'a QMat,
    terms: &'a [WeightedPoint],
    degenerate: bool,
}

impl Welzl<'_> {
    fn solve(&mut self, count: usize, boundary: &mut Vec<usize>) -> Partial {
        if count == 0 || boundary.len() == self.gram.rows + 1 {
            return self.pinned(boundary);
        }
        let p = count - 1;
        let sub = self.solve(p, boundary);
        if let Partial::At(s) = &sub {
            if self.terms[p].power(self.gram, &s.point) <= s.value {
                return sub;
            }
        }
        boundary.push(p);
        let out = self.solve(p, boundary);
        boundary.pop();
        out
    }

    fn pinned(&mut self, boundary: &[usize]) -> Partial {
        if boundary.is_empty() {
            return Partial::Empty;
        }
        let refs: Vec<&WeightedPoint> = boundary.iter().map(|&i| &self.terms[i]).collect();
        match equal_power_point(self.gram, &refs) {
            Some(x) => {
                let value = refs[0].power(self.gram, &x);
                Partial::At(MinimaxSolution { point: x, value })
            }
            None => {
                self.degenerate = true;
                Partial::Empty
            }
        }
    }
}

fn max_power(gram: &QMat, terms: &[WeightedPoint], x: &[Q]) -> Q {
    terms.iter().map(|t| t.power(gram, x)).max().expect("nonempty")
}

/// Exhaustive search over affinely independent active sets, used when the
/// recursion meets a degenerate configuration.
pub fn minimax_exhaustive(gram: &QMat, terms: &[WeightedPoint]) -> MinimaxSolution {
    let n = gram.rows;
    let mut best: Option<MinimaxSolution> = None;
    for size in 1..=(n + 1).min(terms.len()) {
        for subset in itertools::Itertools::combinations(0..terms.len(), size) {
            let refs: Vec<&WeightedPoint> = subset.iter().map(|&i| &terms[i]).collect();
            let Some(x) = equal_power_point(gram, &refs) else { continue };
            let value = max_power(gram, terms, &x);
            if best.as_ref().map_or(true, |b| value < b.value) {
                best = Some(MinimaxSolution { point: x, value });
            }
        }
    }
    best.expect("at least one term")
}

/// Exact minimiser and minimum of `max_i power_i(x)`.
pub fn minimax(gram: &QMat, terms: &[WeightedPoint]) -> MinimaxSolution {
    assert!(!terms.is_empty(), "minimax of an empty family");
    let mut w = Welzl { gram, terms, degenerate: false };
    let mut boundary = Vec::new();
    let out = w.solve(terms.len(), &mut boundary);
    match out {
        Partial::At(s) if !w.degenerate && max_power(gram, terms, &s.point) == s.value => s,
        _ => minimax_exhaustive(gram, terms),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn wp(x: i64, y: i64, w: Q) -> WeightedPoint {
        WeightedPoint::new(vec![qi(x), qi(y)], w)
    }

    #[test]
    fn two_equal_balls_meet_at_midpoint() {
        let g = QMat::identity(2);
        let s = minimax(&g, &[wp(0, 0, qi(1)), wp(2, 0, qi(1))]);
        assert_eq!(s.point, vec![qi(1), qi(0)]);
        assert_eq!(s.value, qi(0));
    }

    #[test]
    fn equilateral_like_triple() {
        let g = QMat::identity(2);
        let terms = [wp(0, 0, qi(1)), wp(2, 0, qi(1)), wp(1, 2, qi(1))];
        let s = minimax(&g, &terms);
        // circumcentre of (0,0),(2,0),(1,2) is (1, 3/4); power 1 + 9/16 - 1
        assert_eq!(s.point, vec![qi(1), q(3, 4)]);
        assert_eq!(s.value, q(9, 16));
    }

    #[test]
    fn dominated_term_is_ignored() {
        let g = QMat::identity(2);
        let terms = [wp(0, 0, qi(4)), wp(1, 0, q(1, 100))];
        let s = minimax(&g, &terms);
        assert_eq!(s, minimax_exhaustive(&g, &terms));
    }

    #[test]
    fn agrees_with_exhaustive_on_collinear_centres() {
        let g = QMat::from_rows(vec![vec![qi(1), q(-1, 2)], vec![q(-1, 2), qi(1)]]);
        let terms = [wp(0, 0, qi(1)), wp(1, 0, qi(2)), wp(2, 0, qi(1)), wp(3, 0, q(1, 2))];
        assert_eq!(minimax(&g, &terms), minimax_exhaustive(&g, &terms));
    }
}
