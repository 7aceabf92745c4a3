//! Greedy elementary collapses on a regular cell complex given by its
//! boundary matrices. A pair `(face, cell)` is removed when `face` lies in
//! exactly one surviving cell and the incidence is a unit.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::chain::ChainComplex;
use super::snf::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseOutcome {
    pub collapsed_to_point: bool,
    /// Elementary collapses performed.
    pub steps: usize,
    /// Surviving cells per degree (indices into the original degree layers).
    pub survivors: Vec<Vec<usize>>,
}

impl CollapseOutcome {
    /// The subcomplex of surviving cells; it has the homology of the input.
    pub fn residual(&self, c: &ChainComplex) -> ChainComplex {
        let mut new_index: Vec<Vec<Option<u32>>> = c.ranks.iter().map(|&r| vec![None; r]).collect();
        for (d, s) in self.survivors.iter().enumerate() {
            for (k, &i) in s.iter().enumerate() {
                new_index[d][i] = Some(k as u32);
            }
        }
        let mut ranks: Vec<usize> = self.survivors.iter().map(Vec::len).collect();
        while ranks.last() == Some(&0) {
            ranks.pop();
        }
        let mut boundaries = vec![SparseMatrix::new(0, vec![Vec::new(); ranks.first().copied().unwrap_or(0)])];
        for d in 1..ranks.len() {
            let cols = self.survivors[d]
                .iter()
                .map(|&i| {
                    c.boundaries[d].cols[i]
                        .iter()
                        .map(|&(r, v)| (new_index[d - 1][r as usize].expect("survivors form a subcomplex"), v))
                        .collect()
                })
                .collect();
            boundaries.push(SparseMatrix::new(ranks[d - 1], cols));
        }
        ChainComplex { ranks, boundaries }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Order {
    HighFirst,
    LowFirst,
}

/// Tries a couple of deterministic greedy orders and keeps the best result.
pub fn greedy_collapse(c: &ChainComplex) -> CollapseOutcome {
    let first = collapse_with(c, Order::HighFirst);
    if first.collapsed_to_point {
        return first;
    }
    let second = collapse_with(c, Order::LowFirst);
    let size = |o: &CollapseOutcome| o.survivors.iter().map(Vec::len).sum::<usize>();
    if size(&second) < size(&first) {
        second
    } else {
        first
    }
}

fn collapse_with(c: &ChainComplex, order: Order) -> CollapseOutcome {
    let offsets: Vec<usize> = c.ranks.iter().scan(0, |acc, &r| {
        let o = *acc;
        *acc += r;
        Some(o)
    })
    .collect();
    let total: usize = c.ranks.iter().sum();
    let mut dim_of = vec![0usize; total];
    let mut faces: Vec<Vec<(usize, i64)>> = vec![Vec::new(); total];
    let mut cofaces: Vec<Vec<(usize, i64)>> = vec![Vec::new(); total];
    for (d, &r) in c.ranks.iter().enumerate() {
        for i in 0..r {
            let g = offsets[d] + i;
            dim_of[g] = d;
            if d > 0 {
                for &(row, v) in &c.boundaries[d].cols[i] {
                    let f = offsets[d - 1] + row as usize;
                    faces[g].push((f, v));
                    cofaces[f].push((g, v));
                }
            }
        }
    }
    let mut alive = vec![true; total];
    let mut count: Vec<usize> = cofaces.iter().map(Vec::len).collect();
    let key = |g: usize| match order {
        Order::HighFirst => (Reverse(dim_of[g] as i64), g),
        Order::LowFirst => (Reverse(-(dim_of[g] as i64)), g),
    };
    let mut heap: BinaryHeap<Reverse<(Reverse<i64>, usize)>> =
        (0..total).filter(|&g| count[g] == 1).map(|g| Reverse(key(g))).collect();
    let mut steps = 0;
    while let Some(Reverse((_, s))) = heap.pop() {
        if !alive[s] || count[s] != 1 {
            continue;
        }
        let Some(&(t, v)) = cofaces[s].iter().find(|(t, _)| alive[*t]) else { continue };
        if v.abs() != 1 {
            continue;
        }
        alive[s] = false;
        alive[t] = false;
        steps += 1;
        for &(f, _) in faces[t].iter().chain(faces[s].iter()) {
            if alive[f] {
                count[f] -= 1;
                if count[f] == 1 {
                    heap.push(Reverse(key(f)));
                }
            }
        }
    }
    let survivors: Vec<Vec<usize>> =
        c.ranks.iter().enumerate().map(|(d, &r)| (0..r).filter(|&i| alive[offsets[d] + i]).collect()).collect();
    let collapsed_to_point = survivors.first().map_or(false, |v| v.len() == 1) && survivors.iter().skip(1).all(Vec::is_empty);
    CollapseOutcome { collapsed_to_point, steps, survivors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::complex::{full_simplex, projective_plane, simplex_boundary, SimplicialComplex};

    fn cc(c: &SimplicialComplex) -> ChainComplex {
        ChainComplex::from_simplicial(c)
    }

    #[test]
    fn simplices_collapse() {
        for n in 0..6 {
            assert!(greedy_collapse(&cc(&full_simplex(n))).collapsed_to_point);
        }
    }

    #[test]
    fn spheres_and_projective_plane_do_not() {
        assert!(!greedy_collapse(&cc(&simplex_boundary(3))).collapsed_to_point);
        let rp2 = cc(&projective_plane());
        let out = greedy_collapse(&rp2);
        assert!(!out.collapsed_to_point);
        assert_eq!(out.residual(&rp2).reduced_homology(), rp2.reduced_homology());
    }

    #[test]
    fn path_collapses_and_two_points_do_not() {
        let path = SimplicialComplex::from_simplices(vec!["a".into(), "b".into(), "c".into()], [vec![0, 1], vec![1, 2]]);
        assert!(greedy_collapse(&cc(&path)).collapsed_to_point);
        let two = SimplicialComplex::from_simplices(vec!["a".into(), "b".into()], [vec![0], vec![1]]);
        assert!(!greedy_collapse(&cc(&two)).collapsed_to_point);
    }
}
