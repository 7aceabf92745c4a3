//! Rank and invariant factors of sparse integer matrices.
//!
//! Unit pivots are eliminated sparsely (Markowitz order); whatever is left
//! goes through a dense Smith reduction over big integers.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::cmp::Reverse;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Sparse integer matrix stored by columns; entries are `(row, value)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: Vec<Vec<(u32, i64)>>) -> Self {
        SparseMatrix { rows, cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.cols.len()]; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                m[i as usize][j] += v;
            }
        }
        m
    }

    /// Product `self * other` (used to check `d∘d = 0`).
    pub fn compose_is_zero(&self, other: &SparseMatrix) -> bool {
        for col in &other.cols {
            let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
            for &(k, b) in col {
                for &(i, a) in &self.cols[k as usize] {
                    *acc.entry(i).or_default() += a * b;
                }
            }
            if acc.values().any(|v| *v != 0) {
                return false;
            }
        }
        true
    }
}

/// Rank and the invariant factors greater than one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SmithSummary {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

pub fn smith(m: &SparseMatrix) -> SmithSummary {
    let mut work = Work::new(m);
    match work.eliminate_units() {
        Some(unit_rank) => {
            let mut dense = dense_smith(work.remainder());
            dense.rank += unit_rank;
            dense
        }
        // coefficient growth beyond i64: redo everything densely
        None => dense_smith(m.to_dense().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()),
    }
}

struct Work {
    cols: Vec<BTreeMap<u32, i64>>,
    row_cols: Vec<BTreeSet<u32>>,
}

impl Work {
    fn new(m: &SparseMatrix) -> Self {
        let mut cols = Vec::with_capacity(m.cols.len());
        let mut row_cols = vec![BTreeSet::new(); m.rows];
        for (j, col) in m.cols.iter().enumerate() {
            let mut c = BTreeMap::new();
            for &(i, v) in col {
                *c.entry(i).or_insert(0) += v;
            }
            c.retain(|_, v| *v != 0);
            for &i in c.keys() {
                row_cols[i as usize].insert(j as u32);
            }
            cols.push(c);
        }
        Work { cols, row_cols }
    }

    fn eliminate_units(&mut self) -> Option<usize> {
        let mut heap: BinaryHeap<Reverse<(usize, u32)>> =
            self.cols.iter().enumerate().filter(|(_, c)| !c.is_empty()).map(|(j, c)| Reverse((c.len(), j as u32))).collect();
        let mut rank = 0;
        while let Some(Reverse((len, j))) = heap.pop() {
            let col = &self.cols[j as usize];
            if col.len() != len || col.is_empty() {
                continue;
            }
            // unit entry whose row is shortest
            let Some(r) = col.iter().filter(|(_, v)| v.abs() == 1).map(|(r, _)| *r).min_by_key(|r| (self.row_cols[*r as usize].len(), *r))
            else {
                continue;
            };
            let pivot_col = std::mem::take(&mut self.cols[j as usize]);
            let pv = pivot_col[&r];
            for &i in pivot_col.keys() {
                self.row_cols[i as usize].remove(&j);
            }
            let others: Vec<u32> = std::mem::take(&mut self.row_cols[r as usize]).into_iter().collect();
            for k in others {
                let target = &mut self.cols[k as usize];
                let a = target[&r] * pv;
                for (&i, &v) in &pivot_col {
                    let old = target.get(&i).copied().unwrap_or(0);
                    let nv = v.checked_mul(a).and_then(|d| old.checked_sub(d))?;
                    if nv == 0 {
                        target.remove(&i);
                        if i != r {
                            self.row_cols[i as usize].remove(&k);
                        }
                    } else {
                        target.insert(i, nv);
                        if old == 0 {
                            self.row_cols[i as usize].insert(k);
                        }
                    }
                }
                heap.push(Reverse((target.len(), k)));
            }
            rank += 1;
        }
        Some(rank)
    }

    /// Remaining non-zero block as a dense big-integer matrix.
    fn remainder(&self) -> Vec<Vec<BigInt>> {
        let cols: Vec<&BTreeMap<u32, i64>> = self.cols.iter().filter(|c| !c.is_empty()).collect();
        let rows: BTreeSet<u32> = cols.iter().flat_map(|c| c.keys().copied()).collect();
        let row_pos: BTreeMap<u32, usize> = rows.iter().enumerate().map(|(p, &r)| (r, p)).collect();
        let mut m = vec![vec![BigInt::zero(); cols.len()]; rows.len()];
        for (j, c) in cols.iter().enumerate() {
            for (r, v) in c.iter() {
                m[row_pos[r]][j] = BigInt::from(*v);
            }
        }
        m
    }
}

/// Smith reduction of a dense matrix; returns its rank and non-unit invariant factors.
pub fn dense_smith(mut m: Vec<Vec<BigInt>>) -> SmithSummary {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag: Vec<BigInt> = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest non-zero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t].clone();
            let mut changed = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let f = m[i][t].div_floor(&p);
                for j in t..cols {
                    let d = &f * &m[t][j];
                    m[i][j] -= d;
                }
                if !m[i][t].is_zero() {
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let f = m[t][j].div_floor(&p);
                for row in m.iter_mut().skip(t) {
                    let d = &f * &row[t];
                    row[j] -= d;
                }
                if !m[t][j].is_zero() {
                    changed = true;
                }
            }
            if !changed {
                // divisibility of the trailing block
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => {
                        for j in t..cols {
                            let v = m[i][j].clone();
                            m[t][j] += v;
                        }
                    }
                    None => break,
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            m.swap(t, best.0);
            for row in m.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    SmithSummary { rank: diag.len(), torsion: diag.into_iter().filter(|d| !d.is_one()).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sparse(dense: &[&[i64]]) -> SparseMatrix {
        let rows = dense.len();
        let ncols = dense.first().map_or(0, |r| r.len());
        let cols = (0..ncols)
            .map(|j| (0..rows).filter(|&i| dense[i][j] != 0).map(|i| (i as u32, dense[i][j])).collect())
            .collect();
        SparseMatrix::new(rows, cols)
    }

    #[test]
    fn known_invariant_factors() {
        let s = smith(&sparse(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s.rank, 3);
        assert_eq!(s.torsion, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let s = smith(&sparse(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.torsion, vec![BigInt::from(6)]);
        let s = smith(&sparse(&[&[1, 1], &[1, 1]]));
        assert_eq!((s.rank, s.torsion.len()), (1, 0));
    }

    #[test]
    fn unit_elimination_matches_dense() {
        let m = sparse(&[&[1, 0, 1, 0], &[-1, 1, 0, 2], &[0, -1, -1, 0], &[0, 0, 0, 2]]);
        let dense = dense_smith(m.to_dense().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect());
        assert_eq!(smith(&m), dense);
    }
}
