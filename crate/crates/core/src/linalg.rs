//! Small dense rational linear algebra (dimension at most a handful).

use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{fmt_q, qi, Q};

pub type QVec = Vec<Q>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|c| fmt_q(self.get(r, c))).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        QMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
    }

    pub fn from_columns(cols: &[QVec]) -> Self {
        let n = cols.first().map_or(0, |c| c.len());
        let mut m = QMat::zeros(n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                m.set(i, j, col[i].clone());
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> QVec {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> QVec {
        (0..self.cols).map(|c| self.get(r, c).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        let mut out = QMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Q::zero();
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    if !a.is_zero() {
                        acc += a * other.get(k, c);
                    }
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> QVec {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Q::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(r, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> QMat {
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == QMat::identity(self.rows)
    }

    /// Submatrix keeping the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> QMat {
        let mut m = QMat::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| crate::rational::to_f64(self.get(r, c))).collect()).collect()
    }

    pub fn determinant(&self) -> Q {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Q::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Q::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let pivot = a.get(col, col).clone();
            det *= &pivot;
            for r in col + 1..n {
                let f = a.get(r, col) / &pivot;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = a.get(r, c) - &f * a.get(col, c);
                    a.set(r, c, v);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(p, row);
            let inv = self.get(row, col).recip();
            for c in 0..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..self.cols {
                    let v = self.get(r, c) - &f * self.get(row, c);
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<QVec> {
        let mut a = self.clone();
        let pivots = a.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -a.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    /// General solution of `A x = b`: a particular solution plus a nullspace basis,
    /// or `None` when the system is inconsistent.
    pub fn solve_affine(&self, b: &[Q]) -> Option<(QVec, Vec<QVec>)> {
        assert_eq!(self.rows, b.len());
        let mut aug = QMat::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(i, self.cols).clone();
        }
        Some((x, self.nullspace()))
    }

    pub fn inverse(&self) -> Option<QMat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = QMat::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Q::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(aug.select(&rows, &cols))
    }
}

pub fn vadd(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vscale(a: &[Q], s: &Q) -> QVec {
    a.iter().map(|x| x * s).collect()
}

pub fn vneg(a: &[Q]) -> QVec {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// `u^T G v`.
pub fn gdot(g: &QMat, u: &[Q], v: &[Q]) -> Q {
    let gv = g.mul_vec(v);
    u.iter().zip(&gv).map(|(a, b)| a * b).fold(Q::zero(), |acc, x| acc + x)
}

pub fn gnorm2(g: &QMat, u: &[Q]) -> Q {
    gdot(g, u, u)
}

pub fn int_vec(v: &[i64]) -> QVec {
    v.iter().map(|&x| qi(x)).collect()
}

/// `G`-orthogonal projection of `v` onto the span of `basis` (assumed independent).
pub fn project_onto_span(g: &QMat, basis: &[QVec], v: &[Q]) -> QVec {
    if basis.is_empty() {
        return vec![Q::zero(); v.len()];
    }
    let k = basis.len();
    let mut m = QMat::zeros(k, k);
    let mut rhs = vec![Q::zero(); k];
    for i in 0..k {
        for j in 0..k {
            m.set(i, j, gdot(g, &basis[i], &basis[j]));
        }
        rhs[i] = gdot(g, &basis[i], v);
    }
    let (coef, _) = m.solve_affine(&rhs).expect("independent basis");
    let mut out = vec![Q::zero(); v.len()];
    for (b, c) in basis.iter().zip(&coef) {
        out = vadd(&out, &vscale(b, c));
    }
    out
}

/// The point of the affine subspace `x0 + span(basis)` nearest to `b` in the `G` metric.
pub fn project_affine(g: &QMat, x0: &[Q], basis: &[QVec], b: &[Q]) -> QVec {
    vadd(x0, &project_onto_span(g, basis, &vsub(b, x0)))
}

/// Scales a non-zero rational vector to the primitive integer vector pointing the same way.
pub fn primitive_direction(v: &[Q]) -> Option<Vec<i64>> {
    use num_integer::Integer;
    if is_zero_vec(v) {
        return None;
    }
    let mut lcm = num_bigint::BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = num_bigint::BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    ints.iter()
        .map(|x| {
            let y: num_bigint::BigInt = x / &g;
            i64::try_from(y).ok()
        })
        .collect()
}

/// The lexicographically least of `v` and `-v`.
pub fn canonical_sign(v: &[i64]) -> (Vec<i64>, i64) {
    let neg: Vec<i64> = v.iter().map(|x| -x).collect();
    if neg < v.to_vec() {
        (neg, -1)
    } else {
        (v.to_vec(), 1)
    }
}

/// Completes a primitive integer vector to a unimodular integer matrix whose
/// first column is that vector. Returns the matrix as rows.
pub fn complete_to_unimodular(v: &[i64]) -> Option<Vec<Vec<i64>>> {
    let n = v.len();
    // Track U with U * e1-reduction: we apply unimodular row operations to v
    // (w = A v) until w = ±e1, then the answer is A^{-1} (columns).
    let mut w = v.to_vec();
    let mut a_inv: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    // Row op "row i -= k * row j" on w corresponds to A_inv column j += k * column i.
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| w[i] != 0).collect();
        if nonzero.is_empty() {
            return None;
        }
        if nonzero.len() == 1 {
            let i = nonzero[0];
            if w[i].abs() != 1 {
                return None;
            }
            // swap i to position 0 and fix sign
            if i != 0 {
                w.swap(0, i);
                for row in a_inv.iter_mut() {
                    row.swap(0, i);
                }
            }
            if w[0] == -1 {
                w[0] = 1;
                for row in a_inv.iter_mut() {
                    row[0] = -row[0];
                }
            }
            // A_inv has first column equal to v now.
            return Some(a_inv);
        }
        // pick smallest |w| as pivot and reduce the others
        let &p = nonzero.iter().min_by_key(|&&i| w[i].abs()).unwrap();
        for &i in &nonzero {
            if i == p {
                continue;
            }
            let k = w[i].div_euclid(w[p]);
            if k == 0 {
                continue;
            }
            w[i] -= k * w[p];
            for row in a_inv.iter_mut() {
                row[p] += k * row[i];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::rational::q;

    #[test]
    fn solve_and_nullspace() {
        let a = QMat::from_i64(&[&[1, 2], &[2, 4]]);
        let (x, ns) = a.solve_affine(&[qi(3), qi(6)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![qi(3), qi(6)]);
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vec(&a.mul_vec(&ns[0])));
        assert!(a.solve_affine(&[qi(1), qi(1)]).is_none());
    }

    #[test]
    fn inverse_and_det() {
        let a = QMat::from_rows(vec![vec![q(1, 2), qi(1)], vec![qi(3), qi(4)]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert_eq!(a.determinant(), qi(-1));
        assert!(QMat::from_i64(&[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn unimodular_completion() {
        for v in [vec![1, 0], vec![3, 5], vec![-2, 7], vec![0, -1], vec![2, 3, 5], vec![6, 10, 15]] {
            let u = complete_to_unimodular(&v).unwrap();
            let m = QMat::from_rows(u.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect());
            assert_eq!(m.column(0), int_vec(&v));
            assert_eq!(m.determinant().abs(), qi(1));
        }
        assert!(complete_to_unimodular(&[2, 4]).is_none());
    }

    #[test]
    fn primitive_and_canonical() {
        assert_eq!(primitive_direction(&[q(1, 2), qi(0)]), Some(vec![1, 0]));
        assert_eq!(primitive_direction(&[q(-2, 3), q(4, 3)]), Some(vec![-1, 2]));
        assert_eq!(canonical_sign(&[1, 0]), (vec![-1, 0], -1));
        assert_eq!(canonical_sign(&[-1, 2]), (vec![-1, 2], 1));
    }
}
