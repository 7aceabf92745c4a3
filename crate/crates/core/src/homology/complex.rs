use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;

pub type Simplex = Vec<u32>;

/// A finite abstract simplicial complex on labelled vertices `0..n`.
///
/// Simplices are stored sorted, grouped by dimension, and every face of a
/// stored simplex is stored too. Vertices need not all be used.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    pub labels: Vec<String>,
    /// `by_dim[k]` holds the `k`-simplices in increasing lexicographic order.
    pub by_dim: Vec<Vec<Simplex>>,
}

impl SimplicialComplex {
    pub fn empty(labels: Vec<String>) -> Self {
        SimplicialComplex { labels, by_dim: Vec::new() }
    }

    /// The complex generated by `simplices` (faces are added).
    pub fn from_simplices<I>(labels: Vec<String>, simplices: I) -> Self
    where
        I: IntoIterator<Item = Simplex>,
    {
        let mut all: HashSet<Simplex> = HashSet::new();
        for mut s in simplices {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() || all.contains(&s) {
                continue;
            }
            for k in 1..=s.len() {
                for face in s.iter().copied().combinations(k) {
                    all.insert(face);
                }
            }
        }
        Self::from_closed_set(labels, all)
    }

    /// Builds from a set already closed under faces.
    pub fn from_closed_set(labels: Vec<String>, all: HashSet<Simplex>) -> Self {
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in all {
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
        for layer in &mut by_dim {
            layer.sort_unstable();
        }
        SimplicialComplex { labels, by_dim }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.first().map_or(true, |v| v.is_empty())
    }

    /// Dimension, or `-1` for the empty complex.
    pub fn dim(&self) -> i64 {
        self.by_dim.iter().rposition(|l| !l.is_empty()).map_or(-1, |d| d as i64)
    }

    pub fn simplex_count(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn simplex_set(&self) -> HashSet<Simplex> {
        self.simplices().cloned().collect()
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        let d = s.len().wrapping_sub(1);
        self.by_dim.get(d).map_or(false, |l| l.binary_search_by(|x| x.as_slice().cmp(s)).is_ok())
    }

    /// Used vertices (those spanning a 0-simplex).
    pub fn vertices(&self) -> Vec<u32> {
        self.by_dim.first().map_or(Vec::new(), |l| l.iter().map(|s| s[0]).collect())
    }

    /// Maximal simplices, sorted.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut covered: HashSet<&[u32]> = HashSet::new();
        for layer in self.by_dim.iter().skip(1) {
            for s in layer {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    if let Ok(pos) = self.by_dim[s.len() - 2].binary_search(&f) {
                        covered.insert(self.by_dim[s.len() - 2][pos].as_slice());
                    }
                }
            }
        }
        let mut out: Vec<Simplex> = self.simplices().filter(|s| !covered.contains(s.as_slice())).cloned().collect();
        out.sort();
        out
    }

    /// The full subcomplex on the given vertices.
    pub fn full_subcomplex(&self, keep: &BTreeSet<u32>) -> SimplicialComplex {
        let by_dim = self
            .by_dim
            .iter()
            .map(|l| l.iter().filter(|s| s.iter().all(|v| keep.contains(v))).cloned().collect::<Vec<_>>())
            .collect::<Vec<_>>();
        let mut out = SimplicialComplex { labels: self.labels.clone(), by_dim };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.by_dim.last().map_or(false, |l| l.is_empty()) {
            self.by_dim.pop();
        }
    }

    /// Checks closure under faces and the absence of repeated vertices.
    pub fn validate(&self) -> Result<(), String> {
        for (d, layer) in self.by_dim.iter().enumerate() {
            for s in layer {
                if s.len() != d + 1 || s.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(format!("malformed simplex {s:?}"));
                }
                if s.iter().any(|&v| v as usize >= self.labels.len()) {
                    return Err(format!("simplex {s:?} uses an unknown vertex"));
                }
                if d > 0 {
                    for i in 0..s.len() {
                        let mut f = s.clone();
                        f.remove(i);
                        if !self.contains(&f) {
                            return Err(format!("face {f:?} of {s:?} missing"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Index of each simplex within its dimension layer.
    pub fn index(&self) -> Vec<HashMap<&[u32], usize>> {
        self.by_dim.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect()).collect()
    }

    /// Image under a vertex map; `None` when some vertex has no image or the
    /// image of a simplex is not a simplex.
    pub fn map_simplex(map: &[Option<u32>], s: &[u32]) -> Option<Simplex> {
        let mut out: Simplex = s.iter().map(|&v| map.get(v as usize).copied().flatten()).collect::<Option<_>>()?;
        out.sort_unstable();
        Some(out)
    }
}

/// The boundary of the standard simplex on `n + 1` vertices (an `n-1`-sphere).
pub fn simplex_boundary(n: usize) -> SimplicialComplex {
    let labels = (0..=n).map(|i| format!("v{i}")).collect();
    let facets = (0..=n as u32).combinations(n);
    SimplicialComplex::from_simplices(labels, facets)
}

pub fn full_simplex(n: usize) -> SimplicialComplex {
    let labels = (0..=n).map(|i| format!("v{i}")).collect();
    SimplicialComplex::from_simplices(labels, [(0..=n as u32).collect::<Vec<_>>()])
}

/// The six-vertex triangulation of the real projective plane.
pub fn projective_plane() -> SimplicialComplex {
    let labels = (0..6).map(|i| format!("v{i}")).collect();
    let facets: [[u32; 3]; 10] = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 1, 5],
        [1, 2, 4],
        [2, 3, 5],
        [1, 3, 4],
        [2, 4, 5],
        [1, 3, 5],
    ];
    SimplicialComplex::from_simplices(labels, facets.iter().map(|f| f.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_counts() {
        let c = full_simplex(2);
        assert_eq!(c.counts(), vec![3, 3, 1]);
        assert_eq!(c.euler_characteristic(), 1);
        assert_eq!(c.facets(), vec![vec![0, 1, 2]]);
        c.validate().unwrap();
        let rp2 = projective_plane();
        assert_eq!(rp2.counts(), vec![6, 15, 10]);
        assert_eq!(rp2.euler_characteristic(), 1);
    }

    #[test]
    fn full_subcomplex_keeps_induced_simplices() {
        let c = full_simplex(3);
        let sub = c.full_subcomplex(&[0, 2, 3].into_iter().collect());
        assert_eq!(sub.counts(), vec![3, 3, 1]);
        assert!(c.full_subcomplex(&BTreeSet::new()).is_empty());
        assert_eq!(c.full_subcomplex(&BTreeSet::new()).dim(), -1);
    }
}
