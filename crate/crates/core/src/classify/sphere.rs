//! The boundary of the cross-polytope as a triangulated sphere with its
//! antipodal involution.

use crate::homology::{Simplex, SimplicialComplex};

/// Vertex `2j` is `+e_{j+1}` and `2j + 1` is `-e_{j+1}`.
#[derive(Debug, Clone)]
pub struct SphereModel {
    pub dim: usize,
    pub complex: SimplicialComplex,
}

impl SphereModel {
    /// The `n`-sphere on `2(n + 1)` vertices: a simplex for every choice of
    /// signs on a nonempty set of coordinates.
    pub fn new(n: usize) -> Self {
        let labels = (0..n + 1).flat_map(|j| [format!("+e{}", j + 1), format!("-e{}", j + 1)]).collect();
        let facets = (0..1u64 << (n + 1)).map(|signs| (0..=n as u32).map(|j| 2 * j + ((signs >> j) & 1) as u32).collect());
        SphereModel { dim: n, complex: SimplicialComplex::from_simplices(labels, facets) }
    }

    pub fn antipode(v: u32) -> u32 {
        v ^ 1
    }

    pub fn antipodal(s: &[u32]) -> Simplex {
        s.iter().map(|&v| Self::antipode(v)).collect()
    }

    /// Simplices `c` with `a(c) ∩ c` nonempty; always zero for this model.
    pub fn antipodal_overlaps(&self) -> usize {
        self.complex
            .simplices()
            .filter(|s| {
                let a = Self::antipodal(s);
                a.iter().any(|v| s.binary_search(v).is_ok())
            })
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{analyze_simplicial, Homology};

    #[test]
    fn cross_polytope_is_a_sphere_with_free_antipode() {
        for n in 0..4 {
            let s = SphereModel::new(n);
            assert_eq!(s.complex.vertex_count(), 2 * (n + 1));
            assert_eq!(s.complex.simplex_count(), 3usize.pow(n as u32 + 1) - 1);
            assert_eq!(analyze_simplicial(&s.complex).homology, Homology::sphere(n));
            assert_eq!(s.antipodal_overlaps(), 0);
            for t in s.complex.simplices() {
                assert!(s.complex.contains(&SphereModel::antipodal(t)));
            }
        }
    }
}
