use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::complex::SimplicialComplex;
use super::snf::{smith, SmithSummary, SparseMatrix};

/// A finite free chain complex `C_d -> ... -> C_0`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainComplex {
    /// Number of cells in each degree.
    pub ranks: Vec<usize>,
    /// `boundaries[k]` is `d_k : C_k -> C_{k-1}` for `k >= 1`; `boundaries[0]` is unused.
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn from_simplicial(c: &SimplicialComplex) -> Self {
        let index = c.index();
        let ranks = c.counts();
        let mut boundaries = vec![SparseMatrix::new(0, vec![Vec::new(); ranks.first().copied().unwrap_or(0)])];
        for k in 1..ranks.len() {
            let cols = c.by_dim[k]
                .iter()
                .map(|s| {
                    (0..s.len())
                        .map(|i| {
                            let mut f = s.clone();
                            f.remove(i);
                            let sign = if i % 2 == 0 { 1 } else { -1 };
                            (index[k - 1][f.as_slice()] as u32, sign)
                        })
                        .collect()
                })
                .collect();
            boundaries.push(SparseMatrix::new(ranks[k - 1], cols));
        }
        ChainComplex { ranks, boundaries }
    }

    pub fn is_complex(&self) -> bool {
        (2..self.boundaries.len()).all(|k| self.boundaries[k - 1].compose_is_zero(&self.boundaries[k]))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks.iter().enumerate().map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) }).sum()
    }

    /// Reduced integral homology (augmentation `C_0 -> Z` sending cells to 1).
    pub fn reduced_homology(&self) -> Homology {
        let top = self.ranks.len();
        if top == 0 || self.ranks[0] == 0 {
            return Homology { empty: true, betti: Vec::new(), torsion: Vec::new() };
        }
        let summaries: Vec<SmithSummary> = (0..=top)
            .map(|k| match k {
                0 => SmithSummary { rank: 1, torsion: Vec::new() },
                k if k < top => smith(&self.boundaries[k]),
                _ => SmithSummary::default(),
            })
            .collect();
        let mut betti = Vec::with_capacity(top);
        let mut torsion = Vec::with_capacity(top);
        for k in 0..top {
            betti.push(self.ranks[k] - summaries[k].rank - summaries[k + 1].rank);
            torsion.push(summaries[k + 1].torsion.iter().map(BigInt::to_string).collect());
        }
        let mut h = Homology { empty: false, betti, torsion };
        h.trim();
        h
    }
}

/// Reduced homology groups `H_k = Z^{betti[k]} ⊕ torsion[k]`.
///
/// The empty complex has `H_{-1} = Z`, recorded by `empty`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Homology {
    pub empty: bool,
    pub betti: Vec<usize>,
    /// Invariant factors (decimal strings) of each torsion group.
    pub torsion: Vec<Vec<String>>,
}

impl Homology {
    pub fn trivial() -> Self {
        Homology::default()
    }

    /// Reduced homology of the `n`-sphere.
    pub fn sphere(n: usize) -> Self {
        let mut betti = vec![0; n + 1];
        betti[n] = 1;
        Homology { empty: false, betti, torsion: vec![Vec::new(); n + 1] }
    }

    pub fn is_acyclic(&self) -> bool {
        !self.empty && self.betti.iter().all(|&b| b == 0) && self.torsion.iter().all(Vec::is_empty)
    }

    fn trim(&mut self) {
        while self.betti.last() == Some(&0) && self.torsion.last().map_or(true, Vec::is_empty) {
            self.betti.pop();
            self.torsion.pop();
        }
    }

    /// Short human form such as `0`, `Z`, `Z/2 in degree 1`.
    pub fn describe(&self) -> String {
        if self.empty {
            return "empty (H_-1 = Z)".into();
        }
        if self.is_acyclic() {
            return "acyclic".into();
        }
        let mut parts = Vec::new();
        for (k, b) in self.betti.iter().enumerate() {
            let mut gens: Vec<String> = Vec::new();
            if *b == 1 {
                gens.push("Z".into());
            } else if *b > 1 {
                gens.push(format!("Z^{b}"));
            }
            gens.extend(self.torsion[k].iter().map(|t| format!("Z/{t}")));
            if !gens.is_empty() {
                parts.push(format!("H{k}={}", gens.join("+")));
            }
        }
        parts.join(", ")
    }

    /// Reduced homology of the join `A * B`: `H~_{n+1}(A*B) = ⊕_{i+j=n} H~_i(A)⊗H~_j(B)`
    /// plus the Tor terms. Only free parts are combined when torsion is present
    /// on both sides; callers fall back to a direct computation in that case.
    pub fn join(&self, other: &Homology) -> Option<Homology> {
        if self.empty {
            return Some(other.clone());
        }
        if other.empty {
            return Some(self.clone());
        }
        let has_t = |h: &Homology| h.torsion.iter().any(|t| !t.is_empty());
        if has_t(self) || has_t(other) {
            return None;
        }
        let len = self.betti.len() + other.betti.len() + 1;
        let mut betti = vec![0; len];
        for (i, a) in self.betti.iter().enumerate() {
            for (j, b) in other.betti.iter().enumerate() {
                betti[i + j + 1] += a * b;
            }
        }
        let mut h = Homology { empty: false, torsion: vec![Vec::new(); len], betti };
        h.trim();
        Some(h)
    }
}
