//! Integral homology and collapse certificates for finite complexes.

mod chain;
mod collapse;
mod complex;
mod snf;

use serde::{Deserialize, Serialize};

pub use chain::{ChainComplex, Homology};
pub use collapse::{greedy_collapse, CollapseOutcome};
pub use complex::{full_simplex, projective_plane, simplex_boundary, Simplex, SimplicialComplex};
pub use snf::{dense_smith, smith, SmithSummary, SparseMatrix};

/// Homology together with the collapse certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyResult {
    pub homology: Homology,
    pub collapsed_to_point: bool,
    pub collapse_steps: usize,
    pub cells: Vec<usize>,
}

impl HomologyResult {
    pub fn status(&self) -> Contractibility {
        if self.homology.empty {
            Contractibility::Empty
        } else if self.collapsed_to_point {
            Contractibility::Collapsible
        } else if self.homology.is_acyclic() {
            Contractibility::AcyclicOnly
        } else {
            Contractibility::NotAcyclic
        }
    }

    /// Whether reduced homology vanishes in degrees `0..=k`.
    pub fn acyclic_through(&self, k: usize) -> bool {
        !self.homology.empty
            && (0..=k).all(|d| {
                self.homology.betti.get(d).map_or(true, |b| *b == 0) && self.homology.torsion.get(d).map_or(true, Vec::is_empty)
            })
    }
}

/// What a fixed set was shown to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, PartialOrd, Ord, Hash)]
#[serde(rename_all = "kebab-case")]
pub enum Contractibility {
    Empty,
    Collapsible,
    AcyclicOnly,
    NotAcyclic,
}

/// Collapses greedily, then computes homology on what is left.
pub fn analyze(c: &ChainComplex) -> HomologyResult {
    let outcome = greedy_collapse(c);
    let homology = if c.ranks.first().map_or(true, |&r| r == 0) {
        Homology { empty: true, ..Homology::default() }
    } else if outcome.collapsed_to_point {
        Homology::trivial()
    } else {
        outcome.residual(c).reduced_homology()
    };
    HomologyResult { homology, collapsed_to_point: outcome.collapsed_to_point, collapse_steps: outcome.steps, cells: c.ranks.clone() }
}

pub fn analyze_simplicial(c: &SimplicialComplex) -> HomologyResult {
    analyze(&ChainComplex::from_simplicial(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Rank of a dense integer matrix over the rationals by fraction-free elimination.
    fn rank_q(mut m: Vec<Vec<i128>>) -> usize {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
            m.swap(rank, p);
            for r in 0..rows {
                if r != rank && m[r][c] != 0 {
                    let (a, b) = (m[rank][c], m[r][c]);
                    for k in 0..cols {
                        m[r][k] = m[r][k] * a - m[rank][k] * b;
                    }
                    let g = m[r].iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
                    if g > 1 {
                        m[r].iter_mut().for_each(|x| *x /= g);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn random_complex() -> impl Strategy<Value = SimplicialComplex> {
        (3usize..8).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::btree_set(0..n as u32, 1..=4), 1..10).prop_map(move |facets| {
                let labels = (0..n).map(|i| format!("v{i}")).collect();
                SimplicialComplex::from_simplices(labels, facets.into_iter().map(|s| s.into_iter().collect()))
            })
        })
    }

    #[test]
    fn hollow_triangle_has_one_loop() {
        let r = analyze_simplicial(&simplex_boundary(2));
        assert_eq!(r.homology.betti, vec![0, 1]);
        assert_eq!(r.status(), Contractibility::NotAcyclic);
        assert_eq!(analyze_simplicial(&full_simplex(2)).status(), Contractibility::Collapsible);
        let rp2 = analyze_simplicial(&projective_plane());
        assert_eq!(rp2.homology.torsion[1], vec!["2".to_string()]);
    }

    proptest! {
        #[test]
        fn betti_numbers_match_rational_rank(c in random_complex()) {
            let chain = ChainComplex::from_simplicial(&c);
            let r = analyze(&chain);
            let direct = chain.reduced_homology();
            prop_assert_eq!(&r.homology, &direct);
            // rational ranks with the augmentation as d_0
            let mut ranks = vec![1usize];
            for k in 1..chain.ranks.len() {
                let dense = chain.boundaries[k].to_dense().into_iter().map(|row| row.into_iter().map(i128::from).collect()).collect();
                ranks.push(rank_q(dense));
            }
            ranks.push(0);
            for k in 0..chain.ranks.len() {
                let b = chain.ranks[k] - ranks[k] - ranks[k + 1];
                prop_assert_eq!(direct.betti.get(k).copied().unwrap_or(0), b);
            }
            let euler: i64 = chain.euler_characteristic();
            let betti_euler: i64 = direct.betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
            prop_assert_eq!(euler - 1, betti_euler);
            prop_assert_eq!(euler, c.euler_characteristic());
        }

        #[test]
        fn collapsible_implies_acyclic(c in random_complex()) {
            let r = analyze_simplicial(&c);
            if r.collapsed_to_point {
                prop_assert!(ChainComplex::from_simplicial(&c).reduced_homology().is_acyclic());
            }
        }
    }
}
