//! Integral homology with a collapse certificate for a few small complexes.

use cat0_classify::homology::{analyze_simplicial, full_simplex, projective_plane, simplex_boundary, SimplicialComplex};

fn main() {
    let annulus = SimplicialComplex::from_simplices(
        (0..6).map(|v| v.to_string()).collect(),
        vec![vec![0, 1, 3], vec![1, 3, 4], vec![1, 2, 4], vec![2, 4, 5], vec![2, 0, 5], vec![0, 5, 3]],
    );
    let cases = [
        ("3-simplex", full_simplex(3)),
        ("hollow triangle", simplex_boundary(2)),
        ("projective plane (6 vertices)", projective_plane()),
        ("annulus", annulus),
    ];
    for (name, c) in cases {
        let r = analyze_simplicial(&c);
        println!(
            "{name:<30} cells {:?}  chi {}  homology {}  status {:?} ({} collapse steps)",
            c.counts(),
            c.euler_characteristic(),
            r.homology.describe(),
            r.status(),
            r.collapse_steps
        );
    }
}
