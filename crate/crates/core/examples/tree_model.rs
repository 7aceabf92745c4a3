//! The weighted binary tree: edge lengths, boundary at distance one, and the
//! odometer action.

use cat0_classify::model::{TreeAutomorphism, TreePoint, TreeSpace};
use cat0_classify::rational::fmt_q;

fn main() {
    let t = TreeSpace::new(12, true);
    for n in [1, 2, 3, 12] {
        println!("edge into level {n:>2}: {}", fmt_q(&t.edge_weight(n)));
    }
    let a = t.boundary_point(0);
    let b = t.boundary_point(5);
    println!("d(root, boundary 0) = {}", fmt_q(&t.distance(&TreePoint::root(), &a)));
    println!("d(boundary 0, boundary 5) = {}", fmt_q(&t.distance(&a, &b)));

    let phi = TreeAutomorphism::Odometer(1);
    for n in 0..=5 {
        let start = TreePoint::node(n, 0);
        let mut p = phi.apply(&t, &start);
        let mut orbit = vec![start.clone()];
        while p != start {
            orbit.push(p.clone());
            p = phi.apply(&t, &p);
        }
        println!("odometer orbit at level {n}: {} nodes", orbit.len());
    }
}
