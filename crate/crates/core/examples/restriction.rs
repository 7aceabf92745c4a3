//! The restriction of the nerve to a fixed set: fixed subcomplex against the
//! nerve of the traces on the fixed set.

use cat0_classify::covers::{check_restriction, cover_window, nerve, restriction_map, CoverPolicy, VertexAction};
use cat0_classify::group::{GroupSpec, Isometry};
use cat0_classify::linalg::QMat;
use cat0_classify::rational::qi;

fn main() {
    let g = GroupSpec::preset("pm", 6).unwrap();
    let cover = cover_window(&g, &qi(2), &CoverPolicy::default()).unwrap();
    let n = nerve(&cover).unwrap();
    let mirror = Isometry::linear(QMat::from_i64(&[&[1, 0], &[0, -1]]));
    let action = VertexAction::new(&cover, &[mirror]).unwrap();
    let map = restriction_map(&cover, &n, &action).unwrap();
    let check = check_restriction(&map);
    println!("fixed set: {}", check.fixed_set);
    println!("source cells {:?}, target cells {:?}", map.source.counts(), map.target.counts());
    println!(
        "simplex fibers {}/{}, homology {} / {}, passed {}",
        check.simplex_fibers,
        check.target_simplices,
        check.source_homology.homology.describe(),
        check.target_homology.homology.describe(),
        check.passed()
    );
}
