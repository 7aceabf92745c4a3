//! A group-invariant cover of the window by small balls, its exhaustive
//! check, and its nerve.

use cat0_classify::covers::{check_good_cover, cover_window, multiplicity, nerve, CoverPolicy};
use cat0_classify::group::GroupSpec;
use cat0_classify::homology::analyze_simplicial;
use cat0_classify::rational::{fmt_q, qi};

fn main() {
    let g = GroupSpec::preset("p2", 6).unwrap();
    let cover = cover_window(&g, &qi(2), &CoverPolicy::default()).unwrap();
    println!("{} balls in {} orbits, radii {}..{}", cover.len(), cover.reps.len(), fmt_q(&cover.min_radius()), fmt_q(&cover.max_radius()));
    let check = check_good_cover(&cover).unwrap();
    println!(
        "checked {} elements up to displacement {}: invariance failures {}, overlap failures {}",
        check.elements_checked,
        fmt_q(&check.displacement_bound),
        check.invariance_failures.len(),
        check.overlap_failures.len()
    );
    let n = nerve(&cover).unwrap();
    let r = analyze_simplicial(&n);
    println!("nerve cells {:?}, multiplicity {}, {:?}", n.counts(), multiplicity(&n), r.status());
}
