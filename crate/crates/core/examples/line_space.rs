//! Parallel lines: flat strip width against the distance in the class space.

use cat0_classify::group::GroupSpec;
use cat0_classify::lines::{flat_strip_distance, parallel_class, Line};
use cat0_classify::rational::{fmt_q, q, qi};

fn main() {
    let g = GroupSpec::preset("p3", 6).unwrap();
    let dir = [qi(1), qi(1)];
    let a = Line::through(&g.space, &[qi(0), qi(0)], &dir).unwrap();
    let b = Line::through(&g.space, &[q(3, 2), q(-1, 3)], &dir).unwrap();
    let strip = flat_strip_distance(&g.space, &a, &b).unwrap().expect("parallel");
    let class = parallel_class(&g.space, &a);
    let via = class.model().dist2(&class.point_of(&a).unwrap(), &class.point_of(&b).unwrap()).unwrap();
    println!("class {}: {a} and {b}", class.label());
    println!("strip width^2 {}  class distance^2 {}", fmt_q(&strip.squared), fmt_q(&via));

    let c = Line::through(&g.space, &[qi(0), qi(0)], &[qi(1), qi(0)]).unwrap();
    println!("{a} vs {c}: {:?}", flat_strip_distance(&g.space, &a, &c).unwrap());
}
