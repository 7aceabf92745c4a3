//! Model for proper actions: the window nerve, checked on the battery.

use cat0_classify::classify::{build_efin, default_battery, verify, BuildConfig, Target};
use cat0_classify::group::GroupSpec;
use cat0_classify::rational::qi;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "p2".into());
    let cfg = BuildConfig::new(GroupSpec::preset(&name, 6).unwrap(), qi(2));
    let c = build_efin(&cfg).unwrap();
    let u = c.u();
    println!("{name}: nerve cells {:?}, collapsed {}", u.nerve.counts(), u.analysis.collapsed_to_point);
    let v = verify(&cfg.group, &c, Target::Fin, &default_battery(&cfg.group), true);
    for r in &v.rows {
        println!("{:<12} {:<16} {:<12} {:<10} {:?}", r.subgroup, r.tag.family.name(), r.observed, r.certificate, r.status);
    }
    println!("passed: {}", v.passed);
}
