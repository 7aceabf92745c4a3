//! Model for virtually cyclic subgroups acting by translations: the sheet
//! quotient K of the doubled axes nerve times a sphere.

use cat0_classify::classify::{build_efbc, default_battery, verify, BuildConfig, Target};
use cat0_classify::group::GroupSpec;
use cat0_classify::rational::qi;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "pmm".into());
    let mut cfg = BuildConfig::new(GroupSpec::preset(&name, 6).unwrap(), qi(2));
    cfg.sphere_dim = 3;
    let c = build_efbc(&cfg).unwrap();
    let k = c.k().unwrap();
    let qk = &k.quotient;
    println!(
        "{name}: K cells {:?}, self-identified {}, swap overlaps {}, homology {}",
        qk.counts(),
        qk.self_identified,
        qk.swap_overlaps,
        k.analysis.homology.describe()
    );
    let v = verify(&cfg.group, &c, Target::Fbc, &default_battery(&cfg.group), false);
    for r in &v.rows {
        println!("{:<12} {:<16} fix K {:?} -> {} ({}) {:?}", r.subgroup, r.tag.family.name(), r.fix_k.clone().unwrap_or_default(), r.observed, r.certificate, r.status);
    }
    println!("passed: {}", v.passed);
}
