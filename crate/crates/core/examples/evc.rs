//! Model for virtually cyclic subgroups: join of the window nerve with the
//! nerve of the axes cover, with the fixed-set join identity per row.

use cat0_classify::classify::{build_evc, default_battery, verify, BuildConfig, Target};
use cat0_classify::group::GroupSpec;
use cat0_classify::rational::qi;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "pmm".into());
    let cfg = BuildConfig::new(GroupSpec::preset(&name, 6).unwrap(), qi(2));
    let c = build_evc(&cfg).unwrap();
    let v = c.v().unwrap();
    println!("{name}: {} axis classes, axes nerve cells {:?}", v.cover.classes.len(), v.nerve.counts());
    let ver = verify(&cfg.group, &c, Target::Vc, &default_battery(&cfg.group), false);
    for r in &ver.rows {
        let j = r.join_identity.as_ref().map(|j| j.holds);
        println!(
            "{:<12} {:<16} fix U {:?} fix V {:?} -> {} ({}), join identity {:?}",
            r.subgroup,
            r.tag.family.name(),
            r.fix_u,
            r.fix_v.clone().unwrap_or_default(),
            r.observed,
            r.certificate,
            j
        );
    }
    println!("passed: {}", ver.passed);
}
