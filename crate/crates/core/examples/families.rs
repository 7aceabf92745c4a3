//! Family tags of the battery subgroups of each preset.

use cat0_classify::classify::{classify_family, default_battery};
use cat0_classify::group::GroupSpec;

fn main() {
    for name in ["p1", "p2", "pm", "pg", "pmm", "p4", "p3", "p6", "tree-odometer"] {
        let g = GroupSpec::preset(name, 6).unwrap();
        for s in default_battery(&g) {
            let tag = classify_family(&g, &s.generators).unwrap();
            println!(
                "{name:<14} {:<12} {:<16} point group {} translation rank {}",
                s.name,
                tag.family.name(),
                tag.point_group_order,
                tag.translation_rank
            );
        }
    }
}
