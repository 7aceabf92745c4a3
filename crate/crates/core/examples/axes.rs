//! Axes of a wallpaper group and of the tree-line group, with the
//! well-behavedness flags.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cat0_classify::group::GroupSpec;
use cat0_classify::lines::{choose_axes, enumerate_axes, well_behaved_check, AxesChoice, AxesKind};
use cat0_classify::rational::qi;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);

    let g = GroupSpec::preset("p4", 6).unwrap();
    let axes = enumerate_axes(&g, &qi(2)).unwrap();
    if let AxesKind::Euclidean { classes } = &axes.kind {
        for c in classes {
            println!("p4 class {:?}: {} observed axes", c.dir(), c.observed.len());
        }
    }
    let wb = well_behaved_check(&axes, &g, 32, &mut rng).unwrap();
    println!("p4 well behaved: {}", wb.all());

    let t = GroupSpec::preset("tree-odometer", 6).unwrap();
    let full = enumerate_axes(&t, &qi(64)).unwrap();
    for (name, a) in [("enumerated", full.clone()), ("root", choose_axes(&full, AxesChoice::Root).unwrap())] {
        let wb = well_behaved_check(&a, &t, 32, &mut rng).unwrap();
        println!("tree {name}: levels {:?}, flags {:?}", a.tree_levels(), wb.first_failure().unwrap_or("all hold"));
        for e in &wb.evidence {
            println!("  {e}");
        }
    }
}
