//! Driving the report pipeline from a config file: build, re-verify the
//! written nerve, and draw the figure.

use cat0_classify::classify::Target;
use cat0_classify::report::{run, Command, RunConfig};

fn main() {
    let dir = std::env::temp_dir().join("cat0-classify-report-example");
    let mut cfg = RunConfig::default();
    cfg.apply_file("group = pg\nwindow = 2\nbattery = default\n").unwrap();
    cfg.out = dir.clone();

    for cmd in [Command::BuildEfin, Command::Plot] {
        let r = run(&cfg, &cmd);
        println!("{}: {:?} (exit {}), files {:?}", cmd.name(), r.report.outcome, r.exit_code, r.report.files);
    }
    let check = Command::Verify { complex: dir.join("nerve_u.cx"), family: Target::Fin };
    let r = run(&cfg, &check);
    println!("verify: {:?} (exit {})", r.report.outcome, r.exit_code);
    println!("report written to {}", dir.join("report.json").display());
}
