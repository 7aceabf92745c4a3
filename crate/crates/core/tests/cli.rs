use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cat0-classify"))
}

fn exit(cmd: &mut Command) -> i32 {
    let out = cmd.output().unwrap();
    out.status.code().unwrap()
}

fn report(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn build_and_reverify_nerve() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("b");
    assert_eq!(exit(bin().args(["build-efin", "--group", "p2", "-R", "3/2", "--out"]).arg(&out)), 0);
    let r = report(&out);
    assert_eq!(r["schema"], "cat0-classify-report");
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["outcome"], "pass");

    let nerve = out.join("nerve_u.cx");
    let text = std::fs::read_to_string(&nerve).unwrap();
    assert!(text.starts_with("# "));
    assert!(text.lines().any(|l| l.starts_with("v ")) && text.lines().any(|l| l.starts_with("s ")));
    let v = tmp.path().join("v");
    assert_eq!(exit(bin().args(["verify", "--family", "fin", "--complex"]).arg(&nerve).arg("--out").arg(&v)), 0);

    // drop every maximal simplex: the fixed set of the trivial group is no longer contractible
    let top = text.lines().filter(|l| l.starts_with("s ")).map(|l| l.split(' ').count()).max().unwrap();
    let broken: String = text.lines().filter(|l| !(l.starts_with("s ") && l.split(' ').count() == top)).map(|l| format!("{l}\n")).collect();
    let bad = tmp.path().join("broken.cx");
    std::fs::write(&bad, broken).unwrap();
    assert_eq!(exit(bin().args(["verify", "--family", "fin", "--complex"]).arg(&bad).arg("--out").arg(&v)), 1);
    assert_eq!(report(&v)["outcome"], "verification-failed");
}

#[test]
fn invalid_configuration_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    assert_eq!(exit(bin().args(["build-efin", "-R", "-2", "--out"]).arg(&out)), 2);
    assert_eq!(report(&out)["outcome"], "invalid-config");
    assert_eq!(exit(bin().args(["build-efin", "--group", "p7", "--out"]).arg(&out)), 2);
    assert_eq!(exit(bin().args(["axes", "--axes-choice", "sideways", "--out"]).arg(&out)), 2);
    assert_eq!(exit(bin().args(["verify", "--family", "all", "--complex", "x.cx", "--out"]).arg(&out)), 2);
    assert_eq!(exit(bin().env("CAT0_CLASSIFY_THREADS", "zero").args(["axes", "--out"]).arg(&out)), 2);
}

#[test]
fn refused_constructions_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("t");
    let code = exit(bin().args(["build-evc", "--group", "tree-odometer", "--depth", "4", "--axes-bound", "16", "--out"]).arg(&out));
    assert_eq!(code, 3);
    let r = report(&out);
    assert_eq!(r["outcome"], "refused");
    assert!(r["reason"].as_str().unwrap().contains("closed_at_scale"));
    assert_eq!(exit(bin().args(["plot", "--group", "tree-odometer", "--depth", "3", "--out"]).arg(&out)), 3);
}

#[test]
fn config_file_and_thread_count() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(&cfg, "# axes of p4\ngroup = p4\naxes-bound = 1\n").unwrap();
    let out = tmp.path().join("a");
    let code = exit(bin().env("CAT0_CLASSIFY_THREADS", "2").args(["axes", "--config"]).arg(&cfg).arg("--out").arg(&out));
    assert_eq!(code, 0);
    let r = report(&out);
    assert_eq!(r["config"]["settings"]["group"], "p4");
    assert!(std::fs::read_to_string(out.join("axes.txt")).unwrap().lines().any(|l| l.starts_with("a ")));
}

#[test]
fn plots_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let mut svgs = Vec::new();
    for i in 0..2 {
        let out = tmp.path().join(i.to_string());
        assert_eq!(exit(bin().args(["plot", "--group", "p2", "-R", "3/2", "--seed", "3", "--out"]).arg(&out)), 0);
        svgs.push(std::fs::read(out.join("figure.svg")).unwrap());
    }
    assert_eq!(svgs[0], svgs[1]);
    assert!(String::from_utf8(svgs.remove(0)).unwrap().starts_with("<svg"));
}
