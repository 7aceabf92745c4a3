//! Acceptance run: one PASS/FAIL line per criterion, with the time budget
//! each one must meet. Exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cat0_classify::classify::{
    build_efbc, build_evc, build_u, default_battery, verify, BuildConfig, Construction, Row, RowStatus, Target,
    Verification,
};
use cat0_classify::group::classify::is_axis;
use cat0_classify::group::{classify, enumerate_elements, GroupSpec, IsometryClass};
use cat0_classify::homology::{analyze_simplicial, full_simplex, projective_plane, simplex_boundary, SimplicialComplex};
use cat0_classify::lines::{choose_axes, enumerate_axes, flat_strip_distance, parallel_class, well_behaved_check, AxesChoice, AxesKind, Line};
use cat0_classify::model::{ModelSpace, TreeAutomorphism, TreePoint, TreeSpace};
use cat0_classify::rational::{q, qi, Q};
use cat0_classify::report::{run, Command, Outcome, RunConfig};

const PLANAR: [&str; 5] = ["p1", "p2", "pm", "pg", "pmm"];
const SECS: fn(u64) -> Duration = Duration::from_secs;

type Outcome1 = Result<String, String>;

struct Sheet {
    failed: Vec<u32>,
    lines: BTreeMap<u32, String>,
}

impl Sheet {
    fn record(&mut self, n: u32, name: &str, budget: Duration, f: impl FnOnce() -> Outcome1) {
        let t = Instant::now();
        let out = f();
        let took = t.elapsed();
        let out = match out {
            Ok(detail) if took > budget => Err(format!("{detail}; over budget")),
            o => o,
        };
        let (tag, detail) = match &out {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        let line = format!("criterion {n:>2} {tag} {name}: {detail} [{:.2}s, budget {}s]", took.as_secs_f64(), budget.as_secs());
        eprintln!("{line}");
        self.lines.insert(n, line);
        if out.is_err() {
            self.failed.push(n);
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn crit1() -> Outcome1 {
    let d = 12;
    let t = TreeSpace::new(d, true);
    let root = TreePoint::root();
    let boundary = 1u64 << t.addr_bits(t.boundary_level());
    for a in 0..boundary {
        let dist = t.distance(&root, &t.boundary_point(a));
        ensure(dist == qi(1), || format!("boundary point {a} at distance {dist}"))?;
    }
    for n in 1..=d {
        ensure(t.edge_weight(n) == q(1, 1 << n), || format!("edge weight into level {n}"))?;
    }
    let phi = TreeAutomorphism::Odometer(1);
    for n in 0..=10 {
        let start = TreePoint::node(n, 0);
        let mut p = phi.apply(&t, &start);
        let mut size = 1u64;
        while p != start {
            p = phi.apply(&t, &p);
            size += 1;
        }
        ensure(size == 1 << n, || format!("orbit of level {n} has size {size}"))?;
    }
    Ok(format!("{boundary} boundary points at distance 1, weights 2^-n to level {d}, orbits 2^n to level 10"))
}

fn crit2() -> Outcome1 {
    let d = 6;
    let g = GroupSpec::preset("tree-odometer", d).map_err(|e| e.to_string())?;
    let full = enumerate_axes(&g, &qi(1 << d)).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let wb = well_behaved_check(&full, &g, 64, &mut rng).map_err(|e| e.to_string())?;
    ensure(!wb.closed_at_scale && !wb.evidence.is_empty(), || format!("enumerated axes reported {wb:?}"))?;
    let root = choose_axes(&full, AxesChoice::Root)?;
    let wr = well_behaved_check(&root, &g, 64, &mut rng).map_err(|e| e.to_string())?;
    ensure(wr.all(), || format!("root axes reported {wr:?}"))?;
    Ok(format!("enumerated: closed_at_scale=false ({}); root: all four flags true", wb.evidence[0]))
}

fn planar_config(name: &str, window: i64) -> BuildConfig {
    BuildConfig::new(GroupSpec::preset(name, 6).unwrap(), qi(window))
}

fn finite_rows_ok(v: &Verification) -> Result<(), String> {
    for r in &v.rows {
        let want = if r.tag.family.name() == "FIN" { "collapsible" } else { "empty" };
        ensure(r.status == RowStatus::Pass && r.observed == want, || format!("{}: {} ({})", r.subgroup, r.observed, r.reason))?;
    }
    Ok(())
}

/// Every restriction map attached to the rows, as (count, failures).
fn restriction_tally(rows: &[Row]) -> (usize, Vec<String>) {
    let mut n = 0;
    let mut bad = Vec::new();
    for r in rows {
        for s in &r.restrictions {
            n += 1;
            if !(s.passed && s.simplex_fibers == s.target_simplices && s.homology_agrees) {
                bad.push(format!("{} {} on {}", r.subgroup, s.factor, s.fixed_set));
            }
        }
    }
    (n, bad)
}

fn crit3_4(sheet: &mut Sheet, rows: &mut Vec<Row>) {
    let mut built = BTreeMap::new();
    sheet.record(3, "good cover axioms at R=3", SECS(60 * PLANAR.len() as u64), || {
        let mut out = Vec::new();
        for name in PLANAR {
            let t = Instant::now();
            let u = build_u(&planar_config(name, 3)).map_err(|e| format!("{name}: {e}"))?;
            let took = t.elapsed();
            ensure(u.check.passed(), || format!("{name}: {:?}", u.check))?;
            ensure(u.multiplicity <= 64, || format!("{name}: multiplicity {}", u.multiplicity))?;
            ensure(took < SECS(60), || format!("{name}: {:.1}s", took.as_secs_f64()))?;
            out.push(format!("{name} {} balls/{} elements/M={}", u.cover.len(), u.check.elements_checked, u.multiplicity));
            built.insert(name, u);
        }
        Ok(out.join(", "))
    });
    sheet.record(4, "E_FIN collapse certificates at R=3", SECS(120 * PLANAR.len() as u64), || {
        ensure(built.len() == PLANAR.len(), || "covers missing".into())?;
        let mut out = Vec::new();
        for (name, u) in std::mem::take(&mut built) {
            let t = Instant::now();
            ensure(u.analysis.collapsed_to_point, || format!("{name}: nerve not collapsed"))?;
            let g = GroupSpec::preset(name, 6).unwrap();
            let c = Construction::Fin { u };
            let v = verify(&g, &c, Target::Fin, &default_battery(&g), true);
            finite_rows_ok(&v).map_err(|e| format!("{name}: {e}"))?;
            ensure(t.elapsed() < SECS(120), || format!("{name}: over 120s"))?;
            out.push(format!("{name} {} rows", v.rows.len()));
            rows.extend(v.rows);
        }
        Ok(out.join(", "))
    });
}

fn crit6(rows: &mut Vec<Row>) -> Outcome1 {
    let mut out = Vec::new();
    for name in PLANAR {
        let t = Instant::now();
        let cfg = planar_config(name, 2);
        let c = build_evc(&cfg).map_err(|e| format!("{name}: {e}"))?;
        let v = verify(&cfg.group, &c, Target::Vc, &default_battery(&cfg.group), true);
        for r in &v.rows {
            let want = if r.tag.family.name() == "NOT_VC" { "empty" } else { "collapsible" };
            ensure(r.status == RowStatus::Pass && r.observed == want, || format!("{name} {}: {} ({})", r.subgroup, r.observed, r.reason))?;
            let j = r.join_identity.as_ref().ok_or_else(|| format!("{name} {}: no join identity", r.subgroup))?;
            ensure(j.holds, || format!("{name} {}: {j:?}", r.subgroup))?;
        }
        ensure(t.elapsed() < SECS(300), || format!("{name}: over 300s"))?;
        out.push(format!("{name} {} rows", v.rows.len()));
        rows.extend(v.rows);
    }
    Ok(out.join(", "))
}

fn crit7() -> Outcome1 {
    let mut out = Vec::new();
    for name in ["pmm", "pg"] {
        let mut cfg = planar_config(name, 2);
        cfg.sphere_dim = 3;
        let c = build_efbc(&cfg).map_err(|e| format!("{name}: {e}"))?;
        let k = c.k().expect("E_FBC construction");
        let qk = &k.quotient;
        ensure(qk.self_identified == 0 && qk.swap_overlaps == 0 && qk.sphere.antipodal_overlaps() == 0, || {
            format!("{name}: self-identified {}, swap overlaps {}", qk.self_identified, qk.swap_overlaps)
        })?;
        ensure(qk.two_preimages == 2 * qk.cell_count(), || format!("{name}: {} product cells for {} classes", qk.two_preimages, qk.cell_count()))?;
        let v = verify(&cfg.group, &c, Target::Fbc, &default_battery(&cfg.group), false);
        ensure(v.passed, || format!("{name}: verification failed"))?;
        let row = |s: &str| v.rows.iter().find(|r| r.subgroup == s);
        let glide = row("glide").ok_or_else(|| format!("{name}: no glide row"))?;
        let fk = glide.fix_k.as_ref().ok_or("glide row has no K data")?;
        ensure(fk.first().map_or(false, |&n| n > 0), || format!("{name}: Fix_K(glide) empty"))?;
        ensure(matches!(glide.observed.as_str(), "collapsible" | "acyclic-to-degree-2"), || format!("{name}: glide {}", glide.observed))?;
        let audit = glide.audit_k.as_ref().ok_or("no K audit")?;
        ensure(audit.passed(), || format!("{name}: {audit:?}"))?;
        let mut msg = format!("{name}: K cells {:?}, Fix_K(glide) {:?} {}", qk.counts(), fk, glide.observed);
        if let Some(d) = row("Dinf") {
            ensure(d.fix_k.as_ref().map_or(false, |f| f.is_empty()) && d.observed == "empty", || format!("{name}: Fix_K(Dinf) {:?}", d.fix_k))?;
            msg.push_str(", Fix_K(Dinf) empty");
        } else if name == "pmm" {
            return Err("pmm battery has no Dinf row".into());
        }
        out.push(msg);
    }
    Ok(out.join("; "))
}

fn random_tree_point(t: &TreeSpace, rng: &mut ChaCha8Rng) -> TreePoint {
    let level = rng.gen_range(0..=t.depth);
    let addr = if level == 0 { 0 } else { rng.gen_range(0..1u64 << level) };
    let up = if level == 0 { qi(0) } else { t.edge_weight(level) * q(rng.gen_range(0..16), 16) };
    TreePoint { level, addr, up }
}

fn crit8() -> Outcome1 {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut classes = 0;
    let mut pairs = 0;
    for name in ["p1", "p2", "pm", "pg", "pmm", "p3", "p4", "p6"] {
        let g = GroupSpec::preset(name, 6).unwrap();
        let axes = enumerate_axes(&g, &qi(2)).map_err(|e| e.to_string())?;
        let AxesKind::Euclidean { classes: cs } = &axes.kind else { unreachable!() };
        for c in cs {
            classes += 1;
            let dir: Vec<Q> = c.dir().iter().map(|&x| qi(x)).collect();
            for _ in 0..1000 {
                let mut pt = || -> Vec<Q> { (0..2).map(|_| q(rng.gen_range(-400..=400), rng.gen_range(1..=12))).collect() };
                let a = Line::through(&g.space, &pt(), &dir).unwrap();
                let b = Line::through(&g.space, &pt(), &dir).unwrap();
                let cls = parallel_class(&g.space, &a);
                let via = cls.model().dist2(&cls.point_of(&a).unwrap(), &cls.point_of(&b).unwrap()).unwrap();
                let strip = flat_strip_distance(&g.space, &a, &b).unwrap().ok_or("parallel lines reported non-parallel")?;
                ensure(strip.squared == via, || format!("{name} {:?}: {} vs {}", c.dir(), strip.squared, via))?;
                pairs += 1;
            }
        }
    }
    let tg = GroupSpec::preset("tree-odometer", 8).unwrap();
    let ModelSpace::TreeLine(t) = &tg.space else { unreachable!() };
    classes += 1;
    for _ in 0..1000 {
        let (x, y) = (random_tree_point(t, &mut rng), random_tree_point(t, &mut rng));
        let (a, b) = (Line::Vertical(x.clone()), Line::Vertical(y.clone()));
        let cls = parallel_class(&tg.space, &a);
        let via = cls.model().dist2(&cls.point_of(&a).unwrap(), &cls.point_of(&b).unwrap()).unwrap();
        let strip = flat_strip_distance(&tg.space, &a, &b).unwrap().unwrap();
        ensure(strip.squared == via, || format!("tree {x:?} {y:?}"))?;
        pairs += 1;
    }

    let mut conj = 0;
    for name in PLANAR {
        let g = GroupSpec::preset(name, 6).unwrap();
        let els = enumerate_elements(&g, &qi(3), &g.space.origin()).map_err(|e| e.to_string())?;
        let hyperbolic: Vec<_> = els.iter().filter(|e| classify(&g, e).map_or(false, |c| c.is_hyperbolic())).collect();
        for _ in 0..100 {
            let x = hyperbolic[rng.gen_range(0..hyperbolic.len())];
            let h = &els[rng.gen_range(0..els.len())];
            let IsometryClass::Hyperbolic { length, axis } = classify(&g, x).unwrap() else { unreachable!() };
            let y = x.conjugate(&g.space, h);
            let moved = axis.map(&g.space, h);
            ensure(is_axis(&g.space, &y, &moved), || format!("{name}: h{axis} is not an axis of h x h^-1"))?;
            ensure(classify(&g, &y).unwrap().translation_length2() == length.squared, || format!("{name}: translation length changed"))?;
            conj += 1;
        }
    }
    Ok(format!("{pairs} strip/class pairs over {classes} classes, {conj} conjugation pairs"))
}

fn reduced_euler(c: &SimplicialComplex) -> Option<i64> {
    let h = analyze_simplicial(c).homology;
    if h.empty {
        return None;
    }
    Some(1 + h.betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum::<i64>())
}

fn crit9() -> Outcome1 {
    let h = analyze_simplicial(&full_simplex(4)).homology;
    ensure(h.is_acyclic(), || format!("full simplex: {}", h.describe()))?;
    let h = analyze_simplicial(&simplex_boundary(2)).homology;
    ensure(h.betti == vec![0, 1] && h.torsion.iter().all(Vec::is_empty), || format!("hollow triangle: {}", h.describe()))?;
    let h = analyze_simplicial(&projective_plane()).homology;
    ensure(h.betti.iter().all(|&b| b == 0) && h.torsion.get(1) == Some(&vec!["2".to_string()]), || format!("projective plane: {}", h.describe()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..100 {
        let n = rng.gen_range(3..=8u32);
        let faces: Vec<Vec<u32>> = (0..rng.gen_range(1..=10))
            .map(|_| {
                let mut s: Vec<u32> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
                if s.is_empty() {
                    s.push(rng.gen_range(0..n));
                }
                s
            })
            .collect();
        let c = SimplicialComplex::from_simplices((0..n).map(|v| v.to_string()).collect(), faces);
        let chi = c.euler_characteristic();
        let from_h = reduced_euler(&c);
        ensure(from_h == Some(chi), || format!("random complex {i}: chi {chi}, homology gives {from_h:?}"))?;
    }
    Ok("full simplex acyclic, hollow triangle b1=1, RP2 torsion Z/2 in degree 1, 100 Euler checks".into())
}

fn read_all(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

fn crit10() -> Outcome1 {
    let runs: [(&str, Command, &[(&str, &str)]); 6] = [
        ("build-efin", Command::BuildEfin, &[("group", "p2"), ("window", "2")]),
        ("build-evc", Command::BuildEvc, &[("group", "pm"), ("window", "2")]),
        ("build-efbc", Command::BuildEfbc, &[("group", "pmm"), ("window", "2")]),
        ("axes", Command::Axes, &[("group", "tree-odometer"), ("depth", "6"), ("axes-bound", "64")]),
        ("axes root", Command::Axes, &[("group", "tree-odometer"), ("depth", "6"), ("axes-bound", "64"), ("axes-choice", "root")]),
        ("plot", Command::Plot, &[("group", "pmm"), ("window", "2")]),
    ];
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    for (i, (label, cmd, settings)) in runs.iter().enumerate() {
        let mut outs = Vec::new();
        for rep in 0..2 {
            let mut cfg = RunConfig::default();
            for (k, v) in settings.iter() {
                cfg.set(k, v).unwrap();
            }
            cfg.out = tmp.path().join(format!("{i}-{rep}"));
            let r = run(&cfg, cmd);
            ensure(r.report.outcome == Outcome::Pass, || format!("{label}: {:?} {:?}", r.report.outcome, r.report.reason))?;
            outs.push(read_all(&cfg.out));
        }
        ensure(outs[0] == outs[1], || format!("{label}: outputs differ"))?;
        files += outs[0].len();
    }
    let again = crit8().and_then(|a| crit9().map(|b| a + &b));
    ensure(again == crit8().and_then(|a| crit9().map(|b| a + &b)), || "seeded checks differ between runs".into())?;
    Ok(format!("{} pipelines x2, {files} files byte-identical", runs.len()))
}

fn main() {
    let mut sheet = Sheet { failed: Vec::new(), lines: BTreeMap::new() };
    let mut rows = Vec::new();
    sheet.record(1, "tree metrics at D=12", SECS(1), crit1);
    sheet.record(2, "axis space closure at scale", SECS(5), crit2);
    crit3_4(&mut sheet, &mut rows);
    sheet.record(6, "E_VC certification at R=2", SECS(300 * PLANAR.len() as u64), || crit6(&mut rows));
    sheet.record(5, "restriction fibers", SECS(1), || {
        let (n, bad) = restriction_tally(&rows);
        ensure(n > 0 && bad.is_empty(), || format!("{n} maps, failing: {}", bad.join(", ")))?;
        Ok(format!("{n} restriction maps, all fibers simplices, homology agrees"))
    });
    sheet.record(7, "E_FBC separation with N=3", SECS(300), crit7);
    sheet.record(8, "line space isometry", SECS(120), crit8);
    sheet.record(9, "homology self-test", SECS(30), crit9);
    sheet.record(10, "determinism", SECS(600), crit10);
    println!();
    for line in sheet.lines.values() {
        println!("{line}");
    }
    if sheet.failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {:?}", sheet.failed);
        std::process::exit(1);
    }
}
