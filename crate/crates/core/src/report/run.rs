use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::classify::{
    audit_construction, build_efbc, build_efin, build_evc, build_u, build_v, summarize, verify, BuildError, Construction, ConstructionSummary,
    EquivarianceAudit, Target, UPart, VPart, Verification,
};
use crate::covers::{parse_complex, write_complex};
use crate::homology::{analyze_simplicial, Simplex, SimplicialComplex};
use crate::lines::{enumerate_axes, well_behaved_check, AxesKind, AxesSpace, WellBehaved};

use super::config::{ConfigEcho, ConfigError, RunConfig};
use super::svg::{axes_near_origin, render, FigureCounts};

pub const SCHEMA: &str = "cat0-classify-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    VerificationFailed,
    InvalidConfig,
    Refused,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::VerificationFailed => 1,
            Outcome::InvalidConfig => 2,
            Outcome::Refused => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxesSummary {
    pub classes: Vec<AxesClassSummary>,
    pub tree_levels: Option<u32>,
    pub well_behaved: WellBehaved,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxesClassSummary {
    pub direction: Vec<i64>,
    pub observed_axes: usize,
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub config: ConfigEcho,
    pub outcome: Outcome,
    pub reason: Option<String>,
    pub construction: Option<ConstructionSummary>,
    pub axes: Option<AxesSummary>,
    pub verification: Option<Verification>,
    pub audit: Option<EquivarianceAudit>,
    pub figure: Option<FigureSummary>,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureSummary {
    pub balls: usize,
    pub axis_lines: usize,
    pub axis_classes: usize,
}

impl From<FigureCounts> for FigureSummary {
    fn from(c: FigureCounts) -> Self {
        FigureSummary { balls: c.balls, axis_lines: c.axis_lines, axis_classes: c.axis_classes }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    BuildEfin,
    BuildEvc,
    BuildEfbc,
    Axes,
    Verify { complex: PathBuf, family: Target },
    Plot,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BuildEfin => "build-efin",
            Command::BuildEvc => "build-evc",
            Command::BuildEfbc => "build-efbc",
            Command::Axes => "axes",
            Command::Verify { .. } => "verify",
            Command::Plot => "plot",
        }
    }
}

/// Everything a run produced.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub report: Report,
    pub exit_code: i32,
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    report: Report,
}

impl Ctx<'_> {
    fn header(&self, kind: &str) -> BTreeMap<String, String> {
        let mut h = self.cfg.echo();
        h.insert("kind".into(), kind.into());
        h.insert("schema".into(), format!("{SCHEMA}/{SCHEMA_VERSION}"));
        h
    }

    fn write(&mut self, name: &str, text: &str) -> std::io::Result<()> {
        fs::write(self.cfg.out.join(name), text)?;
        self.report.files.push(name.to_string());
        Ok(())
    }

    fn finish(mut self, outcome: Outcome, reason: Option<String>) -> RunResult {
        self.report.outcome = outcome;
        self.report.reason = reason;
        let json = serde_json::to_string_pretty(&self.report).expect("report serializes") + "\n";
        if self.cfg.out.is_dir() {
            let _ = fs::write(self.cfg.out.join("report.json"), json);
        }
        RunResult { exit_code: outcome.exit_code(), report: self.report }
    }
}

fn new_report(cfg: &RunConfig, cmd: &Command) -> Report {
    let family = match cmd {
        Command::Verify { family, .. } => Some(*family),
        Command::BuildEfin => Some(Target::Fin),
        Command::BuildEvc => Some(Target::Vc),
        Command::BuildEfbc => Some(Target::Fbc),
        _ => None,
    };
    Report {
        schema: SCHEMA,
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        config: ConfigEcho { command: cmd.name().to_string(), settings: cfg.echo(), family },
        outcome: Outcome::Pass,
        reason: None,
        construction: None,
        axes: None,
        verification: None,
        audit: None,
        figure: None,
        files: Vec::new(),
    }
}

/// The join of two complexes as a text complex with `U|` and `V|` labels.
pub fn join_text(u: &SimplicialComplex, v: &SimplicialComplex, header: &BTreeMap<String, String>) -> String {
    let join = crate::classify::JoinComplex::new(u.clone(), v.clone());
    let mut facets = join.facets();
    facets.sort();
    write_with_facets(&join.labels(), &facets, header)
}

fn write_with_facets(labels: &[String], facets: &[Simplex], header: &BTreeMap<String, String>) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    for (k, v) in header {
        let _ = writeln!(out, "# {k} {v}");
    }
    for (i, l) in labels.iter().enumerate() {
        let _ = writeln!(out, "v {i} {l}");
    }
    for f in facets {
        let ids: Vec<String> = f.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "s {}", ids.join(" "));
    }
    out
}

fn axes_summary(axes: &AxesSpace, wb: WellBehaved) -> AxesSummary {
    let classes = match &axes.kind {
        AxesKind::Euclidean { classes } => classes
            .iter()
            .map(|c| AxesClassSummary {
                direction: c.dir().to_vec(),
                observed_axes: c.observed.len(),
                witnesses: c.witnesses.iter().take(4).map(|w| w.to_string()).collect(),
            })
            .collect(),
        AxesKind::Tree { .. } => Vec::new(),
    };
    AxesSummary { classes, tree_levels: axes.tree_levels(), well_behaved: wb }
}

fn refused(e: &BuildError) -> Step {
    let msg = match e {
        BuildError::Refused(m) => m.clone(),
        other => other.to_string(),
    };
    Ok((Outcome::Refused, Some(msg)))
}

/// Runs one command. Files go to `cfg.out`; the report is also returned.
pub fn run(cfg: &RunConfig, cmd: &Command) -> RunResult {
    let mut ctx = Ctx { cfg, report: new_report(cfg, cmd) };
    if let Err(e) = fs::create_dir_all(&cfg.out) {
        return ctx.finish(Outcome::InvalidConfig, Some(format!("cannot create {}: {e}", cfg.out.display())));
    }
    if let Err(e) = cfg.validate() {
        return ctx.finish(Outcome::InvalidConfig, Some(e.to_string()));
    }
    let result = match cmd {
        Command::BuildEfin | Command::BuildEvc | Command::BuildEfbc => run_build(&mut ctx, cmd),
        Command::Axes => run_axes(&mut ctx),
        Command::Verify { complex, family } => run_verify(&mut ctx, complex, *family),
        Command::Plot => run_plot(&mut ctx),
    };
    match result {
        Ok((outcome, reason)) => ctx.finish(outcome, reason),
        Err(e) => ctx.finish(Outcome::InvalidConfig, Some(e)),
    }
}

type Step = Result<(Outcome, Option<String>), String>;

fn io(e: std::io::Error) -> String {
    format!("cannot write output: {e}")
}

fn run_build(ctx: &mut Ctx, cmd: &Command) -> Step {
    let bc = ctx.cfg.build_config().map_err(|e| e.to_string())?;
    let group = bc.group.clone();
    let battery = ctx.cfg.subgroups(&group).map_err(|e| e.to_string())?;
    let (built, target) = match cmd {
        Command::BuildEfin => (build_efin(&bc), Target::Fin),
        Command::BuildEvc => (build_evc(&bc), Target::Vc),
        _ => (build_efbc(&bc), Target::Fbc),
    };
    let c = match built {
        Ok(c) => c,
        Err(e) => return refused(&e),
    };
    ctx.report.construction = Some(summarize(&c));
    if let Some(v) = c.v() {
        ctx.report.axes = Some(axes_summary(&v.axes, v.well_behaved.clone()));
    }
    let u = c.u();
    ctx.write("nerve_u.cx", &write_complex(&u.nerve, &ctx.header("nerve-u"))).map_err(io)?;
    if let Some(v) = c.v() {
        ctx.write("nerve_v.cx", &write_complex(&v.nerve, &ctx.header("nerve-v"))).map_err(io)?;
    }
    match &c {
        Construction::Vc { u, v } => ctx.write("join_uv.cx", &join_text(&u.nerve, &v.nerve, &ctx.header("join-uv"))).map_err(io)?,
        Construction::Fbc { k, .. } => ctx.write("quotient_k.cx", &k.quotient.to_text(&ctx.header("quotient-k"))).map_err(io)?,
        Construction::Fin { .. } => {}
    }
    let verification = verify(&group, &c, target, &battery, true);
    let audit = audit_construction(&group, &c, &bc.window).map_err(|e| e.to_string())?;
    let structural = structural_failures(&c);
    let ok = verification.passed && audit.passed() && structural.is_empty();
    let reason = if ok {
        None
    } else if !structural.is_empty() {
        Some(structural.join("; "))
    } else if !audit.passed() {
        Some("equivariance audit failed".into())
    } else {
        let failing: Vec<String> = verification.rows.iter().filter(|r| r.status != crate::classify::RowStatus::Pass).map(|r| format!("{}: {}", r.subgroup, r.reason)).collect();
        Some(failing.join("; "))
    };
    ctx.report.verification = Some(verification);
    ctx.report.audit = Some(audit);
    Ok((if ok { Outcome::Pass } else { Outcome::VerificationFailed }, reason))
}

fn structural_failures(c: &Construction) -> Vec<String> {
    let mut out = Vec::new();
    let u = c.u();
    if !u.check.passed() {
        out.push("the cover of X is not good".into());
    }
    if let Some(v) = c.v() {
        if !v.class_checks.iter().all(|x| x.passed()) {
            out.push("a class cover of the axes is not good".into());
        }
    }
    if let Some(k) = c.k() {
        if k.quotient.two_preimages != 2 * k.quotient.cell_count() || k.quotient.self_identified != 0 {
            out.push("the identification defining K is not free".into());
        }
        if k.quotient.sphere.antipodal_overlaps() != 0 {
            out.push("the antipodal map meets a simplex".into());
        }
    }
    out
}

fn run_axes(ctx: &mut Ctx) -> Step {
    let bc = ctx.cfg.build_config().map_err(|e| e.to_string())?;
    let full = match enumerate_axes(&bc.group, &bc.axes_bound) {
        Ok(a) => a,
        Err(e) => return Ok((Outcome::Refused, Some(e.to_string()))),
    };
    let axes = crate::lines::choose_axes(&full, bc.axes_choice).map_err(|e| e.to_string())?;
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(bc.seed);
    let wb = match well_behaved_check(&axes, &bc.group, bc.samples, &mut rng) {
        Ok(w) => w,
        Err(e) => return Ok((Outcome::Refused, Some(e.to_string()))),
    };
    let mut text = String::new();
    for (k, v) in ctx.header("axes") {
        text.push_str(&format!("# {k} {v}\n"));
    }
    match &axes.kind {
        AxesKind::Euclidean { classes } => {
            for c in classes {
                for l in &c.observed {
                    text.push_str(&format!("a {:?} {l}\n", c.dir()));
                }
            }
        }
        AxesKind::Tree { max_level, .. } => {
            text.push_str(&format!("t levels {}\n", max_level.map_or("none".to_string(), |m| m.to_string())));
        }
    }
    ctx.write("axes.txt", &text).map_err(io)?;
    ctx.report.axes = Some(axes_summary(&axes, wb));
    Ok((Outcome::Pass, None))
}

fn run_plot(ctx: &mut Ctx) -> Step {
    let bc = ctx.cfg.build_config().map_err(|e| e.to_string())?;
    if !matches!(&bc.group.space, crate::model::ModelSpace::Euclidean(e) if e.dim() == 2) {
        return Ok((Outcome::Refused, Some("figures are only drawn for planar groups".into())));
    }
    let u = match build_u(&bc) {
        Ok(u) => u,
        Err(e) => return refused(&e),
    };
    let axes = enumerate_axes(&bc.group, &bc.axes_bound).map_err(|e| e.to_string())?;
    let near = axes_near_origin(&bc.group.space, &axes, &bc.window);
    let (svg, counts) = render(&bc.group.space, &bc.window, Some(&u.cover), Some(&near)).expect("planar");
    ctx.write("figure.svg", &svg).map_err(io)?;
    ctx.report.figure = Some(counts.into());
    ctx.report.construction = Some(summarize(&Construction::Fin { u }));
    Ok((Outcome::Pass, None))
}

/// Maps the file's vertices onto the rebuilt vertex ids through their labels.
fn relabel(file: &SimplicialComplex, ids: &[u32], rebuilt_labels: &[String]) -> Result<SimplicialComplex, String> {
    let index: HashMap<&str, u32> = rebuilt_labels.iter().enumerate().map(|(i, l)| (l.as_str(), i as u32)).collect();
    let mut map: HashMap<u32, u32> = HashMap::new();
    for &v in ids {
        let l = &file.labels[v as usize];
        let stripped = l.split_once('|').map_or(l.as_str(), |(_, r)| r);
        let r = *index.get(stripped).ok_or_else(|| format!("vertex {v} ({l}) is not a ball of the rebuilt cover"))?;
        map.insert(v, r);
    }
    if map.len() != rebuilt_labels.len() {
        return Err(format!("the file has {} vertices where the rebuilt cover has {}", map.len(), rebuilt_labels.len()));
    }
    let part: BTreeSet<u32> = ids.iter().copied().collect();
    let facets: Vec<Simplex> = file
        .full_subcomplex(&part)
        .facets()
        .into_iter()
        .map(|f| {
            let mut g: Simplex = f.iter().map(|v| map[v]).collect();
            g.sort_unstable();
            g
        })
        .collect();
    Ok(SimplicialComplex::from_simplices(rebuilt_labels.to_vec(), facets))
}

fn run_verify(ctx: &mut Ctx, path: &Path, family: Target) -> Step {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let (header, file) = parse_complex(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let kind = header.get("kind").cloned().unwrap_or_default();
    let fcfg = RunConfig::from_header(&header).map_err(|e: ConfigError| format!("{}: {e}", path.display()))?;
    let mut bc = fcfg.build_config().map_err(|e| e.to_string())?;
    bc.seed = fcfg.seed;
    ctx.report.config.settings = fcfg.echo();
    ctx.report.config.settings.insert("battery".into(), ctx.cfg.battery.clone());
    let group = bc.group.clone();
    let battery = ctx.cfg.subgroups(&group).map_err(|e| e.to_string())?;
    let all: Vec<u32> = (0..file.vertex_count() as u32).collect();
    let c = match kind.as_str() {
        "nerve-u" => {
            let u = build_u(&bc).map_err(|e| e.to_string())?;
            let labels = u.nerve.labels.clone();
            match relabel(&file, &all, &labels) {
                Ok(n) => Construction::Fin { u: with_nerve_u(u, n) },
                Err(m) => return Ok((Outcome::VerificationFailed, Some(m))),
            }
        }
        "join-uv" => {
            let u = build_u(&bc).map_err(|e| e.to_string())?;
            let v = match build_v(&bc) {
                Ok(v) => v,
                Err(e) => return refused(&e),
            };
            let (ul, vl): (Vec<u32>, Vec<u32>) = all.iter().partition(|&&i| file.labels[i as usize].starts_with("U|"));
            let left = match relabel(&file, &ul, &u.nerve.labels) {
                Ok(n) => n,
                Err(m) => return Ok((Outcome::VerificationFailed, Some(m))),
            };
            let right = match relabel(&file, &vl, &v.nerve.labels) {
                Ok(n) => n,
                Err(m) => return Ok((Outcome::VerificationFailed, Some(m))),
            };
            if let Some(m) = join_structure(&file, &ul, &vl) {
                return Ok((Outcome::VerificationFailed, Some(m)));
            }
            Construction::Vc { u: with_nerve_u(u, left), v: with_nerve_v(v, right) }
        }
        other => return Err(format!("cannot verify a complex of kind `{other}` (expected nerve-u or join-uv)")),
    };
    ctx.report.construction = Some(summarize(&c));
    let verification = verify(&group, &c, family, &battery, false);
    let ok = verification.passed;
    let reason = (!ok).then(|| {
        verification
            .rows
            .iter()
            .filter(|r| r.status != crate::classify::RowStatus::Pass)
            .map(|r| format!("{}: {}", r.subgroup, r.reason))
            .collect::<Vec<_>>()
            .join("; ")
    });
    ctx.report.verification = Some(verification);
    Ok((if ok { Outcome::Pass } else { Outcome::VerificationFailed }, reason))
}

fn with_nerve_u(mut u: UPart, nerve: SimplicialComplex) -> UPart {
    u.analysis = analyze_simplicial(&nerve);
    u.nerve = nerve;
    u
}

fn with_nerve_v(mut v: VPart, nerve: SimplicialComplex) -> VPart {
    v.analysis = analyze_simplicial(&nerve);
    v.nerve = nerve;
    v
}

/// The maximal simplices of a join are exactly the joins of maximal simplices of its parts.
fn join_structure(file: &SimplicialComplex, left: &[u32], right: &[u32]) -> Option<String> {
    let l: BTreeSet<u32> = left.iter().copied().collect();
    let r: BTreeSet<u32> = right.iter().copied().collect();
    let lf = file.full_subcomplex(&l).facets();
    let rf = file.full_subcomplex(&r).facets();
    let expected: BTreeSet<Simplex> = if lf.is_empty() || rf.is_empty() {
        lf.into_iter().chain(rf).collect()
    } else {
        lf.iter()
            .flat_map(|s| {
                rf.iter().map(move |t| {
                    let mut x: Simplex = s.iter().chain(t).copied().collect();
                    x.sort_unstable();
                    x
                })
            })
            .collect()
    };
    let found: BTreeSet<Simplex> = file.facets().into_iter().collect();
    (expected != found).then(|| {
        let missing = expected.difference(&found).count();
        let extra = found.difference(&expected).count();
        format!("the complex is not the join of its U and V parts ({missing} joined simplices missing, {extra} unexpected)")
    })
}
