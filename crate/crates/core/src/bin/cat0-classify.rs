use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cat0_classify::classify::Target;
use cat0_classify::report::{run, Command, RunConfig};

#[derive(Parser)]
#[command(name = "cat0-classify", version, about = "Equivariant nerves and classifying complexes for groups acting on CAT(0) model spaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Nerve of a good cover of the window, checked against the finite subgroups.
    BuildEfin(Common),
    /// Join of the window nerve with the nerve of the axes cover.
    BuildEvc(Common),
    /// Join of the window nerve with the quotient complex K.
    BuildEfbc(Common),
    /// Enumerate axes and run the well-behavedness checks.
    Axes(Common),
    /// Re-check a written nerve or join file.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        complex: PathBuf,
        /// fin, vc or fbc
        #[arg(long)]
        family: String,
    },
    /// Draw the window, cover and axes of a planar group as SVG.
    Plot(Common),
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` file applied before the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    group: Option<String>,
    #[arg(short = 'R', long = "window", allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    axes_bound: Option<String>,
    #[arg(long)]
    depth: Option<String>,
    #[arg(long)]
    sphere_dim: Option<String>,
    /// full or root
    #[arg(long)]
    axes_choice: Option<String>,
    /// `default` or a comma-separated list of subgroup names
    #[arg(long)]
    battery: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

fn config(c: &Common) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &c.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        cfg.apply_file(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let flags = [
        ("group", &c.group),
        ("window", &c.window),
        ("axes-bound", &c.axes_bound),
        ("depth", &c.depth),
        ("sphere-dim", &c.sphere_dim),
        ("axes-choice", &c.axes_choice),
        ("battery", &c.battery),
        ("out", &c.out),
        ("seed", &c.seed),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, v).map_err(|e| e.to_string())?;
        }
    }
    Ok(cfg)
}

fn threads() -> Result<(), String> {
    let Ok(v) = std::env::var("CAT0_CLASSIFY_THREADS") else { return Ok(()) };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or(format!("CAT0_CLASSIFY_THREADS must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, cmd) = match &cli.command {
        Cmd::BuildEfin(c) => (c, Ok(Command::BuildEfin)),
        Cmd::BuildEvc(c) => (c, Ok(Command::BuildEvc)),
        Cmd::BuildEfbc(c) => (c, Ok(Command::BuildEfbc)),
        Cmd::Axes(c) => (c, Ok(Command::Axes)),
        Cmd::Plot(c) => (c, Ok(Command::Plot)),
        Cmd::Verify { common, complex, family } => {
            (common, family.parse::<Target>().map(|family| Command::Verify { complex: complex.clone(), family }))
        }
    };
    let prepared = threads().and_then(|_| Ok((config(common)?, cmd?)));
    let (cfg, cmd) = match prepared {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = run(&cfg, &cmd);
    let r = &result.report;
    if let Some(v) = &r.verification {
        for row in &v.rows {
            println!("{:<12} {:<16} {:<22} {:<24} {:?}", row.subgroup, row.tag.family.name(), row.observed, row.certificate, row.status);
        }
    }
    match &r.reason {
        Some(reason) => println!("{}: {:?}: {reason}", cmd.name(), r.outcome),
        None => println!("{}: {:?}", cmd.name(), r.outcome),
    }
    println!("report: {}", cfg.out.join("report.json").display());
    ExitCode::from(result.exit_code as u8)
}
