use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use lyapoly::bounds::{
    analyze_stability, analyze_stabilizability, fibrillation_scan, Analysis, AnalysisConfig, AnalysisMode,
};
use lyapoly::family::{load_family, random_metzler, EntryLaw, MatrixFamily};
use lyapoly::polytope::BuildCaps;
use lyapoly::products::SearchStrategy;
use lyapoly::report::{render_boundary_csv, render_bounds, render_fibrillation, ReportFormat};

#[derive(Parser)]
#[command(name = "lyapoly", version, about = "Polytope bounds on Lyapunov exponents of linear switching systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound the Lyapunov exponent or the lower Lyapunov exponent of a family.
    Analyze(AnalyzeArgs),
    /// Write a seeded random family of Metzler matrices as family JSON.
    GenRandomMetzler(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Stability,
    Stabilizability,
    Fibrillation,
}

#[derive(Clone, Copy, ValueEnum)]
enum Search {
    Exhaustive,
    BranchBound,
    TwoBlockTemplate,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Markdown,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Law {
    Sign,
    Uniform,
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Family JSON: {"dim": d, "matrices": [[[row], ...], ...], "labels": [...]}.
    #[arg(long)]
    family: PathBuf,
    #[arg(long, value_enum, default_value = "stability")]
    mode: Mode,
    /// Dwell times, comma separated; fractions such as 1/16 are accepted.
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_tau)]
    tau: Vec<f64>,
    #[arg(long, default_value_t = 8)]
    max_word_len: usize,
    #[arg(long, default_value_t = 0.0)]
    nu: f64,
    /// Euler step of the alpha LPs.
    #[arg(long, default_value_t = lyapoly::lp::DEFAULT_DELTA)]
    delta: f64,
    /// Evaluate alpha at --delta only, without the delta/2 cross-check.
    #[arg(long)]
    no_delta_check: bool,
    #[arg(long, value_enum, default_value = "branch-bound")]
    search: Search,
    #[arg(long)]
    max_products: Option<usize>,
    #[arg(long)]
    max_vertices: Option<usize>,
    #[arg(long)]
    max_sweeps: Option<usize>,
    /// Keep redundant vertices.
    #[arg(long)]
    no_prune: bool,
    /// Use a symmetric polytope even for Metzler families.
    #[arg(long)]
    force_symmetric: bool,
    /// Directory for report files; the report always goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "markdown")]
    format: Format,
    /// Write each certificate polytope as JSON (needs --out).
    #[arg(long)]
    emit_polytope: bool,
    /// Write the boundary polyline of planar polytopes as CSV (needs --out).
    #[arg(long)]
    emit_boundary2d: bool,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 2)]
    count: usize,
    #[arg(long, value_enum, default_value = "sign")]
    law: Law,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_tau(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            let d: f64 = d.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            n / d
        }
        None => s.parse().map_err(|e| format!("{s}: {e}"))?,
    };
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("dwell time must be positive, got {s}"))
    }
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Markdown => ReportFormat::Markdown,
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

fn config(args: &AnalyzeArgs) -> AnalysisConfig {
    let defaults = AnalysisConfig::default();
    let mut caps = BuildCaps::default();
    if let Some(v) = args.max_vertices {
        caps.max_vertices = v;
    }
    if let Some(s) = args.max_sweeps {
        caps.max_sweeps = s;
    }
    AnalysisConfig {
        mode: match args.mode {
            Mode::Stability => AnalysisMode::Stability,
            Mode::Stabilizability => AnalysisMode::Stabilizability,
            Mode::Fibrillation => AnalysisMode::Fibrillation,
        },
        taus: args.tau.clone(),
        max_word_len: args.max_word_len,
        nu: args.nu,
        delta_lp: args.delta,
        delta_check: !args.no_delta_check,
        search: match args.search {
            Search::Exhaustive => SearchStrategy::Exhaustive,
            Search::BranchBound => SearchStrategy::BranchBound,
            Search::TwoBlockTemplate => SearchStrategy::TwoBlockTemplate,
        },
        max_products: args.max_products.unwrap_or(defaults.max_products),
        caps,
        force_symmetric: args.force_symmetric,
        prune: !args.no_prune,
        ..defaults
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Returns true when every row reached a conclusive verdict.
fn analyze(args: &AnalyzeArgs) -> Result<bool> {
    let family = load_family(&args.family).with_context(|| format!("loading {}", args.family.display()))?;
    let cfg = config(args);
    cfg.validate()?;
    let format = ReportFormat::from(args.format);
    if (args.emit_polytope || args.emit_boundary2d) && args.out.is_none() {
        bail!("--emit-polytope and --emit-boundary2d need --out");
    }
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }

    if let AnalysisMode::Fibrillation = cfg.mode {
        let report = fibrillation_scan(&family, &cfg).context("fibrillation scan")?;
        let text = render_fibrillation(&report, format);
        emit_report(args, &text, format)?;
        return Ok(true);
    }

    let mut taus = cfg.taus.clone();
    taus.sort_by(|a, b| b.total_cmp(a));
    taus.dedup();
    let runs: Vec<Analysis> = taus
        .par_iter()
        .map(|&tau| run_one(&family, tau, &cfg))
        .collect::<Result<_>>()?;

    let rows: Vec<_> = runs.iter().map(|a| a.bounds.clone()).collect();
    emit_report(args, &render_bounds(&rows, format), format)?;

    if let Some(dir) = &args.out {
        for a in &runs {
            let tag = format!("tau_{}", a.bounds.tau);
            if args.emit_polytope {
                write(&dir.join(format!("polytope_{tag}.json")), &a.polytope.to_json())?;
            }
            if args.emit_boundary2d {
                if let Some(pts) = a.polytope.boundary_2d() {
                    write(&dir.join(format!("boundary_{tag}.csv")), &render_boundary_csv(&pts))?;
                } else {
                    eprintln!("warning: boundary export skipped, dimension is {}", family.dim());
                }
            }
        }
    }
    for a in &runs {
        if !a.bounds.terminated {
            eprintln!(
                "τ = {}: polytope did not terminate after {} sweeps; increase --nu or --max-word-len",
                a.bounds.tau, a.bounds.sweeps
            );
        }
        if a.bounds.alpha_detail.as_ref().is_some_and(|d| d.delta_warning) {
            eprintln!("τ = {}: alpha changed between delta and delta/2; the delta/2 value is reported", a.bounds.tau);
        }
    }
    Ok(runs.iter().all(|a| a.bounds.verdict.is_conclusive()))
}

fn run_one(family: &MatrixFamily, tau: f64, cfg: &AnalysisConfig) -> Result<Analysis> {
    let r = match cfg.mode {
        AnalysisMode::Stabilizability => analyze_stabilizability(family, tau, cfg),
        _ => analyze_stability(family, tau, cfg),
    };
    r.map_err(|e| anyhow!("τ = {tau}: {e}"))
}

fn emit_report(args: &AnalyzeArgs, text: &str, format: ReportFormat) -> Result<()> {
    print!("{text}");
    if let Some(dir) = &args.out {
        write(&dir.join(format!("report.{}", format.extension())), text)?;
    }
    Ok(())
}

fn generate(args: &GenArgs) -> Result<()> {
    let law = match args.law {
        Law::Sign => EntryLaw::Sign,
        Law::Uniform => EntryLaw::Uniform,
    };
    let family = random_metzler(args.dim, args.count, law, args.seed)?;
    let text = family.to_json();
    match &args.out {
        Some(p) => write(p, &text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("LYAPOLY_THREADS") {
        let n: usize = v.parse().with_context(|| format!("LYAPOLY_THREADS={v}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors must not look like an inconclusive analysis
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = init_threads().and_then(|()| match &cli.command {
        Command::Analyze(a) => analyze(a).map(|conclusive| if conclusive { 0 } else { 2 }),
        Command::GenRandomMetzler(g) => generate(g).map(|()| 0),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
