//! Command-line entry point: `validate`, `run` and `report`.
//!
//! Exit codes: 0 success, 1 invalid input, 2 solve failure, 3 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use h2match_core::analysis::{plots::write_plots, write_comparisons, CaseReport};
use h2match_core::runs::{
    combined_provenance, execute, load_experiment, read_records, Backend, ExecOptions, Experiment, RunError,
};

const EXIT_VALIDATION: u8 = 1;
const EXIT_SOLVE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "h2match", version, about = "Hydrogen time-matching capacity expansion runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a manifest and every run case it defines.
    Validate(ConfigArgs),
    /// Solve the runs of a manifest.
    Run(RunArgs),
    /// Write comparison tables and plots from completed runs.
    Report(ReportArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Manifest file (TOML, or JSON by extension).
    #[arg(long)]
    config: PathBuf,
    /// Overrides `solver.seed`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Output directory; runs go to `<out>/runs/<label>/`.
    #[arg(long, default_value = "output")]
    out: PathBuf,
    /// Only runs whose label matches this glob (plus their dependencies).
    #[arg(long)]
    labels: Option<String>,
    /// Solve again even when a run is up to date.
    #[arg(long)]
    force: bool,
    #[arg(long, value_enum)]
    solver: Option<Backend>,
    /// Write every LP as MPS into this directory.
    #[arg(long)]
    emit_lp: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, default_value = "output")]
    out: PathBuf,
    /// Manifest whose labels must all be complete; missing ones are flagged.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

fn exit_code(e: &RunError) -> u8 {
    if e.is_io() {
        EXIT_IO
    } else if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_SOLVE
    }
}

fn load(args: &ConfigArgs) -> Result<Experiment, ExitCode> {
    load_experiment(&args.config, args.seed).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(exit_code(&e))
    })
}

fn check(exp: &Experiment) -> Result<(), ExitCode> {
    let violations = exp.validate();
    if violations.is_empty() {
        return Ok(());
    }
    for v in &violations {
        eprintln!("invalid: {v}");
    }
    Err(ExitCode::from(EXIT_VALIDATION))
}

fn cmd_validate(args: ConfigArgs) -> Result<(), ExitCode> {
    let exp = load(&args)?;
    check(&exp)?;
    println!("{}: {} runs valid (config_hash={})", args.config.display(), exp.runs.len(), exp.config_hash);
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<(), ExitCode> {
    if let Some(n) = args.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            log::warn!("cannot size the worker pool: {e}");
        }
    }
    let mut exp = load(&args.config)?;
    if let Some(b) = args.solver {
        exp.solver.backend = b;
    }
    check(&exp)?;
    let labels = match args.labels.as_deref().map(glob::Pattern::new).transpose() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: --labels: {e}");
            return Err(ExitCode::from(EXIT_VALIDATION));
        }
    };
    if labels.as_ref().is_some_and(|p| !exp.runs.iter().any(|r| p.matches(&r.label))) {
        eprintln!("error: --labels matches no run");
        return Err(ExitCode::from(EXIT_VALIDATION));
    }
    let opts = ExecOptions { labels, force: args.force, emit_lp: args.emit_lp };
    let summary = execute(&exp, &args.out, &opts);
    println!("{} solved, {} up to date, {} failed", summary.solved.len(), summary.skipped.len(), summary.failed.len());
    for (label, e) in &summary.failed {
        println!("  FAILED {label}: {e}");
    }
    match summary.failed.iter().map(|(_, e)| exit_code(e)).min_by_key(|c| match *c {
        EXIT_SOLVE => 0,
        EXIT_IO => 1,
        _ => 2,
    }) {
        None => Ok(()),
        Some(c) => Err(ExitCode::from(c)),
    }
}

fn cmd_report(args: ReportArgs) -> Result<(), ExitCode> {
    let runs_dir = args.out.join("runs");
    let (records, partial) = read_records(&runs_dir).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(exit_code(&e))
    })?;
    let mut flagged: Vec<(String, String)> = partial
        .iter()
        .map(|d| {
            let label = d.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
            let detail = std::fs::read_to_string(d.join("error.txt")).unwrap_or_else(|_| "no report.json".into());
            (label, detail.trim().to_string())
        })
        .collect();
    if let Some(cfg) = &args.config {
        let exp = load(&ConfigArgs { config: cfg.clone(), seed: args.seed })?;
        for p in &exp.runs {
            let known = records.iter().any(|r| r.label == p.label) || flagged.iter().any(|(l, _)| *l == p.label);
            if !known {
                flagged.push((p.label.clone(), "not run".into()));
            }
        }
    }
    flagged.sort();
    for (label, detail) in &flagged {
        eprintln!("warning: partial run {label}: {detail}");
    }
    if records.is_empty() {
        eprintln!("error: no completed runs under {}", runs_dir.display());
        return Err(ExitCode::from(EXIT_VALIDATION));
    }
    let seed = records[0].provenance.seed;
    if records.iter().any(|r| r.provenance.seed != seed) {
        eprintln!("warning: runs were produced with different seeds; stamping seed {seed}");
    }
    let prov = combined_provenance(&records, seed);
    let reports: Vec<CaseReport> = records.iter().flat_map(|r| r.reports().cloned()).collect();
    let dir = args.out.join("comparisons");
    let io_err = |e: std::io::Error| {
        eprintln!("error: {}: {e}", dir.display());
        ExitCode::from(EXIT_IO)
    };
    let mut written = write_comparisons(&dir, &reports, &prov).map_err(io_err)?;
    written.extend(write_plots(&dir, &reports, &prov).map_err(io_err)?);
    written.push(write_status(&dir, &records, &flagged, &prov.comment()).map_err(io_err)?);
    for p in &written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

/// `run_status.csv`: every completed and partial run with its state.
fn write_status(
    dir: &Path,
    records: &[h2match_core::runs::RunRecord],
    flagged: &[(String, String)],
    comment: &str,
) -> std::io::Result<PathBuf> {
    let mut rows: Vec<[String; 3]> =
        records.iter().map(|r| [r.label.clone(), "complete".into(), String::new()]).collect();
    rows.extend(flagged.iter().map(|(l, d)| [l.clone(), "partial".into(), d.clone()]));
    rows.sort();
    let mut buf = format!("# {comment}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(["label", "status", "detail"])?;
        for r in &rows {
            w.write_record(r)?;
        }
        w.flush()?;
    }
    let path = dir.join("run_status.csv");
    let tmp = dir.join(".run_status.csv.tmp");
    std::fs::write(&tmp, buf)?;
    std::fs::rename(&tmp, &path)?;
    Ok(path)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Run(a) => cmd_run(a),
        Command::Report(a) => cmd_report(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(c) => c,
    }
}
