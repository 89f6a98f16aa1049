//! Command-line front end: `growth`, `spread`, `ensembles verify` and `fit`.
//!
//! Exit codes: 0 on success, 1 on runtime failures, 2 on usage errors
//! (bad flags, unreadable or invalid configs).

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

pub use config::{parse_config, ConfigFile, ExperimentKind, RunConfig};
pub use output::{growth_csv, parse_results, sidecar_json, sidecar_path, spread_csv, ParsedResults};

use crate::ensembles::{ensemble_counts, CLIFFORD_COUNT, INCOHERENT_COUNT, MATCHGATE_COUNT};
use crate::experiments::{fit_growth, fit_spread, run_growth, run_spread, FitResult};
use crate::Error;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "QRES_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "qres", version, about = "Local resource dynamics in random brickwall circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resource growth from |0…0⟩ on centered subsystems.
    Growth(RunArgs),
    /// Spreading of an initially localized resource cluster.
    Spread(RunArgs),
    /// Checks on the two-qubit gate ensembles.
    Ensembles {
        #[command(subcommand)]
        action: EnsemblesAction,
    },
    /// Re-extracts timescales from a result CSV.
    Fit(FitArgs),
}

#[derive(Debug, Subcommand)]
pub enum EnsemblesAction {
    /// Prints the Clifford, incoherent and matchgate cardinalities.
    Verify,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML experiment config.
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub realizations: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Worker threads (default: config, then $QRES_WORKERS, then all cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Gzip the CSV.
    #[arg(long)]
    pub gzip: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Growth or spread CSV (optionally .gz).
    pub csv: PathBuf,
    /// Threshold level for τ_θ (default depends on the monotone).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Arrival level for front velocities.
    #[arg(long)]
    pub level: Option<f64>,
    /// JSON destination; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Self { code: 2, message: e.to_string() }
    }

    fn runtime(e: impl std::fmt::Display) -> Self {
        Self { code: 1, message: e.to_string() }
    }
}

/// Validation errors are usage errors; everything else is a runtime error.
fn classify(e: Error) -> Failure {
    match e {
        Error::Config(_) | Error::Incompatible(_) | Error::Parse(_) | Error::TooLarge(_) => Failure::usage(e),
        other => Failure::runtime(other),
    }
}

/// Parses `args`, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Executes a parsed command, writing reports to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Growth(a) => run_experiment(ExperimentKind::Growth, a, out),
        Command::Spread(a) => run_experiment(ExperimentKind::Spread, a, out),
        Command::Ensembles { action: EnsemblesAction::Verify } => verify_ensembles(out),
        Command::Fit(a) => fit_csv(a, out),
    }
}

fn verify_ensembles(out: &mut dyn Write) -> Result<(), Failure> {
    let c = ensemble_counts();
    let report = format!(
        "two-qubit Clifford gates: {}\nincoherent Clifford gates: {}\nClifford matchgates: {}\n\
         matchgate chirality: {} left-moving, {} right-moving, {} neutral\n",
        c.clifford, c.incoherent, c.matchgate, c.left_moving, c.right_moving, c.neutral
    );
    out.write_all(report.as_bytes()).map_err(Failure::runtime)?;
    let expected = (CLIFFORD_COUNT, INCOHERENT_COUNT, MATCHGATE_COUNT);
    if (c.clifford, c.incoherent, c.matchgate) != expected {
        return Err(Failure::runtime(format!("cardinalities differ from the expected {expected:?}")));
    }
    Ok(())
}

fn load_config(kind: ExperimentKind, a: &RunArgs) -> Result<RunConfig, Failure> {
    let text = std::fs::read_to_string(&a.config)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", a.config.display())))?;
    let mut file: ConfigFile = toml::from_str(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", a.config.display())))?;
    if let Some(k) = file.kind {
        if k != kind {
            return Err(Failure::usage(format!("config is a {} run, not {}", k.name(), kind.name())));
        }
    }
    file.kind = Some(kind);
    file.seed = a.seed.or(file.seed);
    file.realizations = a.realizations.or(file.realizations);
    file.epsilon = a.epsilon.or(file.epsilon);
    file.depth = a.depth.or(file.depth);
    file.workers = a.workers.or(file.workers);
    file.output = a.output.clone().or(file.output);
    if a.gzip {
        file.gzip = Some(true);
    }
    config::resolve(file).map_err(|e| Failure::usage(format!("{}: {e}", a.config.display())))
}

fn worker_count(cfg: &RunConfig) -> Result<Option<usize>, Failure> {
    if let Some(w) = cfg.workers {
        return Ok(Some(w));
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::usage(format!("{WORKERS_ENV}={v} is not a positive integer"))),
        },
        Err(_) => Ok(None),
    }
}

fn run_experiment(kind: ExperimentKind, a: RunArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = load_config(kind, &a)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = worker_count(&cfg)? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(Failure::runtime)?;
    let (csv, fits): (Vec<u8>, Vec<FitResult>) = pool.install(|| match kind {
        ExperimentKind::Growth => {
            let s = run_growth(&cfg.spec, cfg.monotone, &cfg.subsystem_sizes).map_err(classify)?;
            Ok((growth_csv(&s).map_err(classify)?, fit_growth(&s, cfg.theta)))
        }
        ExperimentKind::Spread => {
            let size = cfg.subsystem_size.expect("resolved spread config has a size");
            let g = run_spread(&cfg.spec, cfg.monotone, size, cfg.x_r.as_deref()).map_err(classify)?;
            Ok((spread_csv(&g).map_err(classify)?, vec![fit_spread(&g, cfg.level)]))
        }
    })?;
    match &cfg.output {
        Some(path) => {
            output::write_bytes(path, &csv, cfg.gzip).map_err(Failure::runtime)?;
            let side = sidecar_path(path);
            let json = sidecar_json(&cfg, &fits).map_err(Failure::runtime)?;
            std::fs::write(&side, json + "\n").map_err(Failure::runtime)?;
            let msg = format!("wrote {} and {}\n", path.display(), side.display());
            out.write_all(msg.as_bytes()).map_err(Failure::runtime)?;
        }
        None => {
            out.write_all(&csv).map_err(Failure::runtime)?;
            let json = serde_json::to_string(&fits).map_err(Failure::runtime)?;
            eprintln!("fits: {json}");
        }
    }
    Ok(())
}

fn fit_csv(a: FitArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let text = output::read_text(&a.csv).map_err(|e| Failure::usage(format!("{}: {e}", a.csv.display())))?;
    let parsed = parse_results(&text).map_err(|e| Failure::usage(format!("{}: {e}", a.csv.display())))?;
    let fits: Vec<FitResult> = match &parsed {
        ParsedResults::Growth(all) => all
            .iter()
            .flat_map(|s| fit_growth(s, a.theta.unwrap_or(s.monotone.default_threshold())))
            .collect(),
        ParsedResults::Spread(all) => {
            all.iter().map(|g| fit_spread(g, a.level.unwrap_or(config::DEFAULT_LEVEL))).collect()
        }
    };
    let doc = json!({
        "kind": parsed.kind().name(),
        "source": a.csv.display().to_string(),
        "fits": fits,
    });
    let text = serde_json::to_string_pretty(&doc).map_err(Failure::runtime)? + "\n";
    match a.output {
        Some(p) => std::fs::write(p, text).map_err(Failure::runtime),
        None => out.write_all(text.as_bytes()).map_err(Failure::runtime),
    }
}
