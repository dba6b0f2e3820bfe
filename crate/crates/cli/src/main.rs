//! `pointrad`: batch runs of point-particle heat radiation and heat transfer
//! scenarios, writing CSV.
//!
//! Exit codes: 0 success, 2 configuration error, 3 physics or geometry error,
//! 4 accuracy target not met (the partial CSV is still written).

mod config;
mod output;
mod presets;
mod report;
mod run;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pointrad_core::materials::Verdict;
use serde::Serialize;

use config::{ConfigError, ScenarioConfig};
use run::Status;

#[derive(Parser, Debug)]
#[command(name = "pointrad", version, about = "Heat radiation and heat transfer of dipolar particles")]
struct Cli {
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, env = "POINTRAD_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Scenario file (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in scenario name.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a scenario and write CSV.
    Run {
        #[command(flatten)]
        source: Source,
        /// Output file; overrides the scenario's `output`, stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Relative tolerance of the frequency integrals.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Write 0 in the wall-time column.
        #[arg(long)]
        no_timing: bool,
    },
    /// Check a scenario without evaluating it and print a JSON report.
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// List built-in scenarios.
    Presets {
        /// Print the named scenario as JSON.
        #[arg(long)]
        show: Option<String>,
    },
}

/// Failure printed to stderr as one JSON object.
#[derive(Debug, Serialize)]
struct Failure {
    error: &'static str,
    message: String,
    exit_code: u8,
}

impl Failure {
    fn config(message: String) -> Self {
        Failure {
            error: "config",
            message,
            exit_code: 2,
        }
    }

    fn core(e: pointrad_core::Error) -> Self {
        use pointrad_core::Error as E;
        let (error, exit_code) = match e {
            E::Invalid(_) => ("config", 2),
            E::Geometry(_) | E::CoincidentPoints(_) => ("geometry", 3),
            E::Accuracy { .. } | E::NonConvergence { .. } => ("accuracy", 4),
            _ => ("physics", 3),
        };
        Failure {
            error,
            message: e.to_string(),
            exit_code,
        }
    }

    fn io(e: io::Error) -> Self {
        Failure {
            error: "io",
            message: e.to_string(),
            exit_code: 1,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::config(e.to_string())
    }
}

fn load(source: &Source) -> Result<ScenarioConfig, Failure> {
    match (&source.config, &source.preset) {
        (Some(path), _) => Ok(ScenarioConfig::from_path(path)?),
        (None, Some(name)) => {
            presets::preset(name).ok_or_else(|| Failure::config(format!("unknown preset '{name}'")))
        }
        (None, None) => Err(Failure::config("one of --config or --preset is required".into())),
    }
}

fn run(source: &Source, out: Option<PathBuf>, tolerance: Option<f64>, timing: bool) -> Result<ExitCode, Failure> {
    let mut cfg = load(source)?;
    if let Some(tol) = tolerance {
        cfg.quadrature.rel_tol = tol;
        cfg.validate()?;
    }
    let diag = report::report(&cfg);
    if !diag.geometry.is_empty() {
        return Err(Failure {
            error: "geometry",
            message: diag.geometry.join("; "),
            exit_code: 3,
        });
    }
    for c in diag.validity.iter().filter(|c| c.verdict != Verdict::Pass) {
        eprintln!(
            "warning: particle {} {} = {:.3e} ({:?})",
            c.particle, c.check, c.worst_ratio, c.verdict
        );
    }
    let rows = run::execute(&cfg).map_err(Failure::core)?;
    let opts = output::Options { timing };
    match out.or_else(|| cfg.output.clone()) {
        Some(path) => {
            let file = File::create(&path).map_err(Failure::io)?;
            let mut w = BufWriter::new(file);
            output::write_csv(&mut w, &cfg, &rows, opts).map_err(Failure::io)?;
            w.flush().map_err(Failure::io)?;
        }
        None => output::write_csv(io::stdout().lock(), &cfg, &rows, opts).map_err(Failure::io)?,
    }
    let flagged = rows.iter().filter(|r| r.status != Status::Ok).count();
    if flagged > 0 {
        return Err(Failure {
            error: "accuracy",
            message: format!("{flagged} of {} rows did not meet the accuracy target", rows.len()),
            exit_code: 4,
        });
    }
    Ok(ExitCode::SUCCESS)
}

fn validate(source: &Source) -> Result<ExitCode, Failure> {
    let diag = match load(source) {
        Ok(cfg) => report::report(&cfg),
        Err(f) => report::Report::schema_error(f.message),
    };
    let text = serde_json::to_string_pretty(&diag).expect("report serializes");
    writeln!(io::stdout().lock(), "{text}").map_err(Failure::io)?;
    Ok(ExitCode::SUCCESS)
}

fn list_presets(show: Option<String>) -> Result<ExitCode, Failure> {
    match show {
        Some(name) => {
            let cfg = presets::preset(&name).ok_or_else(|| Failure::config(format!("unknown preset '{name}'")))?;
            let text = serde_json::to_string_pretty(&cfg).expect("configuration serializes");
            writeln!(io::stdout().lock(), "{text}").map_err(Failure::io)?;
        }
        None => {
            let mut out = io::stdout().lock();
            for (name, description) in presets::NAMES {
                writeln!(out, "{name}\t{description}").map_err(Failure::io)?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: cannot configure thread pool: {e}");
        }
    }
    let result = match cli.command {
        Command::Run {
            source,
            out,
            tolerance,
            no_timing,
        } => run(&source, out, tolerance, !no_timing),
        Command::Validate { source } => validate(&source),
        Command::Presets { show } => list_presets(show),
    };
    result.unwrap_or_else(|f| {
        eprintln!("{}", serde_json::to_string(&f).expect("failure serializes"));
        ExitCode::from(f.exit_code)
    })
}
