//! The `fracsolve` command line.
//!
//! ```text
//! fracsolve run <config.json> [--dump-spec]
//! fracsolve verify <operators|volterra|thermistor|timescale|all>
//! fracsolve op --apply {Ialpha|Dalpha|Calpha} --alpha A --in data.csv --out out.csv
//! fracsolve threshold <config.json>
//! ```
//!
//! Exit codes: 0 converged, 1 input error, 2 divergence or no convergence,
//! 3 hypothesis violation, 4 verification failure.

pub mod config;
mod run;
pub mod verify;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::{OpKind, Problem, RunConfig};
pub use run::{execute, read_series, write_series, RunReport};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DIVERGED: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "fracsolve", version, about = "Fractional thermistor and Volterra solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the problem described by a JSON config.
    Run {
        config: PathBuf,
        /// Print the config with all defaults filled in and exit.
        #[arg(long)]
        dump_spec: bool,
    },
    /// Run an oracle comparison suite.
    Verify { suite: String },
    /// Apply a fractional operator to a sampled function.
    Op {
        #[arg(long, value_enum)]
        apply: OpKind,
        #[arg(long)]
        alpha: f64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print uniqueness thresholds, bounds and radii for a config.
    Threshold { config: PathBuf },
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Divergence(_) | Error::Singularity(_) | Error::Evaluation(_) | Error::Accuracy(_) => EXIT_DIVERGED,
        Error::Hypothesis(_) => EXIT_HYPOTHESIS,
        Error::InvalidGrid(_)
        | Error::Domain(_)
        | Error::Precondition(_)
        | Error::Consistency(_)
        | Error::Parse(_)
        | Error::Io(_) => EXIT_INPUT,
    }
}

/// Runs the command line and returns the process exit code.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Run { config, dump_spec } => cmd_run(&config, dump_spec),
        Command::Verify { suite } => match verify::Suite::from_name(&suite) {
            Some(s) => {
                let checks = verify::run_suite(s);
                print!("{}", verify::table(&checks));
                if checks.iter().all(|c| c.pass) {
                    EXIT_OK
                } else {
                    EXIT_VERIFY
                }
            }
            None => {
                eprintln!(
                    "error: unknown suite `{suite}` (expected one of {})",
                    verify::Suite::NAMES.join(", ")
                );
                EXIT_INPUT
            }
        },
        Command::Op { apply, alpha, input, out } => cmd_op(apply, alpha, &input, &out),
        Command::Threshold { config } => cmd_threshold(&config),
    }
}

fn load_config(path: &Path) -> Result<RunConfig, i32> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_INPUT
    })?;
    RunConfig::from_json(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_INPUT
    })
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn cmd_run(path: &Path, dump_spec: bool) -> i32 {
    let config = match load_config(path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if dump_spec {
        let text = serde_json::to_string_pretty(&config.normalized()).expect("config serializes");
        println!("{text}");
        return EXIT_OK;
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("fracsolve");
    let csv_path = resolve(base, config.out.csv.as_deref().unwrap_or(Path::new(&format!("{stem}.csv"))));
    let report_path = resolve(
        base,
        config.out.report.as_deref().unwrap_or(Path::new(&format!("{stem}.report.json"))),
    );

    let outcome = execute(&config);
    if let Some(sol) = &outcome.solution {
        if let Err(e) = write_series(&csv_path, sol.nodes(), sol.values()) {
            eprintln!("error: cannot write {}: {e}", csv_path.display());
            return EXIT_INPUT;
        }
    }
    let json = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
    if let Err(e) = std::fs::write(&report_path, json + "\n") {
        eprintln!("error: cannot write {}: {e}", report_path.display());
        return EXIT_INPUT;
    }
    let r = &outcome.report;
    match &r.error {
        Some(msg) => eprintln!("error: {msg}"),
        None => println!(
            "{}: converged = {}, iterations = {}, residual = {:e}",
            r.kind, r.converged, r.iterations, r.residual
        ),
    }
    for w in r.hypothesis_violations.iter() {
        eprintln!("hypothesis: {w}");
    }
    outcome.exit_code
}

fn cmd_op(kind: OpKind, alpha: f64, input: &Path, out: &Path) -> i32 {
    let result = read_series(input).and_then(|g| run::apply_operator(kind, alpha, &g));
    match result {
        Ok(res) => match write_series(out, res.nodes(), res.values()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", out.display());
                EXIT_INPUT
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn cmd_threshold(path: &Path) -> i32 {
    let config = match load_config(path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    match run::thresholds(&config) {
        Ok(value) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
