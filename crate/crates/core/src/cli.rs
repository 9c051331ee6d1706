//! Command-line front end.
//!
//! ```text
//! toolate <epr|toolate|interfere|erase|lhv|verify> [--config FILE] [--angles DEG,...]
//!         [--trials N] [--seed S] [--out PATH] [--port-binding P,P,P] [--threshold X]
//! ```
//!
//! Flags override the config file. Without `--out` (or `output_path`), the
//! primary output goes to stdout. Exit codes: 0 success, 1 bad config or
//! usage, 2 a `verify` check failed, 3 I/O failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::experiments::{
    run_epr, run_erasure, run_interference, run_lhv_compare, run_toolate, run_verify, write_outputs, ExperimentConfig,
    Metadata, Output, Protocol,
};
use crate::toolate::PortBinding;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "toolate", version, about = "Value-first spin measurement simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Singlet correlations and CHSH for standard EPR settings.
    Epr(Flags),
    /// Value-first protocol: values at t2, orientations at t3.
    Toolate(Flags),
    /// Recombination test against definite-path models.
    Interfere(Flags),
    /// Which-path erasure on the prepared and value-conditioned pairs.
    Erase(Flags),
    /// Quantum predictions against local and source-level classical models.
    Lhv(Flags),
    /// Analytic invariants and the equation audit.
    Verify(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// JSON config file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Comma-separated angles in degrees.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_name = "DEG,...")]
    angles: Option<Vec<f64>>,
    /// Monte Carlo trials; 0 computes exact values only.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Ports feeding alpha, beta, gamma, e.g. `2,0,1`.
    #[arg(long, value_delimiter = ',', value_name = "P,P,P")]
    port_binding: Option<Vec<usize>>,
    /// Total-variation threshold for the interference verdict.
    #[arg(long)]
    threshold: Option<f64>,
}

impl Command {
    fn split(self) -> (Protocol, Flags) {
        match self {
            Command::Epr(f) => (Protocol::EprStandard, f),
            Command::Toolate(f) => (Protocol::Toolate, f),
            Command::Interfere(f) => (Protocol::Interference, f),
            Command::Erase(f) => (Protocol::Erasure, f),
            Command::Lhv(f) => (Protocol::LhvCompare, f),
            Command::Verify(f) => (Protocol::Verify, f),
        }
    }
}

fn build_config(protocol: Protocol, flags: Flags) -> Result<ExperimentConfig> {
    let mut config = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            if cfg.protocol != protocol {
                return Err(Error::Config(format!(
                    "config file is for {:?}, subcommand runs {protocol:?}",
                    cfg.protocol
                )));
            }
            cfg
        }
        None => ExperimentConfig::new(protocol),
    };
    if let Some(deg) = flags.angles {
        config.angles = Some(deg.iter().map(|d| d.to_radians()).collect());
    }
    if let Some(n) = flags.trials {
        config.trials = n;
    }
    if let Some(s) = flags.seed {
        config.master_seed = s;
    }
    if let Some(out) = flags.out {
        config.output_path = Some(out);
    }
    if let Some(p) = flags.port_binding {
        let ports: [usize; 3] = p
            .try_into()
            .map_err(|p: Vec<usize>| Error::Config(format!("port binding needs 3 entries, got {}", p.len())))?;
        config.port_binding = PortBinding::new(ports)?;
    }
    if let Some(t) = flags.threshold {
        config.threshold = t;
    }
    config.validate()?;
    Ok(config)
}

fn report<T: serde::Serialize>(value: &T) -> Result<Output> {
    Ok(Output::Report(serde_json::to_value(value)?))
}

/// Runs the configured protocol. Returns the output and whether every
/// gating check passed.
fn execute(config: &ExperimentConfig) -> Result<(Output, bool)> {
    Ok(match config.protocol {
        Protocol::EprStandard => (Output::Table(run_epr(config)?), true),
        Protocol::Toolate => {
            let run = run_toolate(config)?;
            let records = run.records_jsonl(config)?;
            (
                Output::TableWithRecords {
                    table: run.table,
                    records,
                },
                true,
            )
        }
        Protocol::Interference => (report(&run_interference(config)?)?, true),
        Protocol::Erasure => (report(&run_erasure(config)?)?, true),
        Protocol::LhvCompare => (report(&run_lhv_compare(config)?)?, true),
        Protocol::Verify => {
            let r = run_verify(config)?;
            for failed in r.failures() {
                eprintln!(
                    "check failed: {} = {} (expected {} ± {})",
                    failed.name, failed.value, failed.expected, failed.tolerance
                );
            }
            let ok = r.all_pass;
            (report(&r)?, ok)
        }
    })
}

fn print_stdout(output: &Output, config: &ExperimentConfig) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match output {
        Output::Table(t) => out.write_all(t.to_csv().as_bytes())?,
        Output::TableWithRecords { table, .. } => out.write_all(table.to_csv().as_bytes())?,
        Output::Report(v) => {
            let mut doc = serde_json::Map::new();
            doc.insert("metadata".into(), serde_json::to_value(Metadata::new(config))?);
            if let serde_json::Value::Object(fields) = v {
                doc.extend(fields.clone());
            }
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("TOOLATE_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("TOOLATE_THREADS must be a positive integer, got {v:?}")))?;
        // Fails only if the pool already exists, which leaves results unchanged.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs one subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    let (protocol, flags) = cli.command.split();
    let config = match build_config(protocol, flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let result = execute(&config).and_then(|(output, ok)| {
        match &config.output_path {
            Some(path) => {
                for p in write_outputs(path, &output, &config)? {
                    eprintln!("wrote {}", p.display());
                }
            }
            None => print_stdout(&output, &config)?,
        }
        Ok(ok)
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFY_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
