//! The `qnc` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation or I/O error,
//! 3 oracle mismatch.

mod commands;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::format::OutputFormat;
use crate::Error;

pub use commands::Outcome;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// Default directory for persisted reports when `--output` is absent.
pub const OUTPUT_DIR_ENV: &str = "QNC_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "qnc", version, about = "Exact resource accounting for hybrid classical/quantum source coding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Layout printed to standard output.
    #[arg(long, value_enum, default_value_t)]
    format: OutputFormat,
    /// Also write the report here (CSV for `--format csv`, JSON otherwise).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RangeArgs {
    #[arg(long, default_value_t = 2)]
    d_min: u32,
    #[arg(long, default_value_t = 32)]
    d_max: u32,
    #[arg(long = "N-min", alias = "n-min", default_value_t = 3)]
    n_min: u32,
    #[arg(long = "N-max", alias = "n-max", default_value_t = 32)]
    n_max: u32,
    #[arg(long, default_value_t = 2)]
    q_min: u32,
    #[arg(long, default_value_t = 32)]
    q_max: u32,
    #[arg(long = "M-min", alias = "m-min", default_value_t = 2)]
    m_min: u32,
    #[arg(long = "M-max", alias = "m-max", default_value_t = 32)]
    m_max: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entropy decomposition of a two-subspace source.
    Entropy {
        /// Source file (JSON).
        source: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dimension of the majority-species typical subspace.
    Ddim {
        /// Retained subspace dimension.
        #[arg(long)]
        d: u32,
        /// Block length.
        #[arg(long = "N", alias = "n")]
        n: u32,
        /// Cross-check against exhaustive enumeration.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact solutions of q^M = D_Lambda(d, N).
    Search {
        #[command(flatten)]
        ranges: RangeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare the exact search against the published solution table.
    #[command(name = "verify-table1")]
    VerifyTable1 {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Typical-subspace fidelity for each ensemble in a source.
    Fidelity {
        /// Source file (JSON).
        source: PathBuf,
        /// Block length.
        #[arg(long = "N", alias = "n")]
        n: u32,
        /// Recompute by explicit tensor-product construction.
        #[arg(long)]
        oracle: bool,
        /// Retain only the d most probable states.
        #[arg(long)]
        d: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sample, classically code the membership string, size the quantum codes.
    Pipeline {
        /// Source file (JSON).
        source: PathBuf,
        /// Number of signals to sample.
        #[arg(long = "N", alias = "n")]
        n: usize,
        /// Classical block length in membership bits.
        #[arg(long, default_value_t = 8)]
        k: u32,
        /// Dimension of each quantum code carrier.
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Sampling seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Entropy gap and support-overlap checks for a possibly overlapping pair.
    Gap {
        /// Source file (JSON); its two blocks need not be orthogonal.
        source: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::OracleMismatch(_) => EXIT_MISMATCH,
        _ => EXIT_INVALID,
    }
}

/// Parses `args` (program name first) and runs the command, reading the
/// default output directory from the environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    run_with_output_dir(args, dir.as_deref(), out, err)
}

pub fn run_with_output_dir<I, T>(args: I, output_dir: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let (name, outcome, opts) = match dispatch(cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let _ = out.write_all(outcome.render(opts.format).as_bytes());
    let target = opts
        .output
        .clone()
        .or_else(|| output_dir.map(|d| d.join(format!("{name}.{}", opts.format.file_extension()))));
    if let Some(path) = target {
        let body = match opts.format {
            OutputFormat::Csv => &outcome.csv,
            _ => &outcome.json,
        };
        if let Err(e) = std::fs::write(&path, body) {
            let _ = writeln!(err, "error: {}", Error::Io { path, source: e });
            return EXIT_INVALID;
        }
    }
    for line in &outcome.diagnostics {
        let _ = writeln!(err, "{line}");
    }
    outcome.exit
}

fn dispatch(command: Command) -> crate::Result<(&'static str, Outcome, OutputArgs)> {
    Ok(match command {
        Command::Entropy { source, out } => ("entropy", commands::entropy(&source)?, out),
        Command::Ddim { d, n, check, out } => ("ddim", commands::ddim(d, n, check)?, out),
        Command::Search { ranges, out } => {
            let r = crate::search::SearchRanges {
                d_min: ranges.d_min,
                d_max: ranges.d_max,
                n_min: ranges.n_min,
                n_max: ranges.n_max,
                q_min: ranges.q_min,
                q_max: ranges.q_max,
                m_min: ranges.m_min,
                m_max: ranges.m_max,
            };
            ("search", commands::search(&r)?, out)
        }
        Command::VerifyTable1 { out } => ("verify-table1", commands::verify_table1(), out),
        Command::Fidelity { source, n, oracle, d, out } => ("fidelity", commands::fidelity(&source, n, oracle, d)?, out),
        Command::Pipeline { source, n, k, q, seed, out } => {
            let config = crate::pipeline::RunConfig {
                source,
                params: crate::pipeline::PipelineParams { n, k, q, seed },
                output: out.output.clone(),
                format: out.format,
            };
            ("pipeline", commands::pipeline(&config)?, out)
        }
        Command::Gap { source, out } => ("gap", commands::gap(&source)?, out),
    })
}
