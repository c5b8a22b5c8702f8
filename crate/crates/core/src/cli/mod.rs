//! The `nlll` command line: configuration, scans and tabular export.
//!
//! Tables go to `--out` (or stdout) as CSV with 17 significant digits, or
//! as JSON. Commands that produce a summary write it next to a CSV file as
//! `<stem>.sidecar.json`; with JSON output the summary is embedded.
//!
//! Exit codes: 0 success, 2 configuration error, 3 degenerate channel,
//! 4 numeric failure.

mod commands;
mod config;
mod table;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub use commands::{cmd_dsf, cmd_exponents, cmd_shiftcheck, cmd_spectral, cmd_sumrule, Report};
pub use config::{Format, OmegaGrid, OutputConfig, ParamsConfig, RunConfig, Spacing};
pub use table::{fmt_num, Cell, Table};

use crate::channels::OmegaSign;
use crate::error::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                Error::DegenerateChannel { .. } | Error::NoIntegrableSingularity { .. } => 3,
                Error::GammaPole { .. } | Error::Numeric(_) => 4,
                Error::InvalidParameter { .. }
                | Error::WrongChannelType { .. }
                | Error::CapExceeded { .. }
                | Error::InvalidConfig(_)
                | Error::Unreachable { .. } => 2,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nlll", version, about = "Threshold singularities of the non-linear Luttinger liquid")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SignArg {
    Positive,
    Negative,
}

#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated list of xi values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub xi: Vec<f64>,
    #[arg(long)]
    pub channel: Option<String>,
    /// Comma-separated list of momenta.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub k: Vec<f64>,
    #[arg(long)]
    pub qmax: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exponent table of every channel.
    Exponents {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Brute-force sum rule against the closed form.
    Sumrule {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        m_max: Option<u32>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<f64>,
    },
    /// Finite-size spectral sum against the continuum threshold law.
    Spectral {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        bins_per_decade: Option<u32>,
        /// Largest |omega - threshold| to bin.
        #[arg(long)]
        max_offset: Option<f64>,
        #[arg(long, value_enum)]
        omega_sign: Option<SignArg>,
    },
    /// Deviation of the shift reduction against the high-energy position.
    Shiftcheck {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        p: Vec<i64>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
    },
    /// Small-momentum density structure factor.
    Dsf {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn merged_config(common: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(c) = &common.channel {
        cfg.channel = c.clone();
    }
    if !common.k.is_empty() {
        cfg.k_list = common.k.clone();
    }
    if let Some(q) = common.qmax {
        cfg.qmax = q;
    }
    if let Some(out) = &common.out {
        cfg.output.path = Some(out.clone());
    }
    if let Some(f) = common.format {
        cfg.output.format = Some(f);
    }
    Ok(cfg)
}

/// xi values for single-xi commands: the flag list, or the configured xi.
fn xi_scan(common: &CommonArgs, cfg: &RunConfig) -> Vec<f64> {
    if common.xi.is_empty() {
        vec![cfg.params.xi]
    } else {
        common.xi.clone()
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("sidecar.json")
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

/// Writes a report according to the configured output.
pub fn emit(report: &Report, cfg: &RunConfig) -> Result<(), CliError> {
    let (main, side) = match cfg.format() {
        Format::Csv => (
            report.table.to_csv()?,
            report.summary.as_ref().map(pretty),
        ),
        Format::Json => {
            let mut doc = json!({
                "schema_version": SCHEMA_VERSION,
                "rows": report.table.to_json()?,
            });
            if let Some(s) = &report.summary {
                doc["summary"] = s.clone();
            }
            (pretty(&doc), None)
        }
    };
    match &cfg.output.path {
        Some(path) => {
            write_file(path, &main)?;
            if let Some(side) = side {
                write_file(&sidecar_path(path), &side)?;
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(main.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
            if let Some(side) = side {
                eprint!("{side}");
            }
        }
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Exponents { common } => {
            let mut cfg = merged_config(&common)?;
            if !common.xi.is_empty() {
                cfg.xi_list = common.xi.clone();
            }
            emit(&cmd_exponents(&cfg.xi_list)?, &cfg)
        }
        Command::Sumrule { common, m_max, a } => {
            let mut cfg = merged_config(&common)?;
            if let Some(m) = m_max {
                cfg.m_max = m;
            }
            if !a.is_empty() {
                cfg.a_list = a;
            }
            emit(&cmd_sumrule(cfg.m_max, &cfg.a_list)?, &cfg)
        }
        Command::Spectral {
            common,
            bins_per_decade,
            max_offset,
            omega_sign,
        } => {
            let mut cfg = merged_config(&common)?;
            if let Some(b) = bins_per_decade {
                cfg.bins_per_decade = b;
            }
            if max_offset.is_some() {
                cfg.max_offset = max_offset;
            }
            if let Some(s) = omega_sign {
                cfg.omega_sign = Some(match s {
                    SignArg::Positive => OmegaSign::Positive,
                    SignArg::Negative => OmegaSign::Negative,
                });
            }
            let xis = xi_scan(&common, &cfg);
            emit(&cmd_spectral(&cfg, &xis)?, &cfg)
        }
        Command::Shiftcheck { common, p, a } => {
            let mut cfg = merged_config(&common)?;
            if !p.is_empty() {
                cfg.p_list = p;
            }
            if let Some(a) = a {
                cfg.shift_a = a;
            }
            emit(&cmd_shiftcheck(&cfg.p_list, cfg.shift_a)?, &cfg)
        }
        Command::Dsf { common } => {
            let cfg = merged_config(&common)?;
            let xis = xi_scan(&common, &cfg);
            emit(&cmd_dsf(&cfg, &xis)?, &cfg)
        }
    }
}

/// Parses arguments, runs, reports errors on stderr and returns the exit
/// code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("nlll: {e}");
            e.exit_code()
        }
    }
}

/// Sizes the global worker pool from `NLLL_THREADS`, if set.
pub fn init_threads_from_env() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("NLLL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("NLLL_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot size thread pool: {e}")))
}
