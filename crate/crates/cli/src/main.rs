//! `optoring`: runs one computation from a config file and writes CSV/JSON
//! results plus a manifest into an output directory.
//!
//! Exit codes: 0 ok, 1 I/O, 2 invalid config, 3 unstable, 4 no convergence.

// negated comparisons keep NaN on the rejecting side
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use config::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sub {
    Spectrum,
    Map,
    Linecut,
    Detuning,
    Device,
    OracleCompare,
    Modes,
}

impl Sub {
    pub fn name(self) -> &'static str {
        match self {
            Sub::Spectrum => "spectrum",
            Sub::Map => "map",
            Sub::Linecut => "linecut",
            Sub::Detuning => "detuning",
            Sub::Device => "device",
            Sub::OracleCompare => "oracle-compare",
            Sub::Modes => "modes",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "optoring", version, about = "Nonlinear spectra of a four-mode optomechanical ring")]
#[command(after_help = "Any config key can also be given as a flag, e.g. --params.delta-over-omega-m -1.5")]
struct Cli {
    /// Config file with `key = value` lines
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (OPTORING_OUT takes precedence)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    sub: Option<Sub>,
    /// Comma-separated subset of a,b,c,d,e
    #[arg(long)]
    processes: Option<String>,
    /// Worker threads, 0 for the default pool
    #[arg(long)]
    threads: Option<usize>,
    /// Also write plot.py
    #[arg(long)]
    plot: bool,
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Failure { code: 1, message: format!("{}: {e}", path.display()) }
    }
}

impl From<optoring::Error> for Failure {
    fn from(e: optoring::Error) -> Self {
        let code = match e {
            optoring::Error::Invalid(_) => 2,
            optoring::Error::Unstable(_) => 3,
            optoring::Error::NoConvergence(_) => 4,
        };
        Failure { code, message: e.to_string() }
    }
}

type Overrides = Vec<(String, String)>;

/// Pulls `--section.key value` (or `--section.key=value`) pairs out of argv;
/// everything else goes to clap.
fn split_dotted(args: Vec<String>) -> Result<(Vec<String>, Overrides), Failure> {
    let mut plain = Vec::new();
    let mut dotted = Vec::new();
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let is_dotted = a.starts_with("--") && a.split('=').next().is_some_and(|k| k.contains('.'));
        if !is_dotted {
            plain.push(a);
            continue;
        }
        match a.split_once('=') {
            Some((k, v)) => dotted.push((k.to_string(), v.to_string())),
            None => {
                let v = it.next().ok_or_else(|| Failure::invalid(format!("{a}: missing value")))?;
                dotted.push((a, v));
            }
        }
    }
    Ok((plain, dotted))
}

fn build_config(cli: &Cli, dotted: &[(String, String)]) -> Result<Config, Failure> {
    let mut cfg = Config::default();
    if let Some(path) = &cli.config {
        cfg.load_file(path)?;
    }
    for (k, v) in dotted {
        cfg.set(k, v, "command line")?;
    }
    if let Some(s) = cli.sub {
        cfg.set("run.subcommand", s.name(), "--sub")?;
    }
    if let Some(p) = &cli.processes {
        cfg.set("run.processes", p, "--processes")?;
    }
    if let Some(t) = cli.threads {
        cfg.set("run.threads", &t.to_string(), "--threads")?;
    }
    if cli.plot {
        cfg.set("run.plot", "true", "--plot")?;
    }
    if let Some(o) = &cli.out {
        cfg.set("run.out", &o.to_string_lossy(), "--out")?;
    }
    if let Ok(o) = std::env::var("OPTORING_OUT") {
        if !o.is_empty() {
            cfg.set("run.out", &o, "OPTORING_OUT")?;
        }
    }
    Ok(cfg)
}

fn run() -> Result<(), Failure> {
    let (plain, dotted) = split_dotted(std::env::args().collect())?;
    let cli = Cli::try_parse_from(plain).unwrap_or_else(|e| e.exit());
    let cfg = build_config(&cli, &dotted)?;
    let sub = Sub::from_str(cfg.raw("run.subcommand"), true)
        .map_err(|_| Failure::invalid(format!("run.subcommand: unknown subcommand `{}`", cfg.raw("run.subcommand"))))?;
    let threads = cfg.usize("run.threads")?;
    let result = optoring::par::with_threads(threads, || commands::run(sub, &cfg))?;
    output::write_all(&cfg, sub, &result)
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("optoring: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
