//! `wtc`: tree groups, their exact sequences and intersection forests from
//! the command line.

mod commands;
mod forest;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use wtc_core::tautower::{TauCache, TauKind};

use crate::report::Report;

#[derive(Parser)]
#[command(name = "wtc", version, about = "Tree groups of Whitney towers")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Cache directory; overrides WTC_CACHE_DIR.
    #[arg(long, global = true, conflicts_with = "no_cache")]
    cache_dir: Option<PathBuf>,
    /// Keep presentations in memory only.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Kind {
    Framed,
    Reduced,
    Twisted,
}

impl From<Kind> for TauKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Framed => TauKind::Framed,
            Kind::Reduced => TauKind::Reduced,
            Kind::Twisted => TauKind::Twisted,
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
pub enum SchemeArg {
    #[default]
    Standard,
    SixTerm,
}

#[derive(Subcommand)]
enum Command {
    /// Structure and generators of one tree group.
    Group {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(short)]
        m: usize,
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum, default_value_t)]
        scheme: SchemeArg,
        /// List every generator in text output.
        #[arg(long)]
        generators: bool,
    },
    /// The doubling map on trees of one order.
    Delta {
        #[arg(short)]
        m: usize,
        /// Order of the input trees; the image lies in order 2p+1.
        #[arg(short, long)]
        p: usize,
        /// A single tree instead of every generator.
        #[arg(long)]
        tree: Option<String>,
    },
    /// The isomorphism onto the quasi-Lie bracket kernel.
    Levine {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        n: usize,
        /// Seconds before giving up with exit code 3.
        #[arg(long, default_value_t = 600)]
        timeout: u64,
    },
    /// The exact sequences relating framed and twisted groups.
    #[command(group(ArgGroup::new("parity").required(true).args(["even", "odd"])))]
    Sequences {
        #[arg(long)]
        even: bool,
        #[arg(long)]
        odd: bool,
        #[arg(short)]
        m: usize,
        #[arg(short)]
        k: usize,
    },
    /// Free Lie ranks and bracket kernel ranks.
    Witt {
        #[arg(short)]
        m: usize,
        #[arg(long)]
        max_n: usize,
    },
    /// Intersection forests: evaluate, move, decide raisability, replay.
    Forest {
        #[command(subcommand)]
        action: forest::Action,
    },
    /// The full acceptance suite.
    Selftest {
        /// Run a single criterion.
        #[arg(long)]
        only: Option<u32>,
    },
}

/// Why a command did not produce a report.
pub enum Failure {
    Usage(String),
    Timeout(u64),
    Other(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Other(e.into())
    }
}

pub type Outcome = Result<Report, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = Arc::new(if cli.no_cache {
        TauCache::in_memory()
    } else if let Some(dir) = &cli.cache_dir {
        TauCache::on_disk(dir)
    } else {
        TauCache::from_env()
    });
    let cache_param = cache.dir().map(|d| d.display().to_string());
    let start = Instant::now();
    let outcome = match cli.command {
        Command::Group { kind, m, n, scheme, generators } => commands::group(&cache, kind, m, n, scheme, generators),
        Command::Delta { m, p, tree } => commands::delta(&cache, m, p, tree.as_deref()),
        Command::Levine { m, n, timeout } => commands::levine(cache.clone(), m, n, timeout),
        Command::Sequences { even, m, k, .. } => commands::sequences(&cache, even, m, k),
        Command::Witt { m, max_n } => commands::witt(m, max_n),
        Command::Forest { action } => forest::run(&cache, action),
        Command::Selftest { only } => commands::selftest(&cache, only),
    };
    match outcome {
        Ok(mut report) => {
            report.parameters.insert("cache".into(), serde_json::to_value(&cache_param).unwrap_or_default());
            report.wall_seconds = start.elapsed().as_secs_f64();
            match cli.format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", report.to_json()),
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("wtc: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Timeout(s)) => {
            eprintln!("wtc: gave up after {s}s");
            ExitCode::from(3)
        }
        Err(Failure::Other(e)) => {
            eprintln!("wtc: {e:#}");
            ExitCode::from(1)
        }
    }
}
