use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context as _;
use clap::{Subcommand, ValueEnum};
use serde_json::json;
use wtc_core::forest::{is_raisable, replay, tau_of, ForestError, IntersectionForest, Move, MoveRecord};
use wtc_core::tautower::{TauCache, TauKind};
use wtc_core::trees::{parse_rooted, parse_unrooted};
use wtc_core::{Check, Int};

use crate::commands::tau_failure;
use crate::report::Report;
use crate::{Failure, Kind, Outcome};

#[derive(Subcommand)]
pub enum Action {
    /// The class of the forest in a tree group.
    Eval {
        path: PathBuf,
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Kind::Framed)]
        kind: Kind,
    },
    /// Applies one move, writing the new forest and appending to the log.
    Move {
        path: PathBuf,
        #[arg(value_enum)]
        op: Op,
        /// Rooted tree of the twisted entry the move acts on.
        #[arg(long)]
        rooted: Option<String>,
        /// Unrooted tree for framed IHX insertion.
        #[arg(long)]
        tree: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        omega: Option<i64>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
        epsilon: i64,
        /// Index of the internal edge for IHX moves.
        #[arg(long, default_value_t = 0)]
        edge: usize,
        /// Output forest; defaults to `<stem>.next.json` beside the input.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Move log, one JSON record per line; defaults to `<stem>.log.jsonl`.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Whether the order-n class vanishes, with a relator certificate.
    Raisable {
        path: PathBuf,
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Kind::Framed)]
        kind: Kind,
    },
    /// Replays a move log from an initial forest, checking every hash.
    Replay {
        path: PathBuf,
        #[arg(long)]
        log: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Op {
    Split,
    BoundaryTwist,
    InteriorTwist,
    TwistedIhx,
    FramedIhxInsert,
}

pub fn run(cache: &TauCache, action: Action) -> Outcome {
    match action {
        Action::Eval { path, n, kind } => eval(cache, &path, n, kind.into()),
        Action::Raisable { path, n, kind } => raisable(cache, &path, n, kind.into()),
        Action::Move { path, op, rooted, tree, omega, epsilon, edge, out, log } => {
            let f = load(&path)?;
            let m = u32::try_from(f.m).map_err(|_| Failure::Usage("too many components".into()))?;
            let need =
                |s: Option<String>, flag: &str| s.ok_or_else(|| Failure::Usage(format!("this move needs --{flag}")));
            let rooted_arg = |s: Option<String>| -> Result<_, Failure> {
                parse_rooted(&need(s, "rooted")?, Some(m)).map_err(|e| Failure::Usage(e.to_string()))
            };
            let step = match op {
                Op::Split => Move::Split {
                    rooted: rooted_arg(rooted)?,
                    omega: omega.ok_or_else(|| Failure::Usage("split needs --omega".into()))?,
                },
                Op::BoundaryTwist => Move::BoundaryTwist { rooted: rooted_arg(rooted)?, epsilon },
                Op::InteriorTwist => Move::InteriorTwist { rooted: rooted_arg(rooted)?, epsilon },
                Op::TwistedIhx => Move::TwistedIhx { rooted: rooted_arg(rooted)?, omega: omega.unwrap_or(1), edge },
                Op::FramedIhxInsert => Move::FramedIhxInsert {
                    tree: parse_unrooted(&need(tree, "tree")?, Some(m)).map_err(|e| Failure::Usage(e.to_string()))?,
                    edge,
                },
            };
            apply(&path, &f, step, out, log)
        }
        Action::Replay { path, log } => replay_log(&path, &log),
    }
}

/// Reads and validates a forest; malformed input is a usage error that
/// names the line and column.
fn load(path: &Path) -> Result<IntersectionForest, Failure> {
    let src = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&src).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn forest_failure(e: ForestError) -> Failure {
    match e {
        ForestError::Tau(t) => tau_failure(t),
        e => Failure::Usage(e.to_string()),
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "forest".into());
    path.with_file_name(format!("{stem}{suffix}"))
}

fn eval(cache: &TauCache, path: &Path, n: usize, kind: TauKind) -> Outcome {
    let f = load(path)?;
    let g = cache.get(kind, f.m, n).map_err(tau_failure)?;
    let e = tau_of(&f, &g).map_err(forest_failure)?;
    let class = e.to_combination();
    let zero = e.is_zero().map_err(tau_failure)?;
    let nf = e.reduce().map_err(tau_failure)?;
    let mut r = Report::new("forest eval").param("path", path.display().to_string()).param("n", n).param("kind", kind);
    r.line(format!("F = {f}"));
    r.line(format!("τ_{n}(F) = {class} in {kind} T_{n}({}) = {}", f.m, g.structure()));
    r.line(if zero { "the class vanishes" } else { "the class is nonzero" });
    Ok(r.finish(json!({
        "hash": f.hash(),
        "class": class.to_string(),
        "zero": zero,
        "normal_form": nf,
        "group": g.structure().to_string(),
    })))
}

fn raisable(cache: &TauCache, path: &Path, n: usize, kind: TauKind) -> Outcome {
    let f = load(path)?;
    let g = cache.get(kind, f.m, n).map_err(tau_failure)?;
    let verdict = is_raisable(&f, &g).map_err(forest_failure)?;
    let mut r =
        Report::new("forest raisable").param("path", path.display().to_string()).param("n", n).param("kind", kind);
    r.line(format!("F = {f}"));
    r.line(format!("raisable past order {n} in {kind} T_{n}({}): {}", f.m, verdict.raisable));
    if let Some(cert) = &verdict.certificate {
        let used = cert.iter().filter(|c| **c != Int::from(0)).count();
        r.line(format!("certificate uses {used} of {} relators", cert.len()));
    }
    Ok(r.finish(json!({
        "hash": f.hash(),
        "raisable": verdict.raisable,
        "certificate": verdict.certificate.map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
    })))
}

fn apply(path: &Path, f: &IntersectionForest, step: Move, out: Option<PathBuf>, log: Option<PathBuf>) -> Outcome {
    let name = step.name();
    let (next, record) = step.record(f).map_err(forest_failure)?;
    let out = out.unwrap_or_else(|| sibling(path, ".next.json"));
    let log = log.unwrap_or_else(|| sibling(path, ".log.jsonl"));
    fs::write(&out, serde_json::to_string_pretty(&next)? + "\n")
        .with_context(|| format!("writing {}", out.display()))?;
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&log)
        .with_context(|| format!("opening {}", log.display()))?;
    writeln!(file, "{}", serde_json::to_string(&record)?)?;
    let mut r = Report::new("forest move")
        .param("path", path.display().to_string())
        .param("move", &record.step)
        .param("out", out.display().to_string())
        .param("log", log.display().to_string());
    r.line(format!("{name}: {f}"));
    r.line(format!("  ⇒ {next}"));
    r.line(format!("wrote {} and appended to {}", out.display(), log.display()));
    Ok(r.finish(json!({ "record": record, "forest": next })))
}

fn replay_log(path: &Path, log: &Path) -> Outcome {
    let f = load(path)?;
    let src = fs::read_to_string(log).map_err(|e| Failure::Usage(format!("{}: {e}", log.display())))?;
    let records = src
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str::<MoveRecord>(l)
                .map_err(|e| Failure::Usage(format!("{}:{}: {e}", log.display(), i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut r =
        Report::new("forest replay").param("path", path.display().to_string()).param("log", log.display().to_string());
    let outcome = replay(&f, &records);
    let result = match &outcome {
        Ok(end) => {
            r.line(format!("{} moves replayed, ending at {end}", records.len()));
            json!({ "moves": records.len(), "hash": end.hash(), "forest": end })
        }
        Err(e) => json!({ "moves": records.len(), "error": e.to_string() }),
    };
    r.check(Check::new(
        "every recorded hash matches",
        outcome.is_ok(),
        outcome.err().map(|e| e.to_string()).unwrap_or_default(),
    ));
    Ok(r.finish(result))
}
