use std::sync::mpsc;
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use serde_json::{json, Value};
use wtc_core::acceptance::{run_all, run_one, CRITERIA};
use wtc_core::lie::{bracket_kernel, free_lie, verify_levine_iso_with, witt_number, LieError};
use wtc_core::tautower::{
    delta as doubling, verify_sequence_even, verify_sequence_odd, Scheme, TauCache, TauError, TauKind,
};
use wtc_core::trees::{canonicalize, enumerate_unrooted, parse_unrooted};
use wtc_core::{Check, Int};

use crate::report::Report;
use crate::{Failure, Kind, Outcome, SchemeArg};

/// Bad parameters are usage errors; anything else is a failure.
pub fn tau_failure(e: TauError) -> Failure {
    match e {
        TauError::InvalidParameters(s) => Failure::Usage(s),
        TauError::Lie(l) => lie_failure(*l),
        e => Failure::Other(e.into()),
    }
}

pub fn lie_failure(e: LieError) -> Failure {
    match e {
        LieError::InvalidParameters(s) => Failure::Usage(s),
        LieError::Tau(t) => tau_failure(*t),
        e => Failure::Other(e.into()),
    }
}

pub fn group(cache: &TauCache, kind: Kind, m: usize, n: usize, scheme: SchemeArg, list: bool) -> Outcome {
    let kind = TauKind::from(kind);
    let scheme = match scheme {
        SchemeArg::Standard => Scheme::Standard,
        SchemeArg::SixTerm => Scheme::SixTerm,
    };
    let (g, _) = cache.get_with(kind, scheme, m, n).map_err(tau_failure)?;
    let structure = g.structure();
    let generators: Vec<String> = g.generators().iter().map(|x| x.to_string()).collect();
    let mut r = Report::new("group").param("kind", kind).param("scheme", scheme).param("m", m).param("n", n);
    r.line(format!("{kind} T_{n}({m}) = {structure}"));
    r.line(format!("{} generators, {} relators", generators.len(), g.relators().nrows()));
    if list {
        for x in &generators {
            r.line(format!("  {x}"));
        }
    }
    Ok(r.finish(json!({
        "structure": structure.to_string(),
        "free_rank": structure.free_rank,
        "torsion": structure.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "generators": generators,
        "relators": g.relators().nrows(),
    })))
}

pub fn delta(cache: &TauCache, m: usize, p: usize, tree: Option<&str>) -> Outcome {
    let m32 = u32::try_from(m).map_err(|_| Failure::Usage(format!("m = {m} is too large")))?;
    let trees = match tree {
        Some(src) => {
            let t = parse_unrooted(src, Some(m32)).map_err(|e| Failure::Usage(e.to_string()))?;
            if t.order() != p {
                return Err(Failure::Usage(format!("{t} has order {}, not {p}", t.order())));
            }
            let (c, s) = canonicalize(&t);
            vec![(t.to_string(), c, s)]
        }
        None => enumerate_unrooted(m, p)
            .map_err(|e| Failure::Other(e.into()))?
            .into_iter()
            .map(|c| (c.to_string(), c, 1))
            .collect(),
    };
    let n = 2 * p + 1;
    let framed = cache.get(TauKind::Framed, m, n).map_err(tau_failure)?;
    let reduced = cache.get(TauKind::Reduced, m, n).map_err(tau_failure)?;
    let twisted = cache.get(TauKind::Twisted, m, n).map_err(tau_failure)?;
    let mut r = Report::new("delta").param("m", m).param("p", p).param("tree", tree);
    r.line(format!("Δ: T_{p}({m}) → T_{n}({m})"));
    let mut rows = Vec::new();
    let (mut doubled, mut in_reduced, mut in_twisted) = (Vec::new(), Vec::new(), Vec::new());
    for (name, c, s) in &trees {
        let d = doubling(c).scaled(&Int::from(*s));
        let e = framed.element(&d).map_err(tau_failure)?;
        let zero = e.is_zero().map_err(tau_failure)?;
        let nf = e.reduce().map_err(tau_failure)?;
        if !e.scale(&Int::from(2)).is_zero().map_err(tau_failure)? {
            doubled.push(name.clone());
        }
        if !reduced.element(&d).and_then(|x| x.is_zero()).map_err(tau_failure)? {
            in_reduced.push(name.clone());
        }
        if !twisted.element(&d).and_then(|x| x.is_zero()).map_err(tau_failure)? {
            in_twisted.push(name.clone());
        }
        r.line(format!("  Δ{name} = {d}{}", if zero { "  (zero)" } else { "" }));
        rows.push(json!({ "tree": name, "delta": d.to_string(), "zero": zero, "normal_form": nf }));
    }
    r.check(Check::new(format!("2Δ = 0 in framed T_{n}({m})"), doubled.is_empty(), format!("failures {doubled:?}")));
    r.check(Check::new(
        format!("Δ = 0 in reduced T_{n}({m})"),
        in_reduced.is_empty(),
        format!("failures {in_reduced:?}"),
    ));
    r.check(Check::new(
        format!("Δ = 0 in twisted T_{n}({m})"),
        in_twisted.is_empty(),
        format!("failures {in_twisted:?}"),
    ));
    Ok(r.finish(json!({ "order": n, "images": rows })))
}

pub fn levine(cache: Arc<TauCache>, m: usize, n: usize, timeout: u64) -> Outcome {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let out = cache
            .get(TauKind::Framed, m, n)
            .map_err(tau_failure)
            .and_then(|g| verify_levine_iso_with(&g).map_err(lie_failure));
        let _ = tx.send(out);
    });
    let report = match rx.recv_timeout(Duration::from_secs(timeout)) {
        Ok(out) => out?,
        Err(mpsc::RecvTimeoutError::Timeout) => return Err(Failure::Timeout(timeout)),
        Err(mpsc::RecvTimeoutError::Disconnected) => {
            return Err(Failure::Other(anyhow::anyhow!("the worker thread panicked")));
        }
    };
    let mut r = Report::new("levine").param("m", m).param("n", n).param("timeout", timeout);
    r.line(format!("T_{n}({m}) = {}", report.tau));
    r.line(format!("D'_{n}({m}) = {}", report.d_prime));
    for c in report.checks {
        r.check(c);
    }
    Ok(r.finish(json!({
        "tau": report.tau.to_string(),
        "d_prime": report.d_prime.to_string(),
        "rank": report.d_prime.free_rank,
    })))
}

pub fn sequences(cache: &TauCache, even: bool, m: usize, k: usize) -> Outcome {
    if !even && k == 0 {
        return Err(Failure::Usage("the odd sequence starts at k = 1".into()));
    }
    let seq =
        if even { verify_sequence_even(cache, m, k) } else { verify_sequence_odd(cache, m, k) }.map_err(tau_failure)?;
    let mut r = Report::new("sequences").param("parity", &seq.parity).param("m", m).param("k", k);
    if even {
        r.line(format!("0 → T_{n} → T^inf_{n} → Z2⊗L'_{} → 0 at m = {m}", k + 1, n = 2 * k));
    } else {
        r.line(format!("0 → Z2⊗L'_{} → reduced T_{n} → T^inf_{n} → 0 at m = {m}", k + 1, n = 2 * k - 1));
    }
    for (name, s) in &seq.groups {
        r.line(format!("  {name:<12} {s}"));
    }
    let groups: serde_json::Map<String, Value> =
        seq.groups.iter().map(|(name, s)| (name.clone(), Value::String(s.to_string()))).collect();
    for c in seq.checks {
        r.check(c);
    }
    Ok(r.finish(json!({ "groups": groups })))
}

/// `rₙ` for `n ≤ max_n + 2` and `rank Dₙ = m·rₙ₊₁ − rₙ₊₂` for `n ≤ max_n`,
/// against Hall enumeration and the bracket kernel.
pub fn witt(m: usize, max_n: usize) -> Outcome {
    if m == 0 {
        return Err(Failure::Usage("m must be at least 1".into()));
    }
    let top = max_n + 2;
    let r_of = |n: usize| witt_number(m, n);
    let lie = free_lie(m, top);
    let mut rep = Report::new("witt").param("m", m).param("max_n", max_n);
    let witt: Vec<Int> = (1..=top).map(r_of).collect();
    let hall: Vec<usize> = (1..=top).map(|d| lie.hall().block(d).len()).collect();
    let bad: Vec<usize> = (1..=top).filter(|&d| Int::from(hall[d - 1]) != witt[d - 1]).collect();
    rep.check(Check::new(
        format!("Hall sets count by Witt up to degree {top}"),
        bad.is_empty(),
        format!("mismatched degrees {bad:?}"),
    ));
    let mut d_ranks = Vec::new();
    let mut mismatched = Vec::new();
    rep.line(format!("{:>3} {:>12} {:>12}", "n", "r_n", "rank D_n"));
    for n in 0..=max_n {
        let d = Int::from(m) * r_of(n + 1) - r_of(n + 2);
        let kernel = bracket_kernel(m, n, false).map_err(lie_failure)?;
        if Int::from(kernel.structure.free_rank) != d {
            mismatched.push(n);
        }
        let r = if n == 0 { "-".to_string() } else { r_of(n).to_string() };
        rep.line(format!("{n:>3} {r:>12} {d:>12}"));
        d_ranks.push(d);
    }
    rep.check(Check::new(
        "bracket kernel ranks match m·r(n+1) − r(n+2)",
        mismatched.is_empty(),
        format!("mismatched n {mismatched:?}"),
    ));
    let strings = |v: &[Int]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    Ok(rep.finish(json!({ "witt": strings(&witt), "d_ranks": strings(&d_ranks) })))
}

pub fn selftest(cache: &TauCache, only: Option<u32>) -> Outcome {
    let criteria = match only {
        Some(id) => vec![run_one(cache, id)
            .ok_or_else(|| Failure::Usage(format!("no criterion {id}; there are {}", CRITERIA.len())))?],
        None => run_all(cache),
    };
    let mut r = Report::new("selftest").param("only", only);
    for c in &criteria {
        r.line(c.summary());
        for check in c.checks.iter().filter(|c| !c.pass) {
            r.line(format!("    {check}"));
        }
        r.check(Check::new(format!("criterion {}: {}", c.id, c.title), c.pass, format!("{:.2}s", c.seconds)));
    }
    Ok(r.finish(serde_json::to_value(&criteria)?))
}
