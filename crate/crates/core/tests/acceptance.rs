//! Every acceptance criterion at its budget, one line each. Criteria 1, 2
//! and 10 are also checked against oracles that share no code with the
//! engine.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::process::ExitCode;

use wtc_core::acceptance::{run, CRITERIA, ORDER_ONE};
use wtc_core::lie::{free_lie, FreeLie, LieElement};
use wtc_core::tautower::{TauCache, TauKind};
use wtc_core::trees::RootedTree;
use wtc_core::Check;

/// `(free rank, invariant factors > 1)` of `ℤ^cols / rowspace(rows)`.
fn oracle_structure(mut a: Vec<Vec<i64>>, cols: usize) -> (usize, Vec<i64>) {
    let rows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let p = a[t][t];
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t] / p;
            if q != 0 {
                for j in t..cols {
                    a[i][j] -= q * a[t][j];
                }
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = a[t][j] / p;
            if q != 0 {
                for row in a.iter_mut() {
                    row[j] -= q * row[t];
                }
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0)) {
            for j in t..cols {
                a[t][j] += a[i][j];
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    let torsion = diag.iter().copied().filter(|&d| d > 1).collect();
    (cols - diag.len(), torsion)
}

/// Order-one trees are tripods: ordered triples up to rotation, negated by
/// a transposition. `⟨(i,j),j⟩` is the triple `(i,j,j)`, and the doubling
/// of `⟨i,j⟩` is `(i,j,j) + (j,i,i)`.
fn order_one_oracle(kind: TauKind, m: usize) -> (usize, Vec<i64>) {
    let index = |a: usize, b: usize, c: usize| ((a - 1) * m + (b - 1)) * m + (c - 1);
    let cols = m * m * m;
    let mut rows = Vec::new();
    let unit = |pairs: &[(usize, i64)]| {
        let mut r = vec![0i64; cols];
        for &(i, v) in pairs {
            r[i] += v;
        }
        r
    };
    for a in 1..=m {
        for b in 1..=m {
            for c in 1..=m {
                rows.push(unit(&[(index(a, b, c), 1), (index(b, c, a), -1)]));
                rows.push(unit(&[(index(a, b, c), 1), (index(b, a, c), 1)]));
            }
        }
    }
    for i in 1..=m {
        for j in 1..=m {
            match kind {
                TauKind::Twisted => rows.push(unit(&[(index(i, j, j), 1)])),
                TauKind::Reduced => rows.push(unit(&[(index(i, j, j), 1), (index(j, i, i), 1)])),
                TauKind::Framed => {}
            }
        }
    }
    oracle_structure(rows, cols)
}

fn engine_structure(cache: &TauCache, kind: TauKind, m: usize, n: usize) -> Result<(usize, Vec<i64>), String> {
    let g = cache.get(kind, m, n).map_err(|e| e.to_string())?;
    let s = g.structure();
    let torsion = s.torsion.iter().map(|t| i64::try_from(t).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    Ok((s.free_rank, torsion))
}

fn order_zero_oracle(cache: &TauCache) -> Vec<Check> {
    (1..=4)
        .map(|m| {
            let chords = (1..=m).flat_map(|i| (i..=m).map(move |j| (i, j))).count();
            let found = engine_structure(cache, TauKind::Framed, m, 0);
            Check::new(
                format!("oracle: T_0({m}) free on {chords} chords"),
                found == Ok((chords, vec![])),
                format!("{found:?}"),
            )
        })
        .collect()
}

fn order_one_oracles(cache: &TauCache) -> Vec<Check> {
    let mut out = Vec::new();
    for &(kind, m, _) in &ORDER_ONE {
        let expect = order_one_oracle(kind, m);
        let found = engine_structure(cache, kind, m, 1);
        out.push(Check::new(
            format!("oracle: {kind} T_1({m})"),
            found.as_ref() == Ok(&expect),
            format!("engine {found:?}, oracle {expect:?}"),
        ));
    }
    out
}

type Poly = BTreeMap<Vec<u32>, i64>;

fn word_poly(t: &RootedTree) -> Poly {
    match t {
        RootedTree::Leaf(l) => [(vec![l.0], 1)].into(),
        RootedTree::Node(a, b) => {
            let (p, q) = (word_poly(a), word_poly(b));
            let mut out = Poly::new();
            for (sign, (x, y)) in [(1, (&p, &q)), (-1, (&q, &p))] {
                for (u, c) in x {
                    for (v, d) in y {
                        let mut w = u.clone();
                        w.extend(v);
                        *out.entry(w).or_insert(0) += sign * c * d;
                    }
                }
            }
            out.retain(|_, c| *c != 0);
            out
        }
    }
}

fn element_poly(lie: &FreeLie, x: &LieElement) -> Poly {
    let mut out = Poly::new();
    for (i, c) in x.iter() {
        let c = i64::try_from(c).expect("small coefficient");
        for (w, d) in word_poly(lie.hall().tree(i)) {
            *out.entry(w).or_insert(0) += c * d;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `[h, h′]` for Hall elements up to total degree four, against the
/// commutator of their words.
fn bracket_oracle() -> Vec<Check> {
    (1..=3)
        .map(|m| {
            let lie = free_lie(m, 4);
            let hall = lie.hall();
            let mut bad = Vec::new();
            let mut count = 0;
            for i in 0..hall.len() {
                for j in 0..hall.len() {
                    if hall.degree(i) + hall.degree(j) > 4 {
                        continue;
                    }
                    count += 1;
                    let b = lie.bracket(&LieElement::basis(i), &LieElement::basis(j)).expect("degree in range");
                    let node = RootedTree::node(hall.tree(i).clone(), hall.tree(j).clone());
                    if element_poly(&lie, &b) != word_poly(&node) {
                        bad.push(node.to_string());
                    }
                }
            }
            Check::new(
                format!("oracle: Hall brackets are commutators, m = {m}"),
                bad.is_empty(),
                format!("{count} pairs, failures {bad:?}"),
            )
        })
        .collect()
}

fn main() -> ExitCode {
    let cache = TauCache::in_memory();
    let mut failed = 0;
    for &(id, title, limit, body) in &CRITERIA {
        let c = run(id, title, limit, || {
            let mut checks = body(&cache);
            match id {
                1 => checks.extend(order_zero_oracle(&cache)),
                2 => checks.extend(order_one_oracles(&cache)),
                10 => checks.extend(bracket_oracle()),
                _ => {}
            }
            checks
        });
        println!("{}", c.summary());
        for check in c.checks.iter().filter(|c| !c.pass) {
            println!("    {check}");
        }
        if !c.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
