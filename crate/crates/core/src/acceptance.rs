//! End-to-end checks over the whole engine, one [`Criterion`] per claim.
//!
//! Each criterion runs a fixed batch of exact computations and reports one
//! [`Check`] per sub-claim. A criterion passes when every check passes and
//! it finishes inside its time budget.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::forest::{boundary_disk, is_raisable, tau_of, IntersectionForest, Move};
use crate::lie::{free_lie, squaring_map, verify_levine_iso_with, witt_number, LieElement};
use crate::tautower::{
    check_delta_in_boundary_twist_span, delta, delta_of, ihx_relators, verify_sequence_even, verify_sequence_odd,
    TauCache, TauGroup, TauKind,
};
use crate::trees::{
    canonicalize_rooted, enumerate_unrooted, ihx_split, inner_product, rooted_internal_edges, unrooted_ihx, RootedTree,
    UnrootedTree,
};
use crate::{Check, Int};

/// The outcome of one criterion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Criterion {
    pub id: u32,
    pub title: String,
    pub pass: bool,
    pub seconds: f64,
    pub limit_seconds: f64,
    pub checks: Vec<Check>,
}

impl Criterion {
    /// One line: verdict, id, title, time against budget.
    pub fn summary(&self) -> String {
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        format!(
            "[{}] criterion {:>2}: {} ({} checks, {} failed, {:.2}s of {:.0}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.checks.len(),
            failed,
            self.seconds,
            self.limit_seconds
        )
    }
}

type Body = fn(&TauCache) -> Vec<Check>;

/// `(id, title, budget in seconds, body)` for every criterion.
pub const CRITERIA: [(u32, &str, f64, Body); 10] = [
    (1, "order zero framed groups are free of rank m(m+1)/2", 1.0, linking_numbers),
    (2, "order one groups", 5.0, order_one),
    (3, "rank law against Witt numbers", 300.0, rank_law),
    (4, "eta' is an isomorphism onto D'", 600.0, levine),
    (5, "even exact sequence", 600.0, even_sequences),
    (6, "odd sequence kernel", 600.0, odd_sequences),
    (7, "doubling map", 120.0, doubling),
    (8, "six-term and twisted-IHX presentations agree", 300.0, presentations),
    (9, "forest moves", 120.0, forest_moves),
    (10, "Lie infrastructure", 120.0, lie_infrastructure),
];

/// Runs `body` and times it against `limit_seconds`.
pub fn run(id: u32, title: &str, limit_seconds: f64, body: impl FnOnce() -> Vec<Check>) -> Criterion {
    let start = Instant::now();
    let checks = body();
    let seconds = start.elapsed().as_secs_f64();
    let pass = !checks.is_empty() && crate::all_pass(&checks) && seconds <= limit_seconds;
    Criterion { id, title: title.to_string(), pass, seconds, limit_seconds, checks }
}

pub fn run_one(cache: &TauCache, id: u32) -> Option<Criterion> {
    CRITERIA.iter().find(|c| c.0 == id).map(|&(id, title, limit, body)| run(id, title, limit, || body(cache)))
}

pub fn run_all(cache: &TauCache) -> Vec<Criterion> {
    CRITERIA.iter().map(|&(id, title, limit, body)| run(id, title, limit, || body(cache))).collect()
}

/// An error becomes a failing check instead of aborting the criterion.
fn attempt(name: impl Into<String>, f: impl FnOnce() -> Result<Check, String>) -> Check {
    let name = name.into();
    match f() {
        Ok(c) => c,
        Err(e) => Check::new(name, false, format!("error: {e}")),
    }
}

fn structure_is(cache: &TauCache, kind: TauKind, m: usize, n: usize, expect: &str) -> Check {
    let name = format!("{kind} T_{n}({m}) = {expect}");
    attempt(name.clone(), || {
        let g = cache.get(kind, m, n).map_err(|e| e.to_string())?;
        let s = g.structure().to_string();
        Ok(Check::new(name, s == expect, s))
    })
}

fn linking_numbers(cache: &TauCache) -> Vec<Check> {
    (1..=4)
        .map(|m| {
            let k = m * (m + 1) / 2;
            let expect = if k == 1 { "Z".to_string() } else { format!("Z^{k}") };
            structure_is(cache, TauKind::Framed, m, 0, &expect)
        })
        .collect()
}

/// Expected structures of the order-one groups, as `(kind, m, structure)`.
pub const ORDER_ONE: [(TauKind, usize, &str); 6] = [
    (TauKind::Framed, 1, "Z2"),
    (TauKind::Twisted, 1, "0"),
    (TauKind::Framed, 2, "(Z2)^4"),
    (TauKind::Reduced, 2, "(Z2)^3"),
    (TauKind::Twisted, 2, "0"),
    (TauKind::Twisted, 3, "Z"),
];

fn order_one(cache: &TauCache) -> Vec<Check> {
    ORDER_ONE.iter().map(|&(kind, m, s)| structure_is(cache, kind, m, 1, s)).collect()
}

fn rank_law(cache: &TauCache) -> Vec<Check> {
    let mut out = Vec::new();
    for m in 1..=3 {
        for n in 0..=4 {
            let name = format!("rank T_{n}({m})");
            out.push(attempt(name.clone(), || {
                let g = cache.get(TauKind::Framed, m, n).map_err(|e| e.to_string())?;
                let rank = Int::from(g.structure().free_rank);
                let expect = Int::from(m) * witt_number(m, n + 1) - witt_number(m, n + 2);
                Ok(Check::new(name, rank == expect, format!("{rank} vs {m}·r{} − r{} = {expect}", n + 1, n + 2)))
            }));
        }
    }
    out
}

fn levine(cache: &TauCache) -> Vec<Check> {
    let cases = [(1, 0), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1), (2, 2), (2, 3), (3, 0), (3, 1), (3, 2)];
    cases
        .iter()
        .map(|&(m, n)| {
            let name = format!("T_{n}({m}) ≅ D'_{n}({m})");
            attempt(name.clone(), || {
                let g = cache.get(TauKind::Framed, m, n).map_err(|e| e.to_string())?;
                let r = verify_levine_iso_with(&g).map_err(|e| e.to_string())?;
                let failed: Vec<_> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
                let detail = if failed.is_empty() { format!("{}", r.d_prime) } else { failed.join(", ") };
                Ok(Check::new(name, r.pass(), detail))
            })
        })
        .collect()
}

fn even_sequences(cache: &TauCache) -> Vec<Check> {
    let cases = [(1, 0), (2, 0), (3, 0), (1, 1), (2, 1), (3, 1), (1, 2), (2, 2)];
    cases
        .iter()
        .map(|&(m, k)| {
            let name = format!("0 → T_{} → T^inf_{} → Z2⊗L'_{} → 0 at m = {m}", 2 * k, 2 * k, k + 1);
            attempt(name.clone(), || {
                let r = verify_sequence_even(cache, m, k).map_err(|e| e.to_string())?;
                let failed: Vec<_> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
                let detail =
                    if failed.is_empty() { format!("cokernel {}", r.groups["cokernel"]) } else { failed.join(", ") };
                Ok(Check::new(name, r.pass(), detail))
            })
        })
        .collect()
}

fn odd_sequences(cache: &TauCache) -> Vec<Check> {
    let cases = [(1, 1), (2, 1), (3, 1), (1, 2), (2, 2)];
    cases
        .iter()
        .map(|&(m, k)| {
            let name = format!("ker(reduced T_{n} → T^inf_{n}) ≅ Z2⊗L'_{} at m = {m}", k + 1, n = 2 * k - 1);
            attempt(name.clone(), || {
                let r = verify_sequence_odd(cache, m, k).map_err(|e| e.to_string())?;
                Ok(Check::new(name, r.pass(), format!("kernel {}", r.groups["kernel"])))
            })
        })
        .collect()
}

fn doubling(cache: &TauCache) -> Vec<Check> {
    let mut out = Vec::new();
    for m in 1..=3 {
        for p in 0..=2 {
            let n = 2 * p + 1;
            out.push(attempt(format!("2Δ = 0 in T_{n}({m})"), || {
                let g = cache.get(TauKind::Framed, m, n).map_err(|e| e.to_string())?;
                let classes = enumerate_unrooted(m, p).map_err(|e| e.to_string())?;
                let mut bad = Vec::new();
                for t in &classes {
                    let e = g.element(&delta(t)).map_err(|e| e.to_string())?;
                    if !e.scale(&Int::from(2)).is_zero().map_err(|e| e.to_string())? {
                        bad.push(t.to_string());
                    }
                }
                Ok(Check::new(
                    format!("2Δ = 0 in T_{n}({m})"),
                    bad.is_empty(),
                    format!("{} generators, failures {:?}", classes.len(), bad),
                ))
            }));
            out.push(attempt(format!("Δ kills relators of T_{p}({m})"), || {
                let g = cache.get(TauKind::Framed, m, n).map_err(|e| e.to_string())?;
                let rels = ihx_relators(m, p).map_err(|e| e.to_string())?.all();
                let mut bad = 0;
                for r in &rels {
                    let d = delta_of(r).map_err(|e| e.to_string())?;
                    if !g.element(&d).and_then(|e| e.is_zero()).map_err(|e| e.to_string())? {
                        bad += 1;
                    }
                }
                Ok(Check::new(
                    format!("Δ kills relators of T_{p}({m})"),
                    bad == 0,
                    format!("{} relators, {bad} failures", rels.len()),
                ))
            }));
            out.push(attempt(format!("im Δ ⊂ boundary twists in T^inf_{n}({m})"), || {
                let ok = check_delta_in_boundary_twist_span(cache, m, n).map_err(|e| e.to_string())?;
                Ok(Check::flag(format!("im Δ ⊂ boundary twists in T^inf_{n}({m})"), ok))
            }));
        }
    }
    out
}

fn presentations(cache: &TauCache) -> Vec<Check> {
    let mut out = Vec::new();
    for m in 1..=2 {
        for k in 0..=2 {
            let n = 2 * k;
            let name = format!("T^inf_{n}({m}) by both presentations");
            out.push(attempt(name.clone(), || {
                let a = cache.get(TauKind::Twisted, m, n).map_err(|e| e.to_string())?;
                let b = cache.get_sixterm(m, n).map_err(|e| e.to_string())?;
                let (sa, sb) = (a.structure(), b.structure());
                Ok(Check::new(name, *sa == *sb, format!("{sa} vs {sb}")))
            }));
        }
    }
    out
}

const MOVE_CASES: usize = 1000;
const MOVE_SEED: u64 = 0x5EED_F0E5;

fn forest_moves(cache: &TauCache) -> Vec<Check> {
    audit_moves(cache, MOVE_CASES, MOVE_SEED)
}

/// `cases` random forests per move, checking τ-invariance, locality, and
/// that `is_raisable` agrees with reduction with certificates that
/// re-multiply.
pub fn audit_moves(cache: &TauCache, cases: usize, seed: u64) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    for name in ["split", "boundary_twist", "interior_twist", "twisted_ihx", "framed_ihx_insert"] {
        let mut failure = None;
        for case in 0..cases {
            if let Err(e) = move_case(cache, &mut rng, name) {
                failure = Some(format!("case {case}: {e}"));
                break;
            }
        }
        let detail = failure.clone().unwrap_or_else(|| format!("{cases} cases"));
        out.push(Check::new(format!("{name} preserves tau and is local"), failure.is_none(), detail));
    }
    out
}

fn rand_rooted(rng: &mut StdRng, m: usize, k: usize) -> RootedTree {
    if k == 0 {
        return RootedTree::leaf(rng.random_range(1..=m as u32));
    }
    let a = rng.random_range(0..k);
    RootedTree::node(rand_rooted(rng, m, a), rand_rooted(rng, m, k - 1 - a))
}

fn rand_unrooted(rng: &mut StdRng, m: usize, n: usize) -> UnrootedTree {
    let a = rng.random_range(0..=n);
    inner_product(&rand_rooted(rng, m, a), &rand_rooted(rng, m, n - a))
}

fn rand_sign(rng: &mut StdRng) -> i64 {
    if rng.random_bool(0.5) {
        1
    } else {
        -1
    }
}

fn rand_forest(rng: &mut StdRng, m: usize, tree_orders: &[usize], twist_orders: &[usize]) -> IntersectionForest {
    let mut f = IntersectionForest::empty(m);
    for _ in 0..rng.random_range(0..4) {
        let n = tree_orders[rng.random_range(0..tree_orders.len())];
        let s = rand_sign(rng);
        f = f.with_tree(s, rand_unrooted(rng, m, n)).expect("labels in range");
    }
    for _ in 0..rng.random_range(0..4) {
        let k = twist_orders[rng.random_range(0..twist_orders.len())];
        let w = rand_sign(rng) * rng.random_range(1..=3);
        f = f.with_twist(w, rand_rooted(rng, m, k)).expect("labels in range");
    }
    f
}

type Counts = BTreeMap<String, i64>;

fn tree_key(sign: i64, t: &UnrootedTree) -> String {
    format!("{}{}", if sign > 0 { '+' } else { '-' }, t)
}

fn twist_key(omega: i64, j: &RootedTree) -> String {
    format!("{omega} inf{j}")
}

fn diff(before: &Counts, after: &Counts) -> Counts {
    let mut d = after.clone();
    for (k, v) in before {
        *d.entry(k.clone()).or_insert(0) -= v;
    }
    d.retain(|_, v| *v != 0);
    d
}

fn counts(entries: impl IntoIterator<Item = (String, i64)>) -> Counts {
    let mut out = Counts::new();
    for (k, v) in entries {
        *out.entry(k).or_insert(0) += v;
    }
    out.retain(|_, v| *v != 0);
    out
}

fn tree_counts(f: &IntersectionForest) -> Counts {
    counts(f.trees().iter().map(|e| (tree_key(e.sign, &e.tree), 1)))
}

/// Twists off the class of `j`, and the total twist on it.
fn split_twists(f: &IntersectionForest, j: &RootedTree) -> (Counts, i64) {
    let class = canonicalize_rooted(j).0;
    let (on, off): (Vec<_>, Vec<_>) = f.twists().iter().partition(|e| canonicalize_rooted(&e.rooted).0 == class);
    (counts(off.iter().map(|e| (twist_key(e.omega, &e.rooted), 1))), on.iter().map(|e| e.omega).sum())
}

fn first_on_class(f: &IntersectionForest, j: &RootedTree, omega: i64) -> RootedTree {
    let class = canonicalize_rooted(j).0;
    f.twists()
        .iter()
        .find(|e| e.omega == omega && canonicalize_rooted(&e.rooted).0 == class)
        .expect("entry was just added")
        .rooted
        .clone()
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, found: T, expect: T) -> Result<(), String> {
    if found == expect {
        Ok(())
    } else {
        Err(format!("{what}: found {found:?}, expected {expect:?}"))
    }
}

/// Checks the multiset change a move should make.
type LocalCheck = Box<dyn Fn(&IntersectionForest, &IntersectionForest) -> Result<(), String>>;

fn move_case(cache: &TauCache, rng: &mut StdRng, name: &str) -> Result<(), String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    let (group, f, mv, local): (_, IntersectionForest, Move, LocalCheck) = match name {
        "split" => {
            let (m, k) = (rng.random_range(1..=2), rng.random_range(1..=2));
            let w = rand_sign(rng) * rng.random_range(2..=4);
            let j = rand_rooted(rng, m, k);
            let f =
                rand_forest(rng, m, &[2 * k - 1, 2 * k], &[k - 1, k]).with_twist(w, j.clone()).map_err(|e| err(&e))?;
            let stored = first_on_class(&f, &j, w);
            let expect = counts([(twist_key(w, &stored), -1), (twist_key(w.signum(), &stored), w.abs())]);
            let local = move |a: &IntersectionForest, b: &IntersectionForest| {
                expect_eq("multiset change", diff(&a.multiset(), &b.multiset()), expect.clone())
            };
            (cache.get(TauKind::Twisted, m, 2 * k), f, Move::Split { rooted: j, omega: w }, Box::new(local))
        }
        "boundary_twist" | "interior_twist" => {
            let boundary = name == "boundary_twist";
            let (m, k) = (rng.random_range(1..=3), rng.random_range(1..=2));
            let eps = rand_sign(rng);
            let f = rand_forest(rng, m, &[2 * k - 1, 2 * k], &[k - 1, k]);
            let (disk, tree, sign, change, n) = if boundary {
                let j = rand_rooted(rng, m, k - 1);
                let disk = boundary_disk(rng.random_range(1..=m as u32), &j);
                let tree = inner_product(&disk, &j);
                (disk.clone(), tree, -eps, eps, 2 * k - 1)
            } else {
                let j = rand_rooted(rng, m, k);
                (j.clone(), inner_product(&j, &j), eps, -2 * eps, 2 * k)
            };
            let mv = if boundary {
                Move::BoundaryTwist { rooted: disk.clone(), epsilon: eps }
            } else {
                Move::InteriorTwist { rooted: disk.clone(), epsilon: eps }
            };
            let local = move |a: &IntersectionForest, b: &IntersectionForest| {
                expect_eq("tree change", diff(&tree_counts(a), &tree_counts(b)), counts([(tree_key(sign, &tree), 1)]))?;
                let (off_a, on_a) = split_twists(a, &disk);
                let (off_b, on_b) = split_twists(b, &disk);
                expect_eq("other twists", off_b, off_a)?;
                expect_eq("twist on the disk", on_b, on_a + change)
            };
            (cache.get(TauKind::Twisted, m, n), f, mv, Box::new(local))
        }
        "twisted_ihx" => {
            let m = rng.random_range(1..=3);
            let w = rand_sign(rng);
            let i = rand_rooted(rng, m, 2);
            let f = rand_forest(rng, m, &[3, 4], &[1, 2]).with_twist(w, i.clone()).map_err(|e| err(&e))?;
            let (h, x) = ihx_split(&i, &rooted_internal_edges(&i)[0]).map_err(|e| err(&e))?;
            let stored = first_on_class(&f, &i, w);
            let expect = counts([
                (twist_key(w, &stored), -1),
                (twist_key(w, &h), 1),
                (twist_key(w, &x), 1),
                (tree_key(-w, &inner_product(&h, &x)), 1),
            ]);
            let local = move |a: &IntersectionForest, b: &IntersectionForest| {
                expect_eq("multiset change", diff(&a.multiset(), &b.multiset()), expect.clone())
            };
            (cache.get(TauKind::Twisted, m, 4), f, Move::TwistedIhx { rooted: i, omega: w, edge: 0 }, Box::new(local))
        }
        _ => {
            let (m, n) = (rng.random_range(2..=3), rng.random_range(2..=3));
            let t = rand_unrooted(rng, m, n);
            let edge = rng.random_range(0..n - 1);
            let f = rand_forest(rng, m, &[n - 1, n, n + 1], &[n + 1]);
            let r = unrooted_ihx(&t, edge).map_err(|e| err(&e))?;
            let expect = counts([(tree_key(1, &r.i), 1), (tree_key(-1, &r.h), 1), (tree_key(1, &r.x), 1)]);
            let local = move |a: &IntersectionForest, b: &IntersectionForest| {
                expect_eq("multiset change", diff(&a.multiset(), &b.multiset()), expect.clone())
            };
            (cache.get(TauKind::Framed, m, n), f, Move::FramedIhxInsert { tree: t, edge }, Box::new(local))
        }
    };
    let group = group.map_err(|e| err(&e))?;
    let g = mv.apply(&f).map_err(|e| err(&e))?;
    local(&f, &g).map_err(|e| format!("{} on {f}: {e}", mv.name()))?;
    let before = tau_of(&f, &group).map_err(|e| err(&e))?;
    let after = tau_of(&g, &group).map_err(|e| err(&e))?;
    if !before.sub(&after).and_then(|d| d.is_zero()).map_err(|e| err(&e))? {
        return Err(format!("{} on {f} changed tau from {before} to {after}", mv.name()));
    }
    raisability_agrees(&f, &group)?;
    raisability_agrees(&g, &group)
}

fn raisability_agrees(f: &IntersectionForest, group: &TauGroup) -> Result<(), String> {
    let e = tau_of(f, group).map_err(|e| e.to_string())?;
    let r = is_raisable(f, group).map_err(|e| e.to_string())?;
    let zero = e.reduce().map_err(|e| e.to_string())?.is_zero();
    if r.raisable != zero {
        return Err(format!("is_raisable = {} but reduction says {zero} for {f}", r.raisable));
    }
    if let Some(cert) = r.certificate {
        let back = group.relators().left_mul_vec(&cert).map_err(|e| e.to_string())?;
        if back != e.coords() {
            return Err(format!("certificate for {f} does not reproduce {e}"));
        }
    }
    Ok(())
}

fn lie_infrastructure(_: &TauCache) -> Vec<Check> {
    let mut out = Vec::new();
    for m in 1..=4 {
        let lie = free_lie(m, 6);
        let sizes: Vec<usize> = (1..=6).map(|d| lie.hall().block(d).len()).collect();
        let witt: Vec<Int> = (1..=6).map(|d| witt_number(m, d)).collect();
        let ok = sizes.iter().zip(&witt).all(|(s, w)| Int::from(*s) == *w);
        out.push(Check::new(format!("Hall basis sizes for m = {m}"), ok, format!("{sizes:?}")));
    }
    for m in 1..=3 {
        out.push(attempt(format!("Jacobi and antisymmetry on Hall elements, m = {m}"), || {
            bracket_identities(m).map(|n| {
                Check::new(format!("Jacobi and antisymmetry on Hall elements, m = {m}"), true, format!("{n} instances"))
            })
        }));
    }
    for m in 1..=3 {
        for k in 1..=2 {
            let name = format!("squaring map onto the kernel, m = {m}, k = {k}");
            out.push(attempt(name.clone(), || {
                let r = squaring_map(m, k).map_err(|e| e.to_string())?;
                Ok(Check::new(name, r.pass(), format!("kernel {}", r.kernel)))
            }));
        }
    }
    out
}

/// Antisymmetry on Hall pairs and Jacobi on Hall triples up to total
/// degree four.
fn bracket_identities(m: usize) -> Result<usize, String> {
    const MAX: usize = 4;
    let lie = free_lie(m, MAX);
    let hall = lie.hall();
    let b = |x: &LieElement, y: &LieElement| lie.bracket(x, y).map_err(|e| e.to_string());
    let basis: Vec<usize> = (0..hall.len()).collect();
    let mut count = 0;
    for &i in &basis {
        for &j in &basis {
            let (x, y) = (LieElement::basis(i), LieElement::basis(j));
            let d = hall.degree(i) + hall.degree(j);
            if d > MAX {
                continue;
            }
            if b(&x, &y)? != b(&y, &x)?.neg() || (i == j && !b(&x, &x)?.is_zero()) {
                return Err(format!("antisymmetry fails on {} and {}", hall.tree(i), hall.tree(j)));
            }
            count += 1;
            for &k in &basis {
                if d + hall.degree(k) > MAX {
                    continue;
                }
                let z = LieElement::basis(k);
                let total = b(&x, &b(&y, &z)?)?.add(&b(&y, &b(&z, &x)?)?).add(&b(&z, &b(&x, &y)?)?);
                if !total.is_zero() {
                    return Err(format!("Jacobi fails on {}, {}, {}", hall.tree(i), hall.tree(j), hall.tree(k)));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}
