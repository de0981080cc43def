//! Intersection forests and the moves that rewrite them.
//!
//! A forest is a multiset of signed unrooted trees, one per unpaired
//! intersection point, together with a multiset of twisted rooted trees
//! `ω·J^∞`, one per twisted Whitney disk. Nothing cancels at this level;
//! cancellation only happens after evaluating into a tree group.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::abgroup::hex;
use crate::tautower::{Combination, TauElement, TauError, TauGenerator, TauGroup, TauKind};
use crate::trees::{canonicalize_rooted, RootedTree, TreeError, UnrootedTree};
use crate::Int;

mod moves;

pub use moves::{boundary_disk, replay, Move, MoveRecord};

#[derive(Debug, Error)]
pub enum ForestError {
    #[error("invalid forest: {0}")]
    Invalid(String),
    #[error("no twist entry {0}")]
    MissingEntry(String),
    #[error("twisted IHX needs a twist of ±1, found {0}; split first")]
    NotUnit(i64),
    #[error("{0}")]
    KindMismatch(String),
    #[error("replay diverged at step {step}: expected {expected}, found {found}")]
    ReplayMismatch { step: usize, expected: String, found: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Tau(#[from] TauError),
}

/// One unpaired intersection point `ε·t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedTree {
    pub sign: i64,
    pub tree: UnrootedTree,
}

/// One twisted Whitney disk `ω·J^∞`, with `ω ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Twist {
    pub omega: i64,
    pub rooted: RootedTree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ForestDoc")]
pub struct IntersectionForest {
    pub m: usize,
    trees: Vec<SignedTree>,
    twists: Vec<Twist>,
}

#[derive(Deserialize)]
struct ForestDoc {
    m: usize,
    #[serde(default)]
    trees: Vec<SignedTree>,
    #[serde(default)]
    twists: Vec<Twist>,
}

impl TryFrom<ForestDoc> for IntersectionForest {
    type Error = ForestError;

    fn try_from(doc: ForestDoc) -> Result<Self, ForestError> {
        IntersectionForest::new(doc.m, doc.trees, doc.twists)
    }
}

impl IntersectionForest {
    pub fn new(m: usize, trees: Vec<SignedTree>, twists: Vec<Twist>) -> Result<Self, ForestError> {
        let f = IntersectionForest { m, trees, twists };
        f.validate()?;
        Ok(f)
    }

    pub fn empty(m: usize) -> Self {
        IntersectionForest { m, trees: Vec::new(), twists: Vec::new() }
    }

    /// `|c|` copies of `sign(c)·g` for every term `c·g`.
    pub fn from_combination(m: usize, c: &Combination) -> Result<Self, ForestError> {
        let mut f = IntersectionForest::empty(m);
        for (g, coeff) in c.iter() {
            let k = i64::try_from(coeff).map_err(|_| ForestError::Invalid(format!("coefficient {coeff} too large")))?;
            match g {
                TauGenerator::Tree(t) => {
                    for _ in 0..k.unsigned_abs() {
                        f.trees.push(SignedTree { sign: k.signum(), tree: t.to_unrooted() });
                    }
                }
                TauGenerator::Inf(j) => f.twists.push(Twist { omega: k, rooted: j.tree().clone() }),
            }
        }
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<(), ForestError> {
        if self.m == 0 {
            return Err(ForestError::Invalid("m must be at least 1".into()));
        }
        let m = self.m as u32;
        for e in &self.trees {
            if e.sign.abs() != 1 {
                return Err(ForestError::Invalid(format!("sign of {} must be ±1, got {}", e.tree, e.sign)));
            }
            e.tree.check_labels(m)?;
        }
        for e in &self.twists {
            if e.omega == 0 {
                return Err(ForestError::Invalid(format!("twist entry {} has ω = 0", e.rooted)));
            }
            e.rooted.check_labels(m)?;
        }
        Ok(())
    }

    pub fn trees(&self) -> &[SignedTree] {
        &self.trees
    }

    pub fn twists(&self) -> &[Twist] {
        &self.twists
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty() && self.twists.is_empty()
    }

    pub fn with_tree(mut self, sign: i64, tree: UnrootedTree) -> Result<Self, ForestError> {
        self.trees.push(SignedTree { sign, tree });
        self.validate()?;
        Ok(self)
    }

    pub fn with_twist(mut self, omega: i64, rooted: RootedTree) -> Result<Self, ForestError> {
        self.twists.push(Twist { omega, rooted });
        self.validate()?;
        Ok(self)
    }

    /// Entries in a fixed order, so equal multisets compare and hash equal.
    pub fn sorted(&self) -> IntersectionForest {
        let mut out = self.clone();
        out.trees.sort_by_cached_key(|e| (e.tree.to_string(), e.sign));
        out.twists.sort_by_cached_key(|e| (e.rooted.to_string(), e.omega));
        out
    }

    pub fn same_multiset(&self, other: &IntersectionForest) -> bool {
        self.sorted() == other.sorted()
    }

    /// SHA-256 of the sorted forest's JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(&self.sorted()).expect("forests serialize");
        hex(&Sha256::digest(json.as_bytes()))
    }

    /// Entry counts keyed by their textual form: trees as `"+<1,2>"`,
    /// twists as `"2 inf(1,2)"`.
    pub fn multiset(&self) -> BTreeMap<String, i64> {
        let mut out = BTreeMap::new();
        for e in &self.trees {
            *out.entry(format!("{}{}", if e.sign > 0 { '+' } else { '-' }, e.tree)).or_insert(0) += 1;
        }
        for e in &self.twists {
            *out.entry(format!("{} inf{}", e.omega, e.rooted)).or_insert(0) += 1;
        }
        out
    }

    pub(crate) fn push_tree(&mut self, sign: i64, tree: UnrootedTree) {
        self.trees.push(SignedTree { sign, tree });
    }

    pub(crate) fn push_twist(&mut self, omega: i64, rooted: RootedTree) {
        self.twists.push(Twist { omega, rooted });
    }

    /// Index of the first twist entry on the class of `j`, optionally with a
    /// given `ω`. `J^∞` carries no orientation, so classes match up to sign.
    pub(crate) fn find_twist(&self, j: &RootedTree, omega: Option<i64>) -> Option<usize> {
        let class = canonicalize_rooted(j).0;
        self.twists.iter().position(|e| omega.is_none_or(|w| w == e.omega) && canonicalize_rooted(&e.rooted).0 == class)
    }

    pub(crate) fn twists_mut(&mut self) -> &mut Vec<Twist> {
        &mut self.twists
    }
}

impl fmt::Display for IntersectionForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        let mut parts: Vec<String> =
            self.trees.iter().map(|e| format!("{}{}", if e.sign > 0 { '+' } else { '-' }, e.tree)).collect();
        parts.extend(self.twists.iter().map(|e| format!("{}·inf{}", e.omega, e.rooted)));
        write!(f, "{}", parts.join(" ⊔ "))
    }
}

/// `Σ εₚ·tₚ` over trees of order `n`, plus `Σ ω·J^∞` over twists of order
/// `n/2` when the group is twisted and `n` is even. Entries of any other
/// order are ignored.
///
/// Framed and reduced groups have no `∞` generators, so a twist of order
/// `n/2` is a mismatch rather than something to drop.
pub fn tau_of<'g>(f: &IntersectionForest, group: &'g TauGroup) -> Result<TauElement<'g>, ForestError> {
    if f.m != group.m() {
        return Err(ForestError::KindMismatch(format!("forest on {} components, group on {}", f.m, group.m())));
    }
    let n = group.n();
    let mut c = Combination::new();
    for e in f.trees.iter().filter(|e| e.tree.order() == n) {
        c.add_tree(&e.tree, e.sign);
    }
    if n.is_multiple_of(2) {
        for e in f.twists.iter().filter(|e| 2 * e.rooted.order() == n) {
            if group.kind() != TauKind::Twisted {
                return Err(ForestError::KindMismatch(format!(
                    "twist {}·inf{} has order {} but the {} group has no twisted generators",
                    e.omega,
                    e.rooted,
                    n / 2,
                    group.kind()
                )));
            }
            c.add_inf(&e.rooted, e.omega);
        }
    }
    Ok(group.element(&c)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Raisability {
    pub raisable: bool,
    /// Relator coefficients whose sum is `τ(F)`, when it vanishes.
    pub certificate: Option<Vec<Int>>,
}

/// Whether `τ(F)` vanishes in `group`, the algebraic condition for raising
/// the order of the underlying tower. Against a reduced group this is the
/// `im Δ` criterion, since `Δ` is among its relators.
pub fn is_raisable(f: &IntersectionForest, group: &TauGroup) -> Result<Raisability, ForestError> {
    let certificate = tau_of(f, group)?.zero_certificate()?;
    Ok(Raisability { raisable: certificate.is_some(), certificate })
}
