//! The tree groups `𝒯ₙ(m)`, the reduced `𝒯̃₂ₖ₋₁(m)` and the twisted
//! `𝒯^∞ₙ(m)`, presented over canonical tree classes.
//!
//! Columns are ordered trees first, then `∞`-trees, each block in canonical
//! order. Unrooted generators carry a sign under antisymmetry; `∞`-trees do
//! not, since `(−J)^∞ = J^∞`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::abgroup::{AbGroupError, IntMatrix, Presentation};
use crate::trees::{
    canonicalize, canonicalize_rooted, enumerate_rooted, enumerate_unrooted, parse_expr, CanonicalRootedTree,
    CanonicalTree, RootedTree, TreeError, TreeExpr, UnrootedTree,
};
use crate::{Element, Group, Int, Matrix, Structure};

mod cache;
mod delta;
mod relators;
mod sequences;

pub use cache::{cache_dir, TauCache, SCHEME_VERSION};
pub use delta::{delta, delta_of, delta_span};
pub use relators::{
    boundary_twist_relators, ihx_relators, interior_twist_relators, sixterm_relators, twisted_ihx_relators,
    TreeRelators,
};
pub use sequences::{check_delta_in_boundary_twist_span, verify_sequence_even, verify_sequence_odd, SequenceReport};

#[derive(Debug, Error)]
pub enum TauError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    AbGroup(#[from] AbGroupError),
    #[error("{0} is not a generator of this group")]
    UnknownGenerator(String),
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error(transparent)]
    Lie(#[from] Box<crate::lie::LieError>),
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache format: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<crate::lie::LieError> for TauError {
    fn from(e: crate::lie::LieError) -> Self {
        TauError::Lie(Box::new(e))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TauKind {
    Framed,
    /// Odd orders only: framed modulo the image of `Δ`.
    Reduced,
    /// Boundary-twist quotient in odd orders, `∞`-trees in even orders.
    Twisted,
}

impl fmt::Display for TauKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TauKind::Framed => "framed",
            TauKind::Reduced => "reduced",
            TauKind::Twisted => "twisted",
        })
    }
}

impl FromStr for TauKind {
    type Err = TauError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "framed" => Ok(TauKind::Framed),
            "reduced" => Ok(TauKind::Reduced),
            "twisted" => Ok(TauKind::Twisted),
            _ => Err(TauError::InvalidParameters(format!("unknown kind {s:?}"))),
        }
    }
}

/// Which relators encode the twisted-IHX part of an even twisted group.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    #[default]
    Standard,
    /// Six-term relators from the quadratic refinement.
    SixTerm,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TauGenerator {
    Tree(CanonicalTree),
    Inf(CanonicalRootedTree),
}

impl TauGenerator {
    pub fn is_inf(&self) -> bool {
        matches!(self, TauGenerator::Inf(_))
    }
}

/// `<…>` for trees, `inf…` for `∞`-trees; both parse back.
impl fmt::Display for TauGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauGenerator::Tree(t) => write!(f, "{t}"),
            TauGenerator::Inf(j) => write!(f, "inf{j}"),
        }
    }
}

impl FromStr for TauGenerator {
    type Err = TauError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| TauError::UnknownGenerator(format!("{s:?} ({why})"));
        match parse_expr(s, None).map_err(|e| bad(&e.to_string()))? {
            TreeExpr::Unrooted(t) => {
                let (c, sign) = canonicalize(&t);
                if c.to_unrooted() != t || sign != 1 {
                    return Err(bad("not canonical"));
                }
                Ok(TauGenerator::Tree(c))
            }
            TreeExpr::Inf(j) => {
                let (c, _) = canonicalize_rooted(&j);
                if *c.tree() != j {
                    return Err(bad("not canonical"));
                }
                Ok(TauGenerator::Inf(c))
            }
            TreeExpr::Rooted(_) => Err(bad("a rooted tree is not a generator")),
        }
    }
}

impl Serialize for TauGenerator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TauGenerator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Formal `ℤ`-combination of generators, kept free of zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Combination {
    terms: BTreeMap<TauGenerator, Int>,
}

impl Combination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, g: TauGenerator, coeff: Int) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(g.clone()).or_insert_with(Int::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&g);
        }
    }

    /// Adds `coeff · t`, folding in the antisymmetry sign of `t`.
    pub fn add_tree(&mut self, t: &UnrootedTree, coeff: impl Into<Int>) {
        let (c, sign) = canonicalize(t);
        self.add(TauGenerator::Tree(c), coeff.into() * sign);
    }

    pub fn add_inf(&mut self, j: &RootedTree, coeff: impl Into<Int>) {
        let (c, _) = canonicalize_rooted(j);
        self.add(TauGenerator::Inf(c), coeff.into());
    }

    pub fn add_combination(&mut self, other: &Combination, factor: &Int) {
        for (g, c) in &other.terms {
            self.add(g.clone(), c * factor);
        }
    }

    pub fn scaled(&self, factor: &Int) -> Combination {
        let mut out = Combination::new();
        out.add_combination(self, factor);
        out
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, g: &TauGenerator) -> Int {
        self.terms.get(g).cloned().unwrap_or_else(Int::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TauGenerator, &Int)> {
        self.terms.iter()
    }
}

impl FromIterator<(TauGenerator, Int)> for Combination {
    fn from_iter<I: IntoIterator<Item = (TauGenerator, Int)>>(iter: I) -> Self {
        let mut c = Combination::new();
        for (g, v) in iter {
            c.add(g, v);
        }
        c
    }
}

/// `0`, `<1,2>`, `2 inf(1,2) - <(1,2),(1,2)>`, …
impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (g, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// A tree group with its generator index.
#[derive(Debug)]
pub struct TauGroup {
    m: usize,
    n: usize,
    kind: TauKind,
    scheme: Scheme,
    generators: Vec<TauGenerator>,
    index: HashMap<TauGenerator, usize>,
    presentation: Group,
    recorded: OnceLock<Arc<Structure>>,
}

impl TauGroup {
    fn assemble(
        m: usize,
        n: usize,
        kind: TauKind,
        scheme: Scheme,
        generators: Vec<TauGenerator>,
        relators: &[Combination],
    ) -> Result<Self, TauError> {
        let index: HashMap<TauGenerator, usize> = generators.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        let mut rows = Vec::with_capacity(relators.len());
        for r in relators.iter().filter(|r| !r.is_empty()) {
            let mut row = Vec::with_capacity(r.len());
            for (g, c) in r.iter() {
                let col = *index.get(g).ok_or_else(|| TauError::UnknownGenerator(g.to_string()))?;
                row.push((col, c.clone()));
            }
            rows.push(row);
        }
        let matrix = IntMatrix::from_sparse_rows(generators.len(), rows)?;
        let names = generators.iter().map(ToString::to_string).collect();
        Ok(TauGroup {
            m,
            n,
            kind,
            scheme,
            generators,
            index,
            presentation: Presentation::new(names, matrix)?,
            recorded: OnceLock::new(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> TauKind {
        self.kind
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn generators(&self) -> &[TauGenerator] {
        &self.generators
    }

    pub fn presentation(&self) -> &Group {
        &self.presentation
    }

    pub fn relators(&self) -> &Matrix {
        &self.presentation.relators
    }

    pub fn index_of(&self, g: &TauGenerator) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Isomorphism type. A structure recorded in a cache file is returned
    /// as is; otherwise it is computed (and memoized by content).
    pub fn structure(&self) -> Arc<Structure> {
        match self.recorded.get() {
            Some(s) => s.clone(),
            None => self.presentation.structure(),
        }
    }

    pub fn zero(&self) -> TauElement<'_> {
        TauElement { group: self, coords: vec![Int::zero(); self.generators.len()] }
    }

    pub fn generator(&self, i: usize) -> Result<TauElement<'_>, TauError> {
        if i >= self.generators.len() {
            return Err(AbGroupError::IndexOutOfRange { index: i, len: self.generators.len() }.into());
        }
        let mut e = self.zero();
        e.coords[i] = Int::one();
        Ok(e)
    }

    pub fn element(&self, c: &Combination) -> Result<TauElement<'_>, TauError> {
        let mut e = self.zero();
        for (g, v) in c.iter() {
            let i = self.index_of(g).ok_or_else(|| TauError::UnknownGenerator(g.to_string()))?;
            e.coords[i] += v;
        }
        Ok(e)
    }

    pub fn element_from_coords(&self, coords: Vec<Int>) -> Result<TauElement<'_>, TauError> {
        if coords.len() != self.generators.len() {
            return Err(AbGroupError::DimensionMismatch { expected: self.generators.len(), found: coords.len() }.into());
        }
        Ok(TauElement { group: self, coords })
    }
}

/// An element of a [`TauGroup`] in generator coordinates.
#[derive(Clone, Debug)]
pub struct TauElement<'g> {
    group: &'g TauGroup,
    coords: Vec<Int>,
}

impl<'g> TauElement<'g> {
    pub fn group(&self) -> &'g TauGroup {
        self.group
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    fn same_group(&self, other: &TauElement<'_>) -> Result<(), TauError> {
        if std::ptr::eq(self.group, other.group) {
            Ok(())
        } else {
            Err(TauError::GroupMismatch)
        }
    }

    pub fn add(&self, other: &TauElement<'_>) -> Result<TauElement<'g>, TauError> {
        self.same_group(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(TauElement { group: self.group, coords })
    }

    pub fn sub(&self, other: &TauElement<'_>) -> Result<TauElement<'g>, TauError> {
        self.add(&other.scale(&-Int::one()))
    }

    pub fn scale(&self, k: &Int) -> TauElement<'g> {
        TauElement { group: self.group, coords: self.coords.iter().map(|a| a * k).collect() }
    }

    pub fn reduce(&self) -> Result<Element, TauError> {
        Ok(self.group.presentation.reduce(&self.coords)?)
    }

    pub fn is_zero(&self) -> Result<bool, TauError> {
        Ok(self.reduce()?.is_zero())
    }

    /// Relator coefficients summing to this element, when it vanishes.
    pub fn zero_certificate(&self) -> Result<Option<Vec<Int>>, TauError> {
        Ok(self.group.presentation.zero_certificate(&self.coords)?)
    }

    pub fn to_combination(&self) -> Combination {
        self.group.generators.iter().cloned().zip(self.coords.iter().cloned()).collect()
    }
}

impl fmt::Display for TauElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_combination().fmt(f)
    }
}

fn check_m(m: usize) -> Result<(), TauError> {
    if m == 0 {
        return Err(TauError::InvalidParameters("m must be at least 1".into()));
    }
    Ok(())
}

fn tree_generators(m: usize, n: usize) -> Result<Vec<TauGenerator>, TauError> {
    Ok(enumerate_unrooted(m, n)?.into_iter().map(TauGenerator::Tree).collect())
}

/// `𝒯ₙ(m)`: order-`n` trees modulo AS and IHX.
pub fn build_tau(m: usize, n: usize) -> Result<TauGroup, TauError> {
    check_m(m)?;
    let gens = tree_generators(m, n)?;
    let rel = ihx_relators(m, n)?;
    TauGroup::assemble(m, n, TauKind::Framed, Scheme::Standard, gens, &rel.all())
}

/// `𝒯̃ₙ(m)` for odd `n`: `𝒯ₙ(m)` modulo `Δ` of every order-`(n−1)/2` tree.
pub fn build_tau_reduced(m: usize, n: usize) -> Result<TauGroup, TauError> {
    check_m(m)?;
    if n.is_multiple_of(2) {
        return Err(TauError::InvalidParameters(format!("reduced groups need odd order, got {n}")));
    }
    let gens = tree_generators(m, n)?;
    let mut rel = ihx_relators(m, n)?.all();
    rel.extend(delta_span(m, (n - 1) / 2)?);
    TauGroup::assemble(m, n, TauKind::Reduced, Scheme::Standard, gens, &rel)
}

/// `𝒯^∞ₙ(m)`, dispatching on the parity of `n`.
pub fn build_tau_twisted(m: usize, n: usize) -> Result<TauGroup, TauError> {
    check_m(m)?;
    if n % 2 == 1 {
        let gens = tree_generators(m, n)?;
        let mut rel = ihx_relators(m, n)?.all();
        rel.extend(boundary_twist_relators(m, n)?);
        return TauGroup::assemble(m, n, TauKind::Twisted, Scheme::Standard, gens, &rel);
    }
    build_twisted_even(m, n, Scheme::Standard)
}

/// `𝒯^∞ₙ(m)` for even `n` with six-term relators in place of twisted IHX.
pub fn build_tau_twisted_sixterm(m: usize, n: usize) -> Result<TauGroup, TauError> {
    check_m(m)?;
    if n % 2 == 1 {
        return Err(TauError::InvalidParameters(format!("six-term presentation needs even order, got {n}")));
    }
    build_twisted_even(m, n, Scheme::SixTerm)
}

fn build_twisted_even(m: usize, n: usize, scheme: Scheme) -> Result<TauGroup, TauError> {
    let k = n / 2;
    let mut gens = tree_generators(m, n)?;
    gens.extend(enumerate_rooted(m, k)?.into_iter().map(TauGenerator::Inf));
    let mut rel = ihx_relators(m, n)?.all();
    match scheme {
        Scheme::Standard => rel.extend(twisted_ihx_relators(m, k)?),
        Scheme::SixTerm => rel.extend(sixterm_relators(m, k)?),
    }
    rel.extend(interior_twist_relators(m, k)?);
    TauGroup::assemble(m, n, TauKind::Twisted, scheme, gens, &rel)
}

pub fn build(kind: TauKind, m: usize, n: usize) -> Result<TauGroup, TauError> {
    match kind {
        TauKind::Framed => build_tau(m, n),
        TauKind::Reduced => build_tau_reduced(m, n),
        TauKind::Twisted => build_tau_twisted(m, n),
    }
}

#[derive(Serialize, Deserialize)]
struct GroupDoc {
    m: usize,
    n: usize,
    kind: TauKind,
    #[serde(default)]
    scheme: Scheme,
    generators: Vec<TauGenerator>,
    relators: Matrix,
    structure: Structure,
}

impl Serialize for TauGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GroupDoc {
            m: self.m,
            n: self.n,
            kind: self.kind,
            scheme: self.scheme,
            generators: self.generators.clone(),
            relators: self.presentation.relators.clone(),
            structure: (*self.structure()).clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TauGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = GroupDoc::deserialize(d)?;
        let index = doc.generators.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        let names = doc.generators.iter().map(ToString::to_string).collect();
        let presentation = Presentation::new(names, doc.relators).map_err(serde::de::Error::custom)?;
        let recorded = OnceLock::new();
        let _ = recorded.set(Arc::new(doc.structure));
        Ok(TauGroup {
            m: doc.m,
            n: doc.n,
            kind: doc.kind,
            scheme: doc.scheme,
            generators: doc.generators,
            index,
            presentation,
            recorded,
        })
    }
}
