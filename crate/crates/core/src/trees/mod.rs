//! Labeled, vertex-oriented unitrivalent trees.
//!
//! A [`RootedTree`] is a formal non-associative bracket of labels. The ordered
//! pair at each node fixes the cyclic orientation (root edge, first, second) at
//! that trivalent vertex, so swapping the two children reverses the orientation
//! there and costs a sign under antisymmetry.
//!
//! An [`UnrootedTree`] is stored as the inner product `<L,R>` of two rooted
//! trees glued along an edge. Re-rooting along another edge never changes the
//! orientation: `<(A,B),C> = <A,(B,C)> = <B,(C,A)>`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

mod canonical;
mod edges;
mod enumerate;
mod parse;

pub use canonical::{canonicalize, canonicalize_rooted, CanonicalRootedTree, CanonicalTree};
pub use edges::{
    all_rootings, edge_pairs, ihx_split, internal_edges, rooted_internal_edges, unrooted_ihx, EdgePath, Rooting, Side,
    UnrootedIhx,
};
pub use enumerate::{enumerate_rooted, enumerate_unrooted};
pub use parse::{parse_expr, parse_rooted, parse_unrooted, ParseError, TreeExpr};

/// Label of a univalent vertex, drawn from `1..=m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("label {label} outside 1..={m}")]
    LabelOutOfRange { label: u32, m: u32 },
    #[error("no internal edge at {0:?}")]
    NoSuchEdge(EdgePath),
    #[error("malformed tree: {0}")]
    Malformed(String),
}

/// A rooted unitrivalent tree, i.e. a non-associative bracketing of labels.
///
/// `Node` is declared first so that the derived order puts every bracket
/// before every bare label, the same way `(` sorts before a digit in the
/// textual form. The derived order is the canonical total order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootedTree {
    Node(Box<RootedTree>, Box<RootedTree>),
    Leaf(Label),
}

impl RootedTree {
    pub fn leaf(label: u32) -> Self {
        RootedTree::Leaf(Label(label))
    }

    /// The rooted product `(I,J)`.
    pub fn node(first: RootedTree, second: RootedTree) -> Self {
        RootedTree::Node(Box::new(first), Box::new(second))
    }

    /// Number of trivalent vertices.
    pub fn order(&self) -> usize {
        match self {
            RootedTree::Leaf(_) => 0,
            RootedTree::Node(a, b) => a.order() + b.order() + 1,
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.order() + 1
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, RootedTree::Leaf(_))
    }

    pub fn labels(&self) -> Vec<Label> {
        let mut out = Vec::with_capacity(self.leaf_count());
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut Vec<Label>) {
        match self {
            RootedTree::Leaf(l) => out.push(*l),
            RootedTree::Node(a, b) => {
                a.collect_labels(out);
                b.collect_labels(out);
            }
        }
    }

    pub fn max_label(&self) -> u32 {
        self.labels().into_iter().map(|l| l.0).max().unwrap_or(0)
    }

    /// Checks every label lies in `1..=m`.
    pub fn check_labels(&self, m: u32) -> Result<(), TreeError> {
        for l in self.labels() {
            if l.0 == 0 || l.0 > m {
                return Err(TreeError::LabelOutOfRange { label: l.0, m });
            }
        }
        Ok(())
    }

    /// Subtree reached by following `path` from the root.
    pub fn subtree(&self, path: &[Side]) -> Option<&RootedTree> {
        let mut cur = self;
        for side in path {
            match cur {
                RootedTree::Leaf(_) => return None,
                RootedTree::Node(a, b) => {
                    cur = match side {
                        Side::First => a,
                        Side::Second => b,
                    }
                }
            }
        }
        Some(cur)
    }

    /// Copy of `self` with the subtree at `path` replaced.
    pub fn replace(&self, path: &[Side], with: RootedTree) -> Option<RootedTree> {
        match path.split_first() {
            None => Some(with),
            Some((side, rest)) => match self {
                RootedTree::Leaf(_) => None,
                RootedTree::Node(a, b) => Some(match side {
                    Side::First => RootedTree::node(a.replace(rest, with)?, (**b).clone()),
                    Side::Second => RootedTree::node((**a).clone(), b.replace(rest, with)?),
                }),
            },
        }
    }

    /// Applies a label map to every leaf.
    pub fn relabel(&self, f: &impl Fn(Label) -> Label) -> RootedTree {
        match self {
            RootedTree::Leaf(l) => RootedTree::Leaf(f(*l)),
            RootedTree::Node(a, b) => RootedTree::node(a.relabel(f), b.relabel(f)),
        }
    }
}

/// The rooted product `(I,J)`: a new root joined to the roots of `I` and `J`.
pub fn rooted_product(first: &RootedTree, second: &RootedTree) -> RootedTree {
    RootedTree::node(first.clone(), second.clone())
}

/// The inner product `<I,J>`: the roots of `I` and `J` glued into one edge.
pub fn inner_product(left: &RootedTree, right: &RootedTree) -> UnrootedTree {
    UnrootedTree::new(left.clone(), right.clone())
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootedTree::Leaf(l) => write!(f, "{l}"),
            RootedTree::Node(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl FromStr for RootedTree {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rooted(s, None)
    }
}

impl Serialize for RootedTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RootedTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An unrooted tree `<left,right>`, a representative of its re-rooting class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnrootedTree {
    pub left: RootedTree,
    pub right: RootedTree,
}

impl UnrootedTree {
    pub fn new(left: RootedTree, right: RootedTree) -> Self {
        UnrootedTree { left, right }
    }

    pub fn order(&self) -> usize {
        self.left.order() + self.right.order()
    }

    pub fn leaf_count(&self) -> usize {
        self.order() + 2
    }

    pub fn labels(&self) -> Vec<Label> {
        let mut l = self.left.labels();
        l.extend(self.right.labels());
        l
    }

    pub fn check_labels(&self, m: u32) -> Result<(), TreeError> {
        self.left.check_labels(m)?;
        self.right.check_labels(m)
    }

    pub fn relabel(&self, f: &impl Fn(Label) -> Label) -> UnrootedTree {
        UnrootedTree::new(self.left.relabel(f), self.right.relabel(f))
    }
}

impl fmt::Display for UnrootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.left, self.right)
    }
}

impl FromStr for UnrootedTree {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_unrooted(s, None)
    }
}

impl Serialize for UnrootedTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for UnrootedTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
