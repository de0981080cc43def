use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{edge_pairs, RootedTree, UnrootedTree};

/// Canonical representative of a rooted tree class under antisymmetry.
///
/// Ordering follows the underlying tree, which is the canonical total order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalRootedTree {
    tree: RootedTree,
    order: usize,
    symmetric: bool,
}

impl CanonicalRootedTree {
    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// True iff the class equals its own negative, i.e. `2g = 0`.
    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn repr(&self) -> String {
        self.tree.to_string()
    }
}

impl fmt::Display for CanonicalRootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.tree.fmt(f)
    }
}

impl Serialize for CanonicalRootedTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CanonicalRootedTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = RootedTree::deserialize(d)?;
        let (c, _) = canonicalize_rooted(&t);
        if c.tree != t {
            return Err(serde::de::Error::custom(format!("{t} is not in canonical form")));
        }
        Ok(c)
    }
}

/// Canonical representative of an unrooted tree class under antisymmetry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalTree {
    left: RootedTree,
    right: RootedTree,
    order: usize,
    symmetric: bool,
}

impl CanonicalTree {
    pub fn left(&self) -> &RootedTree {
        &self.left
    }

    pub fn right(&self) -> &RootedTree {
        &self.right
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// True iff an orientation-reversing self-isomorphism exists.
    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn repr(&self) -> String {
        self.to_string()
    }

    pub fn to_unrooted(&self) -> UnrootedTree {
        UnrootedTree::new(self.left.clone(), self.right.clone())
    }
}

impl fmt::Display for CanonicalTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.left, self.right)
    }
}

impl Serialize for CanonicalTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CanonicalTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = UnrootedTree::deserialize(d)?;
        let (c, _) = canonicalize(&t);
        if c.left != t.left || c.right != t.right {
            return Err(serde::de::Error::custom(format!("{t} is not in canonical form")));
        }
        Ok(c)
    }
}

struct Canon {
    tree: RootedTree,
    sign: i64,
    symmetric: bool,
}

fn canon(t: &RootedTree) -> Canon {
    match t {
        RootedTree::Leaf(_) => Canon { tree: t.clone(), sign: 1, symmetric: false },
        RootedTree::Node(a, b) => {
            let ca = canon(a);
            let cb = canon(b);
            let symmetric = ca.symmetric || cb.symmetric || ca.tree == cb.tree;
            let sign = ca.sign * cb.sign;
            if ca.tree <= cb.tree {
                Canon { tree: RootedTree::node(ca.tree, cb.tree), sign, symmetric }
            } else {
                Canon { tree: RootedTree::node(cb.tree, ca.tree), sign: -sign, symmetric }
            }
        }
    }
}

/// Canonical form of a rooted tree and the sign relating `t` to it.
///
/// Children are sorted at every node, each swap flipping the sign. A node with
/// two equal children makes the class symmetric; the sign is then reported as
/// `+1`.
pub fn canonicalize_rooted(t: &RootedTree) -> (CanonicalRootedTree, i64) {
    let c = canon(t);
    let sign = if c.symmetric { 1 } else { c.sign };
    let order = c.tree.order();
    (CanonicalRootedTree { tree: c.tree, order, symmetric: c.symmetric }, sign)
}

/// Canonical form of an unrooted tree and the sign relating `t` to it.
///
/// The representative is the minimum over every edge-rooting of the sorted
/// pair of canonical halves. Two minimal rootings with opposite signs witness
/// an orientation-reversing automorphism.
pub fn canonicalize(t: &UnrootedTree) -> (CanonicalTree, i64) {
    let mut best: Option<(RootedTree, RootedTree)> = None;
    let mut best_sign = 1;
    let mut symmetric = false;
    for (x, y) in edge_pairs(t) {
        let cx = canon(&x);
        let cy = canon(&y);
        symmetric |= cx.symmetric || cy.symmetric;
        let sign = cx.sign * cy.sign;
        let key = if cx.tree <= cy.tree { (cx.tree, cy.tree) } else { (cy.tree, cx.tree) };
        let ord = match &best {
            None => Ordering::Less,
            Some(b) => key.cmp(b),
        };
        match ord {
            Ordering::Less => {
                best = Some(key);
                best_sign = sign;
            }
            Ordering::Equal => {
                if sign != best_sign {
                    symmetric = true;
                }
            }
            Ordering::Greater => {}
        }
    }
    let (left, right) = best.expect("every tree has an edge");
    let order = left.order() + right.order();
    let sign = if symmetric { 1 } else { best_sign };
    (CanonicalTree { left, right, order, symmetric }, sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RootedTree {
        s.parse().unwrap()
    }
    fn u(s: &str) -> UnrootedTree {
        s.parse().unwrap()
    }

    #[test]
    fn rooted_examples() {
        let (c, s) = canonicalize_rooted(&r("(2,1)"));
        assert_eq!((c.repr().as_str(), s, c.symmetric()), ("(1,2)", -1, false));
        let (c, s) = canonicalize_rooted(&r("(1,1)"));
        assert_eq!((c.repr().as_str(), s, c.symmetric()), ("(1,1)", 1, true));
        // ((2,3),1): brackets sort first, so the outer node is already sorted.
        let (c, s) = canonicalize_rooted(&r("((3,2),1)"));
        assert_eq!((c.repr().as_str(), s), ("((2,3),1)", -1));
        let (c, s) = canonicalize_rooted(&r("(1,(3,2))"));
        assert_eq!((c.repr().as_str(), s), ("((2,3),1)", 1));
    }

    #[test]
    fn unrooted_examples() {
        let (c, s) = canonicalize(&u("<(2,1),3>"));
        assert_eq!(c.repr(), "<(1,2),3>");
        assert_eq!(s, -1);
        assert!(!c.symmetric());

        let (c, _) = canonicalize(&u("<(1,1),2>"));
        assert!(c.symmetric());

        let (c, s) = canonicalize(&u("<2,1>"));
        assert_eq!((c.repr().as_str(), s, c.symmetric()), ("<1,2>", 1, false));
        let (c, s) = canonicalize(&u("<1,1>"));
        assert_eq!((c.repr().as_str(), s, c.symmetric()), ("<1,1>", 1, false));
    }

    #[test]
    fn rerooting_preserves_sign() {
        let a = canonicalize(&u("<1,(2,3)>"));
        let b = canonicalize(&u("<(1,2),3>"));
        let c = canonicalize(&u("<2,(3,1)>"));
        assert_eq!(a, b);
        assert_eq!(a, c);
        let d = canonicalize(&u("<1,(3,2)>"));
        assert_eq!(d.0, a.0);
        assert_eq!(d.1, -a.1);
    }

    #[test]
    fn h_tree_symmetry() {
        // <(1,2),(1,2)>: swapping halves preserves orientation.
        let (c, _) = canonicalize(&u("<(1,2),(1,2)>"));
        assert!(!c.symmetric());
        // <(1,(2,2)),3> contains a node with equal children.
        let (c, _) = canonicalize(&u("<(1,(2,2)),3>"));
        assert!(c.symmetric());
        // The order-2 tree on four 1s.
        let (c, _) = canonicalize(&u("<(1,1),(1,1)>"));
        assert!(c.symmetric());
    }

    #[test]
    fn idempotent_on_representatives() {
        for t in ["<(2,1),3>", "<((3,1),2),(2,1)>", "<(1,(2,(3,4))),5>"] {
            let (c, _) = canonicalize(&u(t));
            let (c2, s2) = canonicalize(&c.to_unrooted());
            assert_eq!(c, c2);
            assert_eq!(s2, 1);
        }
    }
}
