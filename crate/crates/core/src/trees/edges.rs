use serde::{Deserialize, Serialize};

use super::{Label, RootedTree, TreeError, UnrootedTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    First,
    Second,
}

/// Path from the root of a rooted tree to a node.
pub type EdgePath = Vec<Side>;

/// One univalent vertex `v` of an unrooted tree with `T_v`, the rooted tree
/// left when `v` becomes the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rooting {
    pub label: Label,
    pub tree: RootedTree,
    pub sign: i64,
}

/// Every edge-rooting `<x,y>` of `t`, starting with `t` itself.
///
/// Re-rooting keeps every vertex orientation, so each pair represents `t`
/// with sign `+1`. An order-`n` tree yields `2n+1` pairs.
pub fn edge_pairs(t: &UnrootedTree) -> Vec<(RootedTree, RootedTree)> {
    let mut out = Vec::with_capacity(2 * t.order() + 1);
    out.push((t.left.clone(), t.right.clone()));
    descend(&t.left, &t.right, &mut out);
    descend(&t.right, &t.left, &mut out);
    out
}

// <(a,b),y> = <a,(b,y)> = <b,(y,a)>
fn descend(x: &RootedTree, y: &RootedTree, out: &mut Vec<(RootedTree, RootedTree)>) {
    if let RootedTree::Node(a, b) = x {
        let by = RootedTree::node((**b).clone(), y.clone());
        out.push(((**a).clone(), by.clone()));
        descend(a, &by, out);
        let ya = RootedTree::node(y.clone(), (**a).clone());
        out.push(((**b).clone(), ya.clone()));
        descend(b, &ya, out);
    }
}

/// One entry per univalent vertex: its label and the rooted tree obtained by
/// turning that vertex into the root. Orientations are kept, so every sign
/// is `+1` under the inner-product convention.
pub fn all_rootings(t: &UnrootedTree) -> Vec<Rooting> {
    let mut out = Vec::with_capacity(t.leaf_count());
    for (x, y) in edge_pairs(t) {
        if let RootedTree::Leaf(l) = x {
            out.push(Rooting { label: l, tree: y.clone(), sign: 1 });
        }
        if let RootedTree::Leaf(l) = y {
            out.push(Rooting { label: l, tree: x, sign: 1 });
        }
    }
    out
}

/// Paths to every non-root trivalent vertex, i.e. the internal edges of a
/// rooted tree (each named by its lower endpoint). Pre-order.
pub fn rooted_internal_edges(t: &RootedTree) -> Vec<EdgePath> {
    fn walk(t: &RootedTree, path: &mut EdgePath, out: &mut Vec<EdgePath>) {
        if let RootedTree::Node(a, b) = t {
            if !path.is_empty() {
                out.push(path.clone());
            }
            path.push(Side::First);
            walk(a, path, out);
            path.pop();
            path.push(Side::Second);
            walk(b, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(t, &mut Vec::new(), &mut out);
    out
}

/// The IHX resolution of `i` at the internal edge ending at `path`.
///
/// Returns `(H, X)` with `I = H − X` holding as oriented trees: writing the
/// parent vertex as `((A,B),C)`, `H` replaces it by `(A,(B,C))` and `X` by
/// `(B,(A,C))`. When the edge enters the parent from the second slot the
/// parent is `−((A,B),C)` and the two outputs trade places.
pub fn ihx_split(i: &RootedTree, path: &[Side]) -> Result<(RootedTree, RootedTree), TreeError> {
    let bad = || TreeError::NoSuchEdge(path.to_vec());
    let (last, parent_path) = path.split_last().ok_or_else(bad)?;
    let parent = i.subtree(parent_path).ok_or_else(bad)?;
    let (v, c) = match (parent, last) {
        (RootedTree::Node(v, c), Side::First) => (v, c),
        (RootedTree::Node(c, v), Side::Second) => (v, c),
        _ => return Err(bad()),
    };
    let (a, b) = match &**v {
        RootedTree::Node(a, b) => (a, b),
        RootedTree::Leaf(_) => return Err(bad()),
    };
    let (a, b, c) = ((**a).clone(), (**b).clone(), (**c).clone());
    let h_local = RootedTree::node(a.clone(), RootedTree::node(b.clone(), c.clone()));
    let x_local = RootedTree::node(b, RootedTree::node(a, c));
    let h = i.replace(parent_path, h_local).ok_or_else(bad)?;
    let x = i.replace(parent_path, x_local).ok_or_else(bad)?;
    Ok(match last {
        Side::First => (h, x),
        Side::Second => (x, h),
    })
}

/// An unrooted IHX triple satisfying `I − H + X = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnrootedIhx {
    pub i: UnrootedTree,
    pub h: UnrootedTree,
    pub x: UnrootedTree,
}

/// Internal edges of an unrooted tree, named relative to its first leaf
/// rooting `<label, T>`: the internal edges of `T`. An order-`n` tree has
/// `n − 1` of them (none below order 2).
pub fn internal_edges(t: &UnrootedTree) -> Vec<EdgePath> {
    let base = &all_rootings(t)[0];
    rooted_internal_edges(&base.tree)
}

/// IHX at internal edge number `edge` (an index into [`internal_edges`]).
/// `i` is `t` itself re-rooted at its first leaf.
pub fn unrooted_ihx(t: &UnrootedTree, edge: usize) -> Result<UnrootedIhx, TreeError> {
    let base = all_rootings(t).swap_remove(0);
    let edges = rooted_internal_edges(&base.tree);
    let path = edges.get(edge).ok_or_else(|| TreeError::Malformed(format!("edge index {edge} out of range")))?;
    let (h, x) = ihx_split(&base.tree, path)?;
    let leaf = RootedTree::Leaf(base.label);
    Ok(UnrootedIhx {
        i: UnrootedTree::new(leaf.clone(), base.tree),
        h: UnrootedTree::new(leaf.clone(), h),
        x: UnrootedTree::new(leaf, x),
    })
}
