//! Canonical forms against a brute-force isomorphism search on the
//! underlying oriented graphs.

use std::collections::BTreeSet;

use proptest::prelude::*;
use wtc_core::trees::{
    all_rootings, canonicalize, canonicalize_rooted, enumerate_rooted, enumerate_unrooted, inner_product, Label,
    RootedTree, Side, UnrootedTree,
};

/// A unitrivalent tree as a graph. Trivalent vertices list their neighbours
/// in cyclic order; univalent ones carry a label.
#[derive(Clone, Debug)]
struct Graph {
    label: Vec<Option<u32>>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    fn new() -> Self {
        Graph { label: Vec::new(), adj: Vec::new() }
    }

    fn vertex(&mut self, label: Option<u32>) -> usize {
        self.label.push(label);
        self.adj.push(Vec::new());
        self.label.len() - 1
    }

    fn attach(&mut self, t: &RootedTree, parent: usize) -> usize {
        match t {
            RootedTree::Leaf(Label(l)) => {
                let v = self.vertex(Some(*l));
                self.adj[v] = vec![parent];
                v
            }
            RootedTree::Node(a, b) => {
                let v = self.vertex(None);
                let x = self.attach(a, v);
                let y = self.attach(b, v);
                self.adj[v] = vec![parent, x, y];
                v
            }
        }
    }

    fn from_unrooted(t: &UnrootedTree) -> Self {
        let mut g = Graph::new();
        match &t.left {
            RootedTree::Leaf(Label(l)) => {
                let v = g.vertex(Some(*l));
                let w = g.attach(&t.right, v);
                g.adj[v] = vec![w];
            }
            RootedTree::Node(a, b) => {
                let v = g.vertex(None);
                let w = g.attach(&t.right, v);
                let x = g.attach(a, v);
                let y = g.attach(b, v);
                g.adj[v] = vec![w, x, y];
            }
        }
        g
    }

    /// A rooted tree is the unrooted tree `<0, J>` with its root leaf
    /// labelled `0`.
    fn from_rooted(t: &RootedTree) -> Self {
        Graph::from_unrooted(&inner_product(&RootedTree::leaf(0), t))
    }

    fn leaves(&self) -> Vec<usize> {
        (0..self.label.len()).filter(|&v| self.label[v].is_some()).collect()
    }

    /// The two neighbours of `v` after `from`, in cyclic order.
    fn children(&self, v: usize, from: usize) -> (usize, usize) {
        let a = &self.adj[v];
        let i = a.iter().position(|&x| x == from).unwrap();
        (a[(i + 1) % 3], a[(i + 2) % 3])
    }

    fn rooted_at(&self, v: usize, from: usize) -> RootedTree {
        match self.label[v] {
            Some(l) => RootedTree::leaf(l),
            None => {
                let (x, y) = self.children(v, from);
                RootedTree::node(self.rooted_at(x, v), self.rooted_at(y, v))
            }
        }
    }

    /// The tree read off from leaf `v`.
    fn read(&self, v: usize) -> UnrootedTree {
        let w = self.adj[v][0];
        UnrootedTree::new(RootedTree::leaf(self.label[v].unwrap()), self.rooted_at(w, v))
    }

    fn flip(&mut self, v: usize) {
        self.adj[v].swap(1, 2);
    }
}

/// Every sign `σ` with `g ≅ σ·h` as oriented labelled trees.
fn iso_signs(g: &Graph, h: &Graph) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    let Some(&a) = g.leaves().first() else { return out };
    for b in h.leaves() {
        if g.label[a] == h.label[b] && g.label.len() == h.label.len() {
            out.extend(matching(g, g.adj[a][0], a, h, h.adj[b][0], b));
        }
    }
    out
}

fn matching(g: &Graph, u: usize, pu: usize, h: &Graph, v: usize, pv: usize) -> BTreeSet<i64> {
    match (g.label[u], h.label[v]) {
        (Some(x), Some(y)) => {
            if x == y {
                [1].into()
            } else {
                BTreeSet::new()
            }
        }
        (None, None) => {
            let (x1, x2) = g.children(u, pu);
            let (y1, y2) = h.children(v, pv);
            let mut out = BTreeSet::new();
            for (sign, (p, q)) in [(1, (y1, y2)), (-1, (y2, y1))] {
                for s in matching(g, x1, u, h, p, v) {
                    for t in matching(g, x2, u, h, q, v) {
                        out.insert(sign * s * t);
                    }
                }
            }
            out
        }
        _ => BTreeSet::new(),
    }
}

fn rooted(m: u32, k: usize) -> BoxedStrategy<RootedTree> {
    if k == 0 {
        return (1..=m).prop_map(RootedTree::leaf).boxed();
    }
    (0..k)
        .prop_flat_map(move |a| (rooted(m, a), rooted(m, k - 1 - a)))
        .prop_map(|(x, y)| RootedTree::node(x, y))
        .boxed()
}

fn unrooted(m: u32, n: usize) -> BoxedStrategy<UnrootedTree> {
    (0..=n).prop_flat_map(move |a| (rooted(m, a), rooted(m, n - a))).prop_map(|(x, y)| inner_product(&x, &y)).boxed()
}

fn any_unrooted() -> BoxedStrategy<UnrootedTree> {
    (1u32..=3, 0usize..=4).prop_flat_map(|(m, n)| unrooted(m, n)).boxed()
}

fn node_paths(t: &RootedTree, path: &mut Vec<Side>, out: &mut Vec<Vec<Side>>) {
    if let RootedTree::Node(a, b) = t {
        out.push(path.clone());
        path.push(Side::First);
        node_paths(a, path, out);
        path.pop();
        path.push(Side::Second);
        node_paths(b, path, out);
        path.pop();
    }
}

fn swap_at(t: &RootedTree, path: &[Side]) -> RootedTree {
    match t.subtree(path).unwrap() {
        RootedTree::Node(a, b) => t.replace(path, RootedTree::node((**b).clone(), (**a).clone())).unwrap(),
        RootedTree::Leaf(_) => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn reembedding_keeps_the_class(t in any_unrooted(), flips in prop::collection::vec(any::<bool>(), 12), start in any::<prop::sample::Index>()) {
        let mut g = Graph::from_unrooted(&t);
        let mut sigma = 1;
        for v in 0..g.label.len() {
            if g.label[v].is_none() && flips[v % flips.len()] {
                g.flip(v);
                sigma = -sigma;
            }
        }
        let leaves = g.leaves();
        let t2 = g.read(leaves[start.index(leaves.len())]);
        let (c1, s1) = canonicalize(&t);
        let (c2, s2) = canonicalize(&t2);
        prop_assert_eq!(&c1, &c2);
        if !c1.symmetric() {
            prop_assert_eq!(s1 * s2, sigma);
        }
    }

    #[test]
    fn canonical_classes_match_isomorphism(a in any_unrooted(), b in any_unrooted()) {
        let signs = iso_signs(&Graph::from_unrooted(&a), &Graph::from_unrooted(&b));
        let (ca, sa) = canonicalize(&a);
        let (cb, sb) = canonicalize(&b);
        prop_assert_eq!(ca == cb, !signs.is_empty());
        if ca == cb {
            prop_assert!(signs.contains(&(sa * sb)));
            prop_assert_eq!(signs.len() == 2, ca.symmetric());
        }
    }

    #[test]
    fn symmetric_iff_orientation_reversing_automorphism(t in any_unrooted()) {
        let g = Graph::from_unrooted(&t);
        let (c, _) = canonicalize(&t);
        prop_assert_eq!(iso_signs(&g, &g).contains(&-1), c.symmetric());
        prop_assert_eq!(canonicalize(&c.to_unrooted()), (c.clone(), 1));
    }

    #[test]
    fn rooted_classes_match_isomorphism(
        a in (1u32..=3, 0usize..=4).prop_flat_map(|(m, k)| rooted(m, k)),
        b in (1u32..=3, 0usize..=4).prop_flat_map(|(m, k)| rooted(m, k)),
    ) {
        let signs = iso_signs(&Graph::from_rooted(&a), &Graph::from_rooted(&b));
        let (ca, sa) = canonicalize_rooted(&a);
        let (cb, sb) = canonicalize_rooted(&b);
        prop_assert_eq!(ca == cb, !signs.is_empty());
        if ca == cb {
            prop_assert!(signs.contains(&(sa * sb)));
            prop_assert_eq!(signs.len() == 2, ca.symmetric());
        }
        let auto = iso_signs(&Graph::from_rooted(&a), &Graph::from_rooted(&a));
        prop_assert_eq!(auto.contains(&-1), ca.symmetric());
    }

    #[test]
    fn swapping_children_negates(t in (1u32..=3, 1usize..=5).prop_flat_map(|(m, k)| rooted(m, k)), pick in any::<prop::sample::Index>()) {
        let mut paths = Vec::new();
        node_paths(&t, &mut Vec::new(), &mut paths);
        let s = swap_at(&t, &paths[pick.index(paths.len())]);
        let (c, sign) = canonicalize_rooted(&t);
        let (cs, ssign) = canonicalize_rooted(&s);
        prop_assert_eq!(&c, &cs);
        if !c.symmetric() {
            prop_assert_eq!(sign, -ssign);
        }
        let u = inner_product(&RootedTree::leaf(1), &t);
        let us = inner_product(&RootedTree::leaf(1), &s);
        let (cu, su) = canonicalize(&u);
        let (cus, sus) = canonicalize(&us);
        prop_assert_eq!(&cu, &cus);
        if !cu.symmetric() {
            prop_assert_eq!(su, -sus);
        }
    }

    #[test]
    fn relabelling_commutes_with_canonicalization(t in any_unrooted(), perm in Just(vec![1u32, 2, 3]).prop_shuffle()) {
        let pi = |l: Label| Label(perm[l.0 as usize - 1]);
        let (c, s) = canonicalize(&t);
        let (c_img, s_img) = canonicalize(&c.to_unrooted().relabel(&pi));
        let (direct, s_direct) = canonicalize(&t.relabel(&pi));
        prop_assert_eq!(&direct, &c_img);
        if !direct.symmetric() {
            prop_assert_eq!(s_direct, s * s_img);
        }
        prop_assert_eq!(direct.symmetric(), c.symmetric());
    }

    #[test]
    fn one_rooting_per_leaf(t in any_unrooted()) {
        let rs = all_rootings(&t);
        prop_assert_eq!(rs.len(), t.order() + 2);
        let (c, s) = canonicalize(&t);
        let mut labels: Vec<u32> = rs.iter().map(|r| r.label.0).collect();
        let mut expect: Vec<u32> = t.labels().into_iter().map(|l| l.0).collect();
        labels.sort();
        expect.sort();
        prop_assert_eq!(labels, expect);
        for r in rs {
            let (c2, s2) = canonicalize(&inner_product(&RootedTree::Leaf(r.label), &r.tree));
            prop_assert_eq!(&c2, &c);
            if !c.symmetric() {
                prop_assert_eq!(s2 * r.sign, s);
            }
        }
    }
}

#[test]
fn enumeration_is_a_transversal() {
    for (m, n) in [(1, 0), (2, 0), (3, 0), (1, 1), (2, 1), (3, 1), (2, 2), (3, 2), (2, 3)] {
        let classes = enumerate_unrooted(m, n).unwrap();
        let graphs: Vec<Graph> = classes.iter().map(|c| Graph::from_unrooted(&c.to_unrooted())).collect();
        for i in 0..graphs.len() {
            for j in 0..i {
                assert!(iso_signs(&graphs[i], &graphs[j]).is_empty(), "{} ≅ {}", classes[i], classes[j]);
            }
            assert_eq!(iso_signs(&graphs[i], &graphs[i]).contains(&-1), classes[i].symmetric());
        }
    }
    for (m, k) in [(2, 0), (2, 1), (2, 2), (3, 2), (2, 3)] {
        let classes = enumerate_rooted(m, k).unwrap();
        let graphs: Vec<Graph> = classes.iter().map(|c| Graph::from_rooted(c.tree())).collect();
        for i in 0..graphs.len() {
            for j in 0..i {
                assert!(iso_signs(&graphs[i], &graphs[j]).is_empty());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn enumeration_covers_every_tree(t in (1u32..=2, 0usize..=3).prop_flat_map(|(m, n)| (Just(m), unrooted(m, n)))) {
        let (m, t) = t;
        let classes = enumerate_unrooted(m as usize, t.order()).unwrap();
        let (c, _) = canonicalize(&t);
        prop_assert!(classes.contains(&c));
    }
}
