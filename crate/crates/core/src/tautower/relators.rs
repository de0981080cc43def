use rayon::prelude::*;

use super::{Combination, TauError, TauGenerator};
use crate::trees::{
    enumerate_rooted, enumerate_unrooted, ihx_split, inner_product, internal_edges, rooted_internal_edges,
    rooted_product, unrooted_ihx, RootedTree,
};
use crate::Int;

/// Relators among order-`n` trees.
#[derive(Clone, Debug, Default)]
pub struct TreeRelators {
    /// `I − H + X`, one per class and internal edge.
    pub ihx: Vec<Combination>,
    /// `2g` for every symmetric class `g`.
    pub antisymmetry: Vec<Combination>,
}

impl TreeRelators {
    pub fn all(self) -> Vec<Combination> {
        let mut out = self.antisymmetry;
        out.extend(self.ihx);
        out
    }
}

pub fn ihx_relators(m: usize, n: usize) -> Result<TreeRelators, TauError> {
    let classes = enumerate_unrooted(m, n)?;
    let antisymmetry = classes
        .iter()
        .filter(|c| c.symmetric())
        .map(|c| [(TauGenerator::Tree(c.clone()), Int::from(2))].into_iter().collect())
        .collect();
    let per_class: Vec<Vec<Combination>> = classes
        .par_iter()
        .map(|c| {
            let t = c.to_unrooted();
            (0..internal_edges(&t).len())
                .map(|e| {
                    let r = unrooted_ihx(&t, e).expect("edge index in range");
                    let mut rel = Combination::new();
                    rel.add_tree(&r.i, 1);
                    rel.add_tree(&r.h, -1);
                    rel.add_tree(&r.x, 1);
                    rel
                })
                .filter(|r| !r.is_empty())
                .collect()
        })
        .collect();
    Ok(TreeRelators { ihx: per_class.into_iter().flatten().collect(), antisymmetry })
}

/// `⟨(i,J),J⟩` for `i ∈ 1..=m` and rooted `J` of order `k − 1`, where
/// `n = 2k − 1`.
pub fn boundary_twist_relators(m: usize, n: usize) -> Result<Vec<Combination>, TauError> {
    if n.is_multiple_of(2) {
        return Err(TauError::InvalidParameters(format!("boundary twists live in odd orders, got {n}")));
    }
    let k = n.div_ceil(2);
    let mut out = Vec::new();
    for j in enumerate_rooted(m, k - 1)? {
        for i in 1..=m as u32 {
            let j = j.tree();
            let mut rel = Combination::new();
            rel.add_tree(&inner_product(&rooted_product(&RootedTree::leaf(i), j), j), 1);
            out.push(rel);
        }
    }
    Ok(out)
}

/// `J^∞ − H^∞ − X^∞ + ⟨H,X⟩` for every order-`k` rooted `J` and each of its
/// internal edges, with `J = H − X`.
pub fn twisted_ihx_relators(m: usize, k: usize) -> Result<Vec<Combination>, TauError> {
    per_edge(m, k, |j, h, x| {
        let mut rel = Combination::new();
        rel.add_inf(j, 1);
        rel.add_inf(h, -1);
        rel.add_inf(x, -1);
        rel.add_tree(&inner_product(h, x), 1);
        rel
    })
}

/// `I^∞ + H^∞ + X^∞ − ⟨I,H⟩ + ⟨I,X⟩ − ⟨H,X⟩` for every order-`k` rooted `I`
/// and internal edge, with `I − H + X = 0`.
pub fn sixterm_relators(m: usize, k: usize) -> Result<Vec<Combination>, TauError> {
    per_edge(m, k, |i, h, x| {
        let mut rel = Combination::new();
        rel.add_inf(i, 1);
        rel.add_inf(h, 1);
        rel.add_inf(x, 1);
        rel.add_tree(&inner_product(i, h), -1);
        rel.add_tree(&inner_product(i, x), 1);
        rel.add_tree(&inner_product(h, x), -1);
        rel
    })
}

/// `2·J^∞ − ⟨J,J⟩` for every order-`k` rooted `J`.
pub fn interior_twist_relators(m: usize, k: usize) -> Result<Vec<Combination>, TauError> {
    Ok(enumerate_rooted(m, k)?
        .iter()
        .map(|j| {
            let mut rel = Combination::new();
            rel.add_inf(j.tree(), 2);
            rel.add_tree(&inner_product(j.tree(), j.tree()), -1);
            rel
        })
        .collect())
}

fn per_edge(
    m: usize,
    k: usize,
    f: impl Fn(&RootedTree, &RootedTree, &RootedTree) -> Combination + Sync,
) -> Result<Vec<Combination>, TauError> {
    let classes = enumerate_rooted(m, k)?;
    let nested: Vec<Vec<Combination>> = classes
        .par_iter()
        .map(|c| {
            let j = c.tree();
            rooted_internal_edges(j)
                .iter()
                .map(|path| {
                    let (h, x) = ihx_split(j, path).expect("internal edge");
                    f(j, &h, &x)
                })
                .filter(|r| !r.is_empty())
                .collect()
        })
        .collect();
    Ok(nested.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{canonicalize, UnrootedTree};
    use num_traits::Zero;

    fn tree(s: &str) -> TauGenerator {
        let t: UnrootedTree = s.parse().unwrap();
        TauGenerator::Tree(canonicalize(&t).0)
    }

    #[test]
    fn h_tree_relator_has_three_classes() {
        let r = ihx_relators(4, 2).unwrap();
        let h = tree("<(1,2),(3,4)>");
        let hit: Vec<_> = r.ihx.iter().filter(|c| !c.coefficient(&h).is_zero()).collect();
        assert!(!hit.is_empty());
        let rel = hit[0];
        assert_eq!(rel.len(), 3);
        let mut coeffs: Vec<i64> = rel.iter().map(|(_, c)| i64::try_from(c).unwrap()).collect();
        coeffs.sort();
        assert!(coeffs.iter().all(|c| c.abs() == 1));
    }

    #[test]
    fn order_one_has_only_antisymmetry() {
        let r = ihx_relators(2, 1).unwrap();
        assert!(r.ihx.is_empty());
        assert_eq!(r.antisymmetry.len(), 4);
        assert!(r.antisymmetry.iter().all(|c| c.iter().all(|(_, v)| *v == Int::from(2))));
        let r = ihx_relators(1, 0).unwrap();
        assert!(r.ihx.is_empty() && r.antisymmetry.is_empty());
    }

    #[test]
    fn boundary_twists_at_order_one() {
        let r = boundary_twist_relators(2, 1).unwrap();
        let mut seen: Vec<String> = r.iter().map(|c| c.iter().next().unwrap().0.to_string()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 4);
        let r = boundary_twist_relators(1, 3).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].iter().next().unwrap().0, &tree("<(1,(1,1)),(1,1)>"));
        assert!(boundary_twist_relators(2, 2).is_err());
    }

    #[test]
    fn interior_twist_at_order_zero() {
        let r = interior_twist_relators(2, 0).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].to_string(), "-<1,1> + 2 inf1");
    }

    #[test]
    fn twisted_ihx_is_sign_independent() {
        // Swapping the children of J permutes or negates H and X but leaves
        // the relator unchanged.
        let j: RootedTree = "((1,2),3)".parse().unwrap();
        let js: RootedTree = "(3,(2,1))".parse().unwrap();
        let build = |j: &RootedTree| {
            let mut out = Vec::new();
            for p in rooted_internal_edges(j) {
                let (h, x) = ihx_split(j, &p).unwrap();
                let mut rel = Combination::new();
                rel.add_inf(j, 1);
                rel.add_inf(&h, -1);
                rel.add_inf(&x, -1);
                rel.add_tree(&inner_product(&h, &x), 1);
                out.push(rel);
            }
            out
        };
        assert_eq!(build(&j), build(&js));
    }
}
