use std::collections::BTreeSet;

use super::{
    canonicalize, canonicalize_rooted, CanonicalRootedTree, CanonicalTree, RootedTree, TreeError, UnrootedTree,
};

fn check(m: usize) -> Result<(), TreeError> {
    if m < 1 {
        return Err(TreeError::InvalidParameters(format!("m must be at least 1, got {m}")));
    }
    Ok(())
}

/// Canonical rooted trees of each order `0..=n`, sorted.
fn rooted_levels(m: usize, n: usize) -> Vec<Vec<RootedTree>> {
    let mut levels: Vec<Vec<RootedTree>> = Vec::with_capacity(n + 1);
    levels.push((1..=m as u32).map(RootedTree::leaf).collect());
    for k in 1..=n {
        let mut level = Vec::new();
        for a in 0..k {
            let b = k - 1 - a;
            for x in &levels[a] {
                for y in &levels[b] {
                    if x <= y {
                        level.push(RootedTree::node(x.clone(), y.clone()));
                    }
                }
            }
        }
        level.sort();
        levels.push(level);
    }
    levels
}

/// Every order-`n` rooted tree class with labels in `1..=m`, once each,
/// in canonical order.
pub fn enumerate_rooted(m: usize, n: usize) -> Result<Vec<CanonicalRootedTree>, TreeError> {
    check(m)?;
    let level = rooted_levels(m, n).pop().unwrap_or_default();
    Ok(level.iter().map(|t| canonicalize_rooted(t).0).collect())
}

/// Every order-`n` unrooted tree class with labels in `1..=m`, once each,
/// in canonical order. Every tree has a leaf, so rooting at a leaf edge
/// reaches all of them.
pub fn enumerate_unrooted(m: usize, n: usize) -> Result<Vec<CanonicalTree>, TreeError> {
    check(m)?;
    let rooted = rooted_levels(m, n).pop().unwrap_or_default();
    let mut out = BTreeSet::new();
    for i in 1..=m as u32 {
        for t in &rooted {
            let (c, _) = canonicalize(&UnrootedTree::new(RootedTree::leaf(i), t.clone()));
            out.insert(c);
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reprs_u(m: usize, n: usize) -> Vec<String> {
        enumerate_unrooted(m, n).unwrap().iter().map(|c| c.repr()).collect()
    }

    #[test]
    fn small_unrooted_counts() {
        assert_eq!(reprs_u(2, 0), vec!["<1,1>", "<1,2>", "<2,2>"]);
        assert_eq!(enumerate_unrooted(2, 1).unwrap().len(), 4);
        assert!(enumerate_unrooted(2, 1).unwrap().iter().all(|c| c.symmetric()));
        assert_eq!(enumerate_unrooted(1, 2).unwrap().len(), 1);
        assert_eq!(enumerate_unrooted(3, 1).unwrap().len(), 10);
    }

    #[test]
    fn small_rooted_counts() {
        let r: Vec<_> = enumerate_rooted(2, 0).unwrap().iter().map(|c| c.repr()).collect();
        assert_eq!(r, vec!["1", "2"]);
        let r: Vec<_> = enumerate_rooted(2, 1).unwrap().iter().map(|c| c.repr()).collect();
        assert_eq!(r, vec!["(1,1)", "(1,2)", "(2,2)"]);
        let r: Vec<_> = enumerate_rooted(1, 1).unwrap().iter().map(|c| c.repr()).collect();
        assert_eq!(r, vec!["(1,1)"]);
    }

    #[test]
    fn rejects_empty_alphabet() {
        assert!(enumerate_rooted(0, 1).is_err());
        assert!(enumerate_unrooted(0, 0).is_err());
    }

    #[test]
    fn output_is_sorted_and_canonical() {
        let all = enumerate_unrooted(3, 2).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for c in &all {
            assert_eq!(canonicalize(&c.to_unrooted()), (c.clone(), 1));
        }
    }
}
