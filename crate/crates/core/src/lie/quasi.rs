use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Zero;

use super::LieError;
use crate::abgroup::{IntMatrix, Presentation};
use crate::trees::{
    canonicalize_rooted, enumerate_rooted, ihx_split, rooted_internal_edges, CanonicalRootedTree, RootedTree,
};
use crate::{Group, Int};

/// `ℒ′_{n+1}(m)`: order-`n` rooted trees modulo antisymmetry and IHX.
///
/// Antisymmetry only forces `2·[X,X] = 0`, so symmetric classes become
/// 2-torsion rather than vanishing.
#[derive(Debug)]
pub struct QuasiLieGroup {
    m: usize,
    order: usize,
    generators: Vec<CanonicalRootedTree>,
    index: HashMap<RootedTree, usize>,
    presentation: Group,
}

impl QuasiLieGroup {
    pub fn new(m: usize, order: usize) -> Result<Self, LieError> {
        let generators = enumerate_rooted(m, order)?;
        let index: HashMap<RootedTree, usize> =
            generators.iter().enumerate().map(|(i, g)| (g.tree().clone(), i)).collect();
        let mut rows: Vec<Vec<(usize, Int)>> = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            if g.symmetric() {
                rows.push(vec![(i, Int::from(2))]);
            }
        }
        for g in &generators {
            let j = g.tree();
            for path in rooted_internal_edges(j) {
                let (h, x) = ihx_split(j, &path)?;
                let mut acc: HashMap<usize, Int> = HashMap::new();
                for (t, c) in [(j, 1), (&h, -1), (&x, 1)] {
                    let (ct, sign) = canonicalize_rooted(t);
                    *acc.entry(index[ct.tree()]).or_insert_with(Int::zero) += Int::from(c * sign);
                }
                let row: Vec<(usize, Int)> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
        let names = generators.iter().map(ToString::to_string).collect();
        let presentation = Presentation::new(names, IntMatrix::from_sparse_rows(generators.len(), rows)?)?;
        Ok(QuasiLieGroup { m, order, generators, index, presentation })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Order of the generating trees.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Bracket length, `order + 1`.
    pub fn degree(&self) -> usize {
        self.order + 1
    }

    pub fn generators(&self) -> &[CanonicalRootedTree] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn presentation(&self) -> &Group {
        &self.presentation
    }

    /// Column of `t` and the antisymmetry sign relating `t` to it.
    pub fn locate(&self, t: &RootedTree) -> Option<(usize, i64)> {
        let (c, sign) = canonicalize_rooted(t);
        self.index.get(c.tree()).map(|&i| (i, sign))
    }
}

/// Shared [`QuasiLieGroup`] for `(m, order)`.
pub fn quasi_lie(m: usize, order: usize) -> Result<Arc<QuasiLieGroup>, LieError> {
    type Cache = RwLock<HashMap<(usize, usize), Arc<QuasiLieGroup>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(q) = cache.read().expect("cache poisoned").get(&(m, order)) {
        return Ok(q.clone());
    }
    let q = Arc::new(QuasiLieGroup::new(m, order)?);
    Ok(cache.write().expect("cache poisoned").entry((m, order)).or_insert(q).clone())
}
