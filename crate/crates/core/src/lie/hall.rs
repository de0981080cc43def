use std::collections::HashMap;
use std::ops::Range;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{LieElement, LieError};
use crate::trees::{RootedTree, TreeError};
use crate::Int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HallShape {
    Letter(u32),
    /// `[a, b]` by element index.
    Bracket(usize, usize),
}

/// A Hall set of `ℒ(m)` up to a fixed degree.
///
/// Elements are ordered by degree, then by creation. `[a,b]` belongs to the
/// set iff `a < b` and, when `b = [x,y]`, also `x ≤ a`. This is Marshall
/// Hall's basic-commutator rule with every bracket mirrored.
#[derive(Clone, Debug)]
pub struct HallSet {
    m: usize,
    max_degree: usize,
    shapes: Vec<HallShape>,
    trees: Vec<RootedTree>,
    degrees: Vec<usize>,
    pairs: HashMap<(usize, usize), usize>,
    blocks: Vec<Range<usize>>,
}

impl HallSet {
    pub fn new(m: usize, max_degree: usize) -> Self {
        let mut h = HallSet {
            m,
            max_degree,
            shapes: Vec::new(),
            trees: Vec::new(),
            degrees: Vec::new(),
            pairs: HashMap::new(),
            blocks: vec![Range::default()],
        };
        if max_degree == 0 {
            return h;
        }
        for i in 1..=m as u32 {
            h.shapes.push(HallShape::Letter(i));
            h.trees.push(RootedTree::leaf(i));
            h.degrees.push(1);
        }
        h.blocks.push(0..m);
        for d in 2..=max_degree {
            let start = h.shapes.len();
            for da in 1..=d / 2 {
                for a in h.blocks[da].clone() {
                    for b in h.blocks[d - da].clone() {
                        if a >= b {
                            continue;
                        }
                        if let HallShape::Bracket(x, _) = h.shapes[b] {
                            if x > a {
                                continue;
                            }
                        }
                        h.pairs.insert((a, b), h.shapes.len());
                        h.shapes.push(HallShape::Bracket(a, b));
                        h.trees.push(RootedTree::node(h.trees[a].clone(), h.trees[b].clone()));
                        h.degrees.push(d);
                    }
                }
            }
            h.blocks.push(start..h.shapes.len());
        }
        h
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    pub fn shape(&self, i: usize) -> HallShape {
        self.shapes[i]
    }

    pub fn tree(&self, i: usize) -> &RootedTree {
        &self.trees[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    /// Indices of the degree-`d` elements, a basis of `ℒ_d(m)`.
    pub fn block(&self, d: usize) -> Range<usize> {
        self.blocks.get(d).cloned().unwrap_or(0..0)
    }

    pub fn find(&self, a: usize, b: usize) -> Option<usize> {
        self.pairs.get(&(a, b)).copied()
    }
}

/// The degree-`n` part of a Hall set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallBasis {
    pub m: usize,
    pub degree: usize,
    pub elements: Vec<RootedTree>,
}

impl HallBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

pub fn hall_basis(m: usize, n: usize) -> Result<HallBasis, LieError> {
    if m == 0 || n == 0 {
        return Err(LieError::InvalidParameters(format!("hall basis needs m, n ≥ 1, got m={m}, n={n}")));
    }
    let lie = free_lie(m, n);
    let elements = lie.hall().block(n).map(|i| lie.hall().tree(i).clone()).collect();
    Ok(HallBasis { m, degree: n, elements })
}

/// `ℒ(m)` up to a fixed degree, with memoized bracketing of basis pairs.
#[derive(Debug)]
pub struct FreeLie {
    hall: HallSet,
    memo: RwLock<HashMap<(usize, usize), LieElement>>,
}

impl FreeLie {
    pub fn new(m: usize, max_degree: usize) -> Self {
        FreeLie { hall: HallSet::new(m, max_degree), memo: RwLock::default() }
    }

    pub fn hall(&self) -> &HallSet {
        &self.hall
    }

    pub fn generator(&self, label: u32) -> Result<LieElement, LieError> {
        if label == 0 || label as usize > self.hall.m {
            return Err(TreeError::LabelOutOfRange { label, m: self.hall.m as u32 }.into());
        }
        Ok(LieElement::basis(label as usize - 1))
    }

    fn degree_of(&self, x: &LieElement) -> Option<usize> {
        x.iter().next().map(|(i, _)| self.hall.degree(i))
    }

    /// `[x, y]` in Hall coordinates.
    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement, LieError> {
        if let (Some(dx), Some(dy)) = (self.degree_of(x), self.degree_of(y)) {
            if dx + dy > self.hall.max_degree {
                return Err(LieError::DegreeTooLarge { degree: dx + dy, max: self.hall.max_degree });
            }
        }
        Ok(self.bracket_unchecked(x, y))
    }

    fn bracket_unchecked(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let mut out = LieElement::zero();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                out.add_scaled(&self.bracket_basis(a, b), &(ca * cb));
            }
        }
        out
    }

    // [a,[x,y]] = [[a,x],y] + [x,[a,y]] whenever [a,[x,y]] is not itself Hall.
    fn bracket_basis(&self, a: usize, b: usize) -> LieElement {
        if a == b {
            return LieElement::zero();
        }
        if a > b {
            return self.bracket_basis(b, a).neg();
        }
        if let Some(i) = self.hall.find(a, b) {
            return LieElement::basis(i);
        }
        if let Some(hit) = self.memo.read().expect("memo poisoned").get(&(a, b)) {
            return hit.clone();
        }
        let HallShape::Bracket(x, y) = self.hall.shape(b) else {
            unreachable!("a bracket of two letters a < b is always Hall")
        };
        let ax = self.bracket_basis(a, x);
        let ay = self.bracket_basis(a, y);
        let out =
            self.bracket_unchecked(&ax, &LieElement::basis(y)).add(&self.bracket_unchecked(&LieElement::basis(x), &ay));
        self.memo.write().expect("memo poisoned").insert((a, b), out.clone());
        out
    }

    /// A rooted tree read as an iterated bracket.
    pub fn expand(&self, t: &RootedTree) -> Result<LieElement, LieError> {
        let degree = t.leaf_count();
        if degree > self.hall.max_degree {
            return Err(LieError::DegreeTooLarge { degree, max: self.hall.max_degree });
        }
        self.expand_unchecked(t)
    }

    fn expand_unchecked(&self, t: &RootedTree) -> Result<LieElement, LieError> {
        match t {
            RootedTree::Leaf(l) => self.generator(l.0),
            RootedTree::Node(a, b) => {
                Ok(self.bracket_unchecked(&self.expand_unchecked(a)?, &self.expand_unchecked(b)?))
            }
        }
    }

    /// Dense coordinates of a degree-`d` element over the degree-`d` basis.
    pub fn coords(&self, x: &LieElement, d: usize) -> Vec<Int> {
        let block = self.hall.block(d);
        let mut out = vec![Int::zero(); block.len()];
        for (i, c) in x.iter() {
            assert!(block.contains(&i), "element is not homogeneous of degree {d}");
            out[i - block.start] = c.clone();
        }
        out
    }

    /// `c₁ T₁ + c₂ T₂ − …` with Hall elements in rooted-tree notation.
    pub fn format(&self, x: &LieElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (i, c)) in x.iter().enumerate() {
            let neg = c < &Int::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            s.push_str(match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            if mag != Int::from(1) {
                s.push_str(&format!("{mag} "));
            }
            s.push_str(&self.hall.tree(i).to_string());
        }
        s
    }
}

/// Shared [`FreeLie`] on `m` generators covering at least `max_degree`.
///
/// Hall indices are stable as the degree grows, so a larger instance serves
/// every smaller request.
pub fn free_lie(m: usize, max_degree: usize) -> Arc<FreeLie> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<FreeLie>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(l) = cache.read().expect("cache poisoned").get(&m) {
        if l.hall.max_degree >= max_degree {
            return l.clone();
        }
    }
    let mut w = cache.write().expect("cache poisoned");
    match w.get(&m) {
        Some(l) if l.hall.max_degree >= max_degree => l.clone(),
        _ => {
            let l = Arc::new(FreeLie::new(m, max_degree));
            w.insert(m, l.clone());
            l
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::witt_number;

    fn names(m: usize, n: usize) -> Vec<String> {
        hall_basis(m, n).unwrap().elements.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn small_bases() {
        assert_eq!(names(2, 1), ["1", "2"]);
        assert_eq!(names(2, 2), ["(1,2)"]);
        assert_eq!(names(2, 3), ["(1,(1,2))", "(2,(1,2))"]);
    }

    #[test]
    fn sizes_are_witt_numbers() {
        for m in 1..=4 {
            let h = HallSet::new(m, 6);
            for n in 1..=6 {
                assert_eq!(Int::from(h.block(n).len()), witt_number(m, n), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn basic_brackets() {
        let l = FreeLie::new(2, 4);
        let one = l.generator(1).unwrap();
        let two = l.generator(2).unwrap();
        assert!(l.bracket(&one, &one).unwrap().is_zero());
        let b12 = l.bracket(&one, &two).unwrap();
        assert_eq!(l.format(&b12), "(1,2)");
        assert_eq!(l.format(&l.bracket(&two, &one).unwrap()), "-(1,2)");
        assert_eq!(l.format(&l.bracket(&two, &b12).unwrap()), "(2,(1,2))");
        assert_eq!(l.format(&l.bracket(&b12, &one).unwrap()), "-(1,(1,2))");
        let b112 = l.bracket(&one, &b12).unwrap();
        assert!(matches!(l.bracket(&b112, &b12), Err(LieError::DegreeTooLarge { degree: 5, max: 4 })));
        assert!(l.expand(&"((1,2),((1,2),1))".parse().unwrap()).is_err());
    }
}
