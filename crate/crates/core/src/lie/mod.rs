//! The free Lie algebra `ℒ(m)` in a Hall basis and the free quasi-Lie
//! algebra `ℒ′(m)` as presented groups of rooted trees.
//!
//! Degree is bracket length: a rooted tree of order `n` lives in degree
//! `n + 1`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::abgroup::AbGroupError;
use crate::tautower::TauError;
use crate::trees::TreeError;
use crate::Int;

mod hall;
mod kernel;
mod quasi;
mod squaring;

pub use hall::{free_lie, hall_basis, FreeLie, HallBasis, HallSet, HallShape};
pub use kernel::{
    bracket_kernel, eta, eta_prime, tensor_presentation, verify_levine_iso, verify_levine_iso_with, BracketKernel,
    LevineReport, TensorElement,
};
pub use quasi::{quasi_lie, QuasiLieGroup};
pub use squaring::{squaring_map, SquaringReport};

#[derive(Debug, Error)]
pub enum LieError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("degree {degree} exceeds the Hall set built to degree {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    AbGroup(#[from] AbGroupError),
    #[error(transparent)]
    Tau(Box<TauError>),
}

impl From<TauError> for LieError {
    fn from(e: TauError) -> Self {
        LieError::Tau(Box::new(e))
    }
}

/// `(1/n) Σ_{d|n} μ(d) m^{n/d}`, the rank of `ℒₙ(m)`.
pub fn witt_number(m: usize, n: usize) -> Int {
    if n == 0 {
        return Int::zero();
    }
    let mut total = Int::zero();
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let term = num_traits::pow(Int::from(m), n / d);
        match mobius(d) {
            1 => total += term,
            -1 => total -= term,
            _ => {}
        }
    }
    total / Int::from(n)
}

fn mobius(mut d: usize) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            d /= p;
            if d.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if d > 1 {
        sign = -sign;
    }
    sign
}

/// Homogeneous element of `ℒ(m)` in Hall coordinates, indexed by position
/// in the owning [`HallSet`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LieElement {
    terms: BTreeMap<usize, Int>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(index: usize) -> Self {
        let mut e = Self::default();
        e.terms.insert(index, Int::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, index: usize) -> Int {
        self.terms.get(&index).cloned().unwrap_or_else(Int::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Int)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn add_scaled(&mut self, other: &LieElement, k: &Int) {
        for (i, c) in &other.terms {
            let slot = self.terms.entry(*i).or_insert_with(Int::zero);
            *slot += c * k;
            if slot.is_zero() {
                self.terms.remove(i);
            }
        }
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        out.add_scaled(other, &Int::one());
        out
    }

    pub fn scaled(&self, k: &Int) -> LieElement {
        let mut out = LieElement::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn neg(&self) -> LieElement {
        self.scaled(&-Int::one())
    }
}
