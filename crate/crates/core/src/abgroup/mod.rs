//! Exact integer linear algebra and finitely presented abelian groups.
//!
//! Everything is generic over an integer [`Scalar`]; the tree groups use
//! arbitrary precision (see the aliases at the crate root) while small unit
//! tests also run on machine integers.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};
use thiserror::Error;

mod hnf;
mod hom;
mod lattice;
mod matrix;
mod presentation;
mod snf;
mod structure;

pub use hnf::{hnf, hnf_with, EliminationConfig, Hnf};
pub use hom::Hom;
pub use lattice::Lattice;
pub use matrix::{IntMatrix, MATRIX_FORMAT};
pub use presentation::{content_hash, hex, Presentation};
pub use snf::{snf, snf_with, Snf};
pub use structure::{BasisChange, ElementNF, GroupStructure};

/// Exact integer ring the linear algebra runs over.
pub trait Scalar:
    Integer + Num + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Integer + Num + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbGroupError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("lattice is not contained in the ambient lattice")]
    NotASublattice,
    #[error("structure was computed without a basis change")]
    NoBasisChange,
}
