use std::fmt;

use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::matrix::{scalar_from_json, scalar_to_json, IntMatrix};
use super::{AbGroupError, Scalar};

/// Generator-to-Smith coordinates: `x ↦ x·v`, then coordinate `i` is read
/// modulo `diagonal[i]` (dropped when that is 1) and coordinates past the
/// diagonal are free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange<T> {
    pub v: IntMatrix<T>,
    pub diagonal: Vec<T>,
}

/// `ℤ^free_rank ⊕ ⊕ ℤ/dᵢ` with `d₁ | d₂ | …` and every `dᵢ ≥ 2`.
#[derive(Clone, Debug)]
pub struct GroupStructure<T> {
    pub free_rank: usize,
    pub torsion: Vec<T>,
    pub basis_change: Option<BasisChange<T>>,
}

/// Normal form of an element in Smith coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElementNF<T> {
    pub free_coords: Vec<T>,
    /// Residues in `[0, dᵢ)`, aligned with [`GroupStructure::torsion`].
    pub torsion_coords: Vec<T>,
}

impl<T: Scalar> ElementNF<T> {
    pub fn is_zero(&self) -> bool {
        self.free_coords.iter().chain(&self.torsion_coords).all(|v| v.is_zero())
    }
}

impl<T: Scalar> GroupStructure<T> {
    /// Structure of `ℤ^generators` modulo a lattice whose Smith diagonal is
    /// `diagonal` (nonzero entries only).
    pub fn from_diagonal(generators: usize, diagonal: &[T], basis_change: Option<BasisChange<T>>) -> Self {
        GroupStructure {
            free_rank: generators - diagonal.len(),
            torsion: diagonal.iter().filter(|d| !d.is_one()).cloned().collect(),
            basis_change,
        }
    }

    pub fn trivial() -> Self {
        GroupStructure { free_rank: 0, torsion: Vec::new(), basis_change: None }
    }

    pub fn free(rank: usize) -> Self {
        GroupStructure { free_rank: rank, torsion: Vec::new(), basis_change: None }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of `ℤ₂` summands in `ℤ₂ ⊗ G`.
    pub fn mod2_dimension(&self) -> usize {
        self.free_rank + self.torsion.iter().filter(|d| d.is_even()).count()
    }

    /// `ℤ₂ ⊗ G` as a structure.
    pub fn tensor_z2(&self) -> GroupStructure<T> {
        let two = T::one() + T::one();
        GroupStructure { free_rank: 0, torsion: vec![two; self.mod2_dimension()], basis_change: None }
    }

    /// Same isomorphism type (ignores the basis change).
    pub fn same_group(&self, other: &GroupStructure<T>) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }

    /// Smith-coordinate normal form of `x` (generator coordinates).
    pub fn reduce(&self, x: &[T]) -> Result<ElementNF<T>, AbGroupError> {
        let bc = self.basis_change.as_ref().ok_or(AbGroupError::NoBasisChange)?;
        let y = bc.v.left_mul_vec(x)?;
        let mut torsion_coords = Vec::with_capacity(self.torsion.len());
        for (yi, d) in y.iter().zip(&bc.diagonal) {
            if !d.is_one() {
                torsion_coords.push(yi.mod_floor(d));
            }
        }
        let free_coords = y[bc.diagonal.len()..].to_vec();
        Ok(ElementNF { free_coords, torsion_coords })
    }
}

impl<T: Scalar> PartialEq for GroupStructure<T> {
    fn eq(&self, other: &Self) -> bool {
        self.same_group(other)
    }
}

impl<T: Scalar> Eq for GroupStructure<T> {}

/// `0`, `Z`, `Z^3`, `Z2`, `(Z2)^3`, `Z + (Z2)^2 + Z4`, …
impl<T: Scalar> fmt::Display for GroupStructure<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == d).count();
            parts.push(if run == 1 { format!("Z{d}") } else { format!("(Z{d})^{run}") });
            i += run;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StructureDoc {
    free_rank: usize,
    torsion: Vec<serde_json::Value>,
}

impl<T: Scalar> Serialize for GroupStructure<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        StructureDoc { free_rank: self.free_rank, torsion: self.torsion.iter().map(scalar_to_json).collect() }
            .serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for GroupStructure<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = StructureDoc::deserialize(d)?;
        let torsion = doc
            .torsion
            .iter()
            .map(scalar_from_json)
            .collect::<Result<Vec<T>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(GroupStructure { free_rank: doc.free_rank, torsion, basis_change: None })
    }
}
