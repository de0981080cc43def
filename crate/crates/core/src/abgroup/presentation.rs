use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::hnf::{hnf_with, EliminationConfig, Hnf};
use super::lattice::Lattice;
use super::matrix::IntMatrix;
use super::snf::snf_with;
use super::structure::{BasisChange, ElementNF, GroupStructure};
use super::{AbGroupError, Scalar};

/// Finitely presented abelian group: `ℤ^generators / rowspace(relators)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Presentation<T> {
    pub generators: Vec<String>,
    pub relators: IntMatrix<T>,
    #[serde(skip)]
    hnf: OnceLock<Arc<Hnf<T>>>,
}

type CacheKey = (TypeId, [u8; 32]);
type StructureCache = RwLock<HashMap<CacheKey, Arc<dyn Any + Send + Sync>>>;

fn structure_cache() -> &'static StructureCache {
    static CACHE: OnceLock<StructureCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// SHA-256 of the matrix entries, used as the decomposition cache key.
pub fn content_hash<T: Scalar>(m: &IntMatrix<T>) -> [u8; 32] {
    let digest = Sha256::digest(m.content_string().as_bytes());
    let mut out = [0u8; 32];
    out.copy_from_slice(&digest);
    out
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

impl<T: Scalar> Presentation<T> {
    pub fn new(generators: Vec<String>, relators: IntMatrix<T>) -> Result<Self, AbGroupError> {
        if relators.ncols() != generators.len() {
            return Err(AbGroupError::DimensionMismatch { expected: generators.len(), found: relators.ncols() });
        }
        Ok(Presentation { generators, relators, hnf: OnceLock::new() })
    }

    /// Free abelian group on the given generators.
    pub fn free(generators: Vec<String>) -> Self {
        let n = generators.len();
        Presentation { generators, relators: IntMatrix::zeros(0, n), hnf: OnceLock::new() }
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.nrows()
    }

    /// Same generators with extra relator rows.
    pub fn with_relators(&self, extra: &IntMatrix<T>) -> Result<Self, AbGroupError> {
        Presentation::new(self.generators.clone(), self.relators.vstack(extra)?)
    }

    /// `ℤ₂ ⊗ G`: every generator additionally killed twice.
    pub fn tensor_z2(&self) -> Self {
        let two = T::one() + T::one();
        let extra = IntMatrix::identity(self.generator_count()).scaled(&two);
        self.with_relators(&extra).expect("same width")
    }

    pub fn relator_lattice(&self) -> Lattice<T> {
        Lattice::from_rows(&self.relators)
    }

    /// Invariant factors via Smith normal form, memoized by content hash.
    pub fn structure(&self) -> Arc<GroupStructure<T>> {
        let key = (TypeId::of::<T>(), content_hash(&self.relators));
        if let Some(hit) = structure_cache().read().expect("cache poisoned").get(&key) {
            if let Ok(s) = hit.clone().downcast::<GroupStructure<T>>() {
                return s;
            }
        }
        let s = snf_with(&self.relators, false, true, EliminationConfig::default());
        let structure = Arc::new(GroupStructure::from_diagonal(
            self.generator_count(),
            &s.diagonal,
            s.v.map(|v| BasisChange { v, diagonal: s.diagonal.clone() }),
        ));
        structure_cache().write().expect("cache poisoned").entry(key).or_insert_with(|| structure.clone());
        structure
    }

    pub fn reduce(&self, x: &[T]) -> Result<ElementNF<T>, AbGroupError> {
        self.check_len(x)?;
        self.structure().reduce(x)
    }

    pub fn is_zero(&self, x: &[T]) -> Result<bool, AbGroupError> {
        Ok(self.reduce(x)?.is_zero())
    }

    fn check_len(&self, x: &[T]) -> Result<(), AbGroupError> {
        if x.len() != self.generator_count() {
            return Err(AbGroupError::DimensionMismatch { expected: self.generator_count(), found: x.len() });
        }
        Ok(())
    }

    fn hnf(&self) -> Arc<Hnf<T>> {
        self.hnf.get_or_init(|| Arc::new(hnf_with(&self.relators, true, EliminationConfig::default()))).clone()
    }

    /// Relator combination `c` with `c·relators = x`, when `x` vanishes.
    ///
    /// Solved against the Hermite form `H = U·R` and pulled back through `U`.
    pub fn zero_certificate(&self, x: &[T]) -> Result<Option<Vec<T>>, AbGroupError> {
        self.check_len(x)?;
        let h = self.hnf();
        let mut rest = x.to_vec();
        let mut y = vec![T::zero(); self.relator_count()];
        for (k, &pc) in h.pivots.iter().enumerate() {
            let p = h.h.get(k, pc);
            let (q, r) = rest[pc].div_rem(&p);
            if !r.is_zero() {
                return Ok(None);
            }
            if !q.is_zero() {
                for (c, v) in h.h.row(k) {
                    rest[*c] = rest[*c].clone() - q.clone() * v.clone();
                }
            }
            y[k] = q;
        }
        if !rest.iter().all(|v| v.is_zero()) {
            return Ok(None);
        }
        let u = h.u.as_ref().expect("transform requested");
        Ok(Some(u.left_mul_vec(&y)?))
    }
}
