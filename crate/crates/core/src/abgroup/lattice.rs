use super::hnf::{hnf_with, EliminationConfig};
use super::matrix::IntMatrix;
use super::snf::snf_with;
use super::structure::{BasisChange, GroupStructure};
use super::{AbGroupError, Scalar};

/// A sublattice of `ℤ^dim`, stored as its Hermite basis.
///
/// The Hermite basis is unique, so two lattices are equal iff their bases are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice<T> {
    dim: usize,
    basis: IntMatrix<T>,
    pivots: Vec<usize>,
}

impl<T: Scalar> Lattice<T> {
    /// Lattice spanned by the rows of `m`.
    pub fn from_rows(m: &IntMatrix<T>) -> Self {
        let h = hnf_with(m, false, EliminationConfig::default());
        let mut basis = IntMatrix::zeros(0, m.ncols());
        for (i, row) in h.h.into_rows().into_iter().enumerate() {
            if i < h.rank {
                basis.push_sparse_row(row);
            }
        }
        Lattice { dim: m.ncols(), basis, pivots: h.pivots }
    }

    pub fn full(dim: usize) -> Self {
        Lattice { dim, basis: IntMatrix::identity(dim), pivots: (0..dim).collect() }
    }

    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: IntMatrix::zeros(0, dim), pivots: Vec::new() }
    }

    /// `{ y : y·m = 0 }`, a sublattice of `ℤ^{m.nrows()}`.
    pub fn left_kernel(m: &IntMatrix<T>) -> Self {
        let h = hnf_with(m, true, EliminationConfig::default());
        let u = h.u.expect("requested");
        let mut k = IntMatrix::zeros(0, m.nrows());
        for (i, row) in u.into_rows().into_iter().enumerate() {
            if i >= h.rank {
                k.push_sparse_row(row);
            }
        }
        Lattice::from_rows(&k)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &IntMatrix<T> {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim && (0..self.dim).all(|i| self.basis.get(i, i).is_one())
    }

    /// Coefficients `y` with `y·basis = x`, if `x` lies in the lattice.
    pub fn coordinates(&self, x: &[T]) -> Result<Option<Vec<T>>, AbGroupError> {
        if x.len() != self.dim {
            return Err(AbGroupError::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let mut rest = x.to_vec();
        let mut y = Vec::with_capacity(self.rank());
        for (k, &pc) in self.pivots.iter().enumerate() {
            let p = self.basis.get(k, pc);
            let (q, r) = rest[pc].div_rem(&p);
            if !r.is_zero() {
                return Ok(None);
            }
            if !q.is_zero() {
                for (c, v) in self.basis.row(k) {
                    rest[*c] = rest[*c].clone() - q.clone() * v.clone();
                }
            }
            y.push(q);
        }
        Ok(rest.iter().all(|v| v.is_zero()).then_some(y))
    }

    pub fn contains(&self, x: &[T]) -> Result<bool, AbGroupError> {
        Ok(self.coordinates(x)?.is_some())
    }

    pub fn is_subset_of(&self, other: &Lattice<T>) -> Result<bool, AbGroupError> {
        for i in 0..self.rank() {
            if !other.contains(&self.basis.dense_row(i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Lattice<T>) -> Result<Lattice<T>, AbGroupError> {
        Ok(Lattice::from_rows(&self.basis.vstack(&other.basis)?))
    }

    /// Lattice of the first `k` coordinates of every vector.
    pub fn project(&self, k: usize) -> Lattice<T> {
        let rows: Vec<Vec<(usize, T)>> =
            (0..self.rank()).map(|i| self.basis.row(i).iter().filter(|(c, _)| *c < k).cloned().collect()).collect();
        Lattice::from_rows(&IntMatrix::from_sparse_rows(k, rows).expect("in range"))
    }

    /// Structure of `self / sub`; `sub` must be contained in `self`.
    pub fn quotient(&self, sub: &Lattice<T>) -> Result<GroupStructure<T>, AbGroupError> {
        if sub.dim != self.dim {
            return Err(AbGroupError::DimensionMismatch { expected: self.dim, found: sub.dim });
        }
        let mut coords = IntMatrix::zeros(0, self.rank());
        for i in 0..sub.rank() {
            let y = self.coordinates(&sub.basis.dense_row(i))?.ok_or(AbGroupError::NotASublattice)?;
            coords.push_row(&y);
        }
        let s = snf_with(&coords, false, true, EliminationConfig::default());
        Ok(GroupStructure::from_diagonal(
            self.rank(),
            &s.diagonal,
            s.v.map(|v| BasisChange { v, diagonal: s.diagonal.clone() }),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(rows: &[Vec<i64>]) -> Lattice<i64> {
        Lattice::from_rows(&IntMatrix::from_i64(rows))
    }

    #[test]
    fn membership_and_coordinates() {
        let l = lat(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(l, lat(&[vec![1, 2], vec![0, 2]]));
        assert!(l.contains(&[1, 0]).unwrap());
        assert!(!l.contains(&[0, 1]).unwrap());
        let y = l.coordinates(&[5, 6]).unwrap().unwrap();
        assert_eq!(l.basis().left_mul_vec(&y).unwrap(), vec![5, 6]);
        assert!(l.contains(&[1]).is_err());
    }

    #[test]
    fn kernels_and_quotients() {
        let m = IntMatrix::<i64>::from_i64(&[vec![1, 2], vec![2, 4], vec![0, 1]]);
        let k = Lattice::left_kernel(&m);
        assert_eq!(k.rank(), 1);
        let v = k.basis().dense_row(0);
        assert_eq!(m.left_mul_vec(&v).unwrap(), vec![0, 0]);

        let full = Lattice::<i64>::full(2);
        let sub = lat(&[vec![2, 0], vec![0, 3]]);
        let q = full.quotient(&sub).unwrap();
        assert_eq!(q.free_rank, 0);
        assert_eq!(q.torsion, vec![6]);
        let q = full.quotient(&lat(&[vec![2, 0]])).unwrap();
        assert_eq!((q.free_rank, q.torsion.clone()), (1, vec![2]));
        assert!(sub.quotient(&full).is_err());
        assert!(sub.is_subset_of(&full).unwrap());
        assert!(!full.is_subset_of(&sub).unwrap());
    }

    #[test]
    fn projection() {
        let l = lat(&[vec![1, 0, 5], vec![0, 2, 7]]);
        assert_eq!(l.project(2), lat(&[vec![1, 0], vec![0, 2]]));
        assert!(Lattice::<i64>::full(3).is_full());
        assert!(!lat(&[vec![2]]).is_full());
    }
}
