use super::lattice::Lattice;
use super::matrix::IntMatrix;
use super::presentation::Presentation;
use super::structure::GroupStructure;
use super::{AbGroupError, Scalar};

/// A homomorphism between presented groups, given on generators: row `i` of
/// `matrix` is the image of source generator `i` in target coordinates.
#[derive(Clone, Debug)]
pub struct Hom<'a, T> {
    pub source: &'a Presentation<T>,
    pub target: &'a Presentation<T>,
    pub matrix: IntMatrix<T>,
}

impl<'a, T: Scalar> Hom<'a, T> {
    pub fn new(
        source: &'a Presentation<T>,
        target: &'a Presentation<T>,
        matrix: IntMatrix<T>,
    ) -> Result<Self, AbGroupError> {
        if matrix.nrows() != source.generator_count() {
            return Err(AbGroupError::DimensionMismatch { expected: source.generator_count(), found: matrix.nrows() });
        }
        if matrix.ncols() != target.generator_count() {
            return Err(AbGroupError::DimensionMismatch { expected: target.generator_count(), found: matrix.ncols() });
        }
        Ok(Hom { source, target, matrix })
    }

    pub fn apply(&self, x: &[T]) -> Result<Vec<T>, AbGroupError> {
        self.matrix.left_mul_vec(x)
    }

    /// Every source relator maps into the target relator lattice.
    pub fn is_well_defined(&self) -> Result<bool, AbGroupError> {
        let images = self.source.relators.mul(&self.matrix)?;
        Lattice::from_rows(&images).is_subset_of(&self.target.relator_lattice())
    }

    /// `{ x ∈ ℤ^source : x·F ∈ span(target relators) }`.
    pub fn kernel_lattice(&self) -> Result<Lattice<T>, AbGroupError> {
        let stacked = self.matrix.vstack(&self.target.relators)?;
        Ok(Lattice::left_kernel(&stacked).project(self.source.generator_count()))
    }

    /// Kernel as an abstract group: kernel lattice modulo source relators.
    pub fn kernel(&self) -> Result<GroupStructure<T>, AbGroupError> {
        self.kernel_lattice()?.quotient(&self.source.relator_lattice())
    }

    /// Image plus target relators, in target coordinates.
    pub fn image_lattice(&self) -> Result<Lattice<T>, AbGroupError> {
        Ok(Lattice::from_rows(&self.matrix.vstack(&self.target.relators)?))
    }

    pub fn is_surjective(&self) -> Result<bool, AbGroupError> {
        Ok(self.image_lattice()?.is_full())
    }

    pub fn is_injective(&self) -> Result<bool, AbGroupError> {
        self.kernel_lattice()?.is_subset_of(&self.source.relator_lattice())
    }

    pub fn cokernel(&self) -> Result<GroupStructure<T>, AbGroupError> {
        Lattice::full(self.target.generator_count()).quotient(&self.image_lattice()?)
    }

    /// Image as an abstract group: (image + target relators) / target relators.
    pub fn image(&self) -> Result<GroupStructure<T>, AbGroupError> {
        self.image_lattice()?.quotient(&self.target.relator_lattice())
    }

    /// The composite `self` then `next` is the zero map.
    pub fn composes_to_zero(&self, next: &Hom<'_, T>) -> Result<bool, AbGroupError> {
        let comp = self.matrix.mul(&next.matrix)?;
        Lattice::from_rows(&comp).is_subset_of(&next.target.relator_lattice())
    }

    /// `ker(next) ⊆ im(self)`, i.e. exactness at the middle given
    /// [`Hom::composes_to_zero`].
    pub fn kernel_of_next_in_image(&self, next: &Hom<'_, T>) -> Result<bool, AbGroupError> {
        let image = Lattice::from_rows(&self.matrix.vstack(&self.target.relators)?);
        next.kernel_lattice()?.is_subset_of(&image)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(gens: usize, rel: &[Vec<i64>]) -> Presentation<i64> {
        let names = (0..gens).map(|i| format!("g{i}")).collect();
        if rel.is_empty() {
            Presentation::free(names)
        } else {
            Presentation::new(names, IntMatrix::from_i64(rel)).unwrap()
        }
    }

    #[test]
    fn z_to_z_times_two() {
        let z = pres(1, &[]);
        let f = Hom::new(&z, &z, IntMatrix::from_i64(&[vec![2]])).unwrap();
        assert!(f.is_well_defined().unwrap());
        assert!(f.is_injective().unwrap());
        assert!(!f.is_surjective().unwrap());
        assert_eq!(f.cokernel().unwrap().to_string(), "Z2");
        assert!(f.kernel().unwrap().is_trivial());
    }

    #[test]
    fn short_exact_z_z_z2() {
        let z = pres(1, &[]);
        let z2 = pres(1, &[vec![2]]);
        let f = Hom::new(&z, &z, IntMatrix::from_i64(&[vec![2]])).unwrap();
        let g = Hom::new(&z, &z2, IntMatrix::from_i64(&[vec![1]])).unwrap();
        assert!(g.is_well_defined().unwrap());
        assert!(f.composes_to_zero(&g).unwrap());
        assert!(f.kernel_of_next_in_image(&g).unwrap());
        assert!(g.is_surjective().unwrap());
        assert_eq!(g.kernel().unwrap().to_string(), "Z");
    }

    #[test]
    fn ill_defined_map_is_detected() {
        let z2 = pres(1, &[vec![2]]);
        let z3 = pres(1, &[vec![3]]);
        let f = Hom::new(&z2, &z3, IntMatrix::from_i64(&[vec![1]])).unwrap();
        assert!(!f.is_well_defined().unwrap());
        assert!(f.kernel().is_err());
    }

    #[test]
    fn torsion_kernel() {
        // Z ⊕ Z2 → Z2, (a, b) ↦ a + b
        let src = pres(2, &[vec![0, 2]]);
        let tgt = pres(1, &[vec![2]]);
        let f = Hom::new(&src, &tgt, IntMatrix::from_i64(&[vec![1], vec![1]])).unwrap();
        assert!(f.is_well_defined().unwrap());
        assert_eq!(f.kernel().unwrap().to_string(), "Z");
        assert!(!f.is_injective().unwrap());
        assert!(f.is_surjective().unwrap());
    }
}
