use serde::{Deserialize, Serialize};

use super::{free_lie, quasi_lie, LieError};
use crate::abgroup::{Hom, IntMatrix, Presentation};
use crate::trees::RootedTree;
use crate::{Check, Group, Int, Matrix, Structure};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SquaringReport {
    pub m: usize,
    pub k: usize,
    /// Row `h` is `[h,h]` in `ℤ₂ ⊗ ℒ′_{2k}` generator coordinates.
    pub matrix: Matrix,
    /// `ker(ℤ₂⊗ℒ′_{2k} → ℤ₂⊗ℒ_{2k})`.
    pub kernel: Structure,
    pub checks: Vec<Check>,
}

impl SquaringReport {
    pub fn pass(&self) -> bool {
        crate::all_pass(&self.checks)
    }
}

/// `X ↦ [X,X]` from `ℤ₂ ⊗ ℒ_k` to `ℤ₂ ⊗ ℒ′_{2k}`.
///
/// Mod 2 the cross terms `[X,Y] + [Y,X]` vanish, so the map is linear and
/// fixed by `h ↦ (h,h)` on Hall elements. The report checks that it is
/// injective with image exactly the kernel of `ℤ₂⊗ℒ′_{2k} → ℤ₂⊗ℒ_{2k}`.
pub fn squaring_map(m: usize, k: usize) -> Result<SquaringReport, LieError> {
    if m == 0 || k == 0 {
        return Err(LieError::InvalidParameters(format!("squaring map needs m, k ≥ 1, got m={m}, k={k}")));
    }
    let lie = free_lie(m, 2 * k);
    let hall = lie.hall();
    let q = quasi_lie(m, 2 * k - 1)?;

    let basis_k: Vec<RootedTree> = hall.block(k).map(|i| hall.tree(i).clone()).collect();
    let basis_2k = hall.block(2 * k).len();
    let source: Group = Presentation::free(basis_k.iter().map(ToString::to_string).collect()).tensor_z2();
    let middle = q.presentation().tensor_z2();
    let target: Group = Presentation::free((0..basis_2k).map(|j| format!("h{j}")).collect()).tensor_z2();

    let mut sq_rows = Vec::with_capacity(basis_k.len());
    for h in &basis_k {
        let (col, _) = q.locate(&RootedTree::node(h.clone(), h.clone())).expect("square is a generator");
        sq_rows.push(vec![(col, Int::from(1))]);
    }
    let sq_matrix = IntMatrix::from_sparse_rows(q.len(), sq_rows)?;
    let mut pi_rows = Vec::with_capacity(q.len());
    for g in q.generators() {
        pi_rows.push(lie.coords(&lie.expand(g.tree())?, 2 * k));
    }
    let pi_matrix = IntMatrix::from_dense_cols(basis_2k, &pi_rows);

    let sq = Hom::new(&source, &middle, sq_matrix.clone())?;
    let pi = Hom::new(&middle, &target, pi_matrix)?;
    let kernel = pi.kernel()?;
    let checks = vec![
        Check::flag("squaring well defined", sq.is_well_defined()?),
        Check::flag("quotient well defined", pi.is_well_defined()?),
        Check::flag("squaring injective", sq.is_injective()?),
        Check::flag("image inside the kernel", sq.composes_to_zero(&pi)?),
        Check::new("kernel inside the image", sq.kernel_of_next_in_image(&pi)?, format!("kernel = {kernel}")),
    ];
    Ok(SquaringReport { m, k, matrix: sq_matrix, kernel, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_two_squares_are_the_loops() {
        for m in 1..=3 {
            let r = squaring_map(m, 1).unwrap();
            assert!(r.pass(), "{:?}", r.checks);
            assert_eq!(r.kernel.mod2_dimension(), m);
        }
    }

    #[test]
    fn degree_four() {
        let r = squaring_map(2, 2).unwrap();
        assert!(r.pass(), "{:?}", r.checks);
        assert_eq!(r.matrix.nrows(), 1);
        assert!(squaring_map(2, 0).is_err());
    }
}
