use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{free_lie, quasi_lie, FreeLie, LieError, QuasiLieGroup};
use crate::abgroup::{GroupStructure, Hom, IntMatrix, Lattice, Presentation};
use crate::tautower::{build_tau, TauGenerator, TauGroup};
use crate::trees::{all_rootings, CanonicalTree, RootedTree};
use crate::{Check, Group, Int, Matrix, Structure};

/// Element of `ℒ₁ ⊗ V` as an `m × width` array: entry `(i, j)` is the
/// coefficient of `e_{i+1} ⊗ v_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorElement {
    pub m: usize,
    pub width: usize,
    pub coords: Vec<Int>,
}

impl TensorElement {
    pub fn zero(m: usize, width: usize) -> Self {
        TensorElement { m, width, coords: vec![Int::zero(); m * width] }
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.coords[i * self.width + j]
    }

    fn bump(&mut self, label: u32, j: usize, c: &Int) {
        self.coords[(label as usize - 1) * self.width + j] += c;
    }
}

/// `ℒ₁ ⊗ ℒ′_{n+1}`: `m` copies of the quasi-Lie presentation.
pub fn tensor_presentation(q: &QuasiLieGroup) -> Result<Group, LieError> {
    let (m, w) = (q.m(), q.len());
    let mut names = Vec::with_capacity(m * w);
    for i in 1..=m {
        names.extend(q.generators().iter().map(|g| format!("{i}⊗{g}")));
    }
    let rel = q.presentation().relators.clone();
    let mut rows = Vec::with_capacity(m * rel.nrows());
    for i in 0..m {
        for r in 0..rel.nrows() {
            rows.push(rel.row(r).iter().map(|(c, v)| (i * w + c, v.clone())).collect());
        }
    }
    Ok(Presentation::new(names, IntMatrix::from_sparse_rows(m * w, rows)?)?)
}

/// `e_i ⊗ J ↦ (i, J)` from `ℒ₁ ⊗ ℒ′_{n+1}` to `ℒ′_{n+2}`.
fn quasi_bracket_matrix(q: &QuasiLieGroup, target: &QuasiLieGroup) -> Result<Matrix, LieError> {
    let mut rows = Vec::with_capacity(q.m() * q.len());
    for i in 1..=q.m() as u32 {
        for g in q.generators() {
            let (col, sign) = target
                .locate(&RootedTree::node(RootedTree::leaf(i), g.tree().clone()))
                .expect("bracket of generators is a generator");
            rows.push(vec![(col, Int::from(sign))]);
        }
    }
    Ok(IntMatrix::from_sparse_rows(target.len(), rows)?)
}

/// `e_i ⊗ h ↦ [i, h]` from `ℒ₁ ⊗ ℒ_{n+1}` to `ℒ_{n+2}` in Hall coordinates.
fn free_bracket_matrix(lie: &FreeLie, n: usize) -> Result<Matrix, LieError> {
    let m = lie.hall().m();
    let mut rows = Vec::new();
    for i in 1..=m as u32 {
        let e = lie.generator(i)?;
        for h in lie.hall().block(n + 1) {
            let b = lie.bracket(&e, &super::LieElement::basis(h))?;
            rows.push(lie.coords(&b, n + 2));
        }
    }
    Ok(IntMatrix::from_dense_cols(lie.hall().block(n + 2).len(), &rows))
}

/// `Dₙ` (free) or `D′ₙ` (quasi): the kernel of the bracket map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracketKernel {
    pub m: usize,
    pub n: usize,
    pub quasi: bool,
    pub structure: Structure,
    /// Hermite basis of the kernel lattice in `ℒ₁ ⊗ ℒ_{n+1}` coordinates.
    pub basis: Matrix,
}

pub fn bracket_kernel(m: usize, n: usize, quasi: bool) -> Result<BracketKernel, LieError> {
    if m == 0 {
        return Err(LieError::InvalidParameters("m must be at least 1".into()));
    }
    if quasi {
        let q = quasi_lie(m, n)?;
        let target = quasi_lie(m, n + 1)?;
        let src = tensor_presentation(&q)?;
        let hom = Hom::new(&src, target.presentation(), quasi_bracket_matrix(&q, &target)?)?;
        let lattice = hom.kernel_lattice()?;
        let structure = lattice.quotient(&src.relator_lattice())?;
        Ok(BracketKernel { m, n, quasi, structure, basis: lattice.basis().clone() })
    } else {
        let lie = free_lie(m, n + 2);
        let lattice = Lattice::left_kernel(&free_bracket_matrix(&lie, n)?);
        let structure = GroupStructure::free(lattice.rank());
        Ok(BracketKernel { m, n, quasi, structure, basis: lattice.basis().clone() })
    }
}

/// `η′(t) = Σ_v e_{i(v)} ⊗ T_v` in `ℒ₁ ⊗ ℒ′_{n+1}`.
///
/// Rooting at `v` keeps every vertex orientation, so each term enters with
/// the canonicalization sign of `T_v` alone.
pub fn eta_prime(t: &CanonicalTree, q: &QuasiLieGroup) -> Result<TensorElement, LieError> {
    if t.order() != q.order() {
        return Err(LieError::InvalidParameters(format!(
            "tree of order {} against ℒ′ of order {}",
            t.order(),
            q.order()
        )));
    }
    let mut out = TensorElement::zero(q.m(), q.len());
    for r in all_rootings(&t.to_unrooted()) {
        let (col, sign) = q
            .locate(&r.tree)
            .ok_or_else(|| LieError::InvalidParameters(format!("label of {t} exceeds m = {}", q.m())))?;
        out.bump(r.label.0, col, &Int::from(sign * r.sign));
    }
    Ok(out)
}

/// `η(t) = Σ_v e_{i(v)} ⊗ T_v` in `ℒ₁ ⊗ ℒ_{n+1}` (Hall coordinates).
pub fn eta(t: &CanonicalTree, lie: &FreeLie) -> Result<TensorElement, LieError> {
    let d = t.order() + 1;
    let width = lie.hall().block(d).len();
    let mut out = TensorElement::zero(lie.hall().m(), width);
    for r in all_rootings(&t.to_unrooted()) {
        let x = lie.expand(&r.tree)?;
        for (j, c) in lie.coords(&x, d).iter().enumerate() {
            out.bump(r.label.0, j, &(c * r.sign));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevineReport {
    pub m: usize,
    pub n: usize,
    pub tau: Structure,
    pub d_prime: Structure,
    pub checks: Vec<Check>,
}

impl LevineReport {
    pub fn pass(&self) -> bool {
        crate::all_pass(&self.checks)
    }
}

pub fn verify_levine_iso(m: usize, n: usize) -> Result<LevineReport, LieError> {
    verify_levine_iso_with(&build_tau(m, n)?)
}

/// `η′ : 𝒯ₙ → ℒ₁ ⊗ ℒ′_{n+1}` is well defined, lands in `D′ₙ`, and is an
/// isomorphism onto it.
pub fn verify_levine_iso_with(tau: &TauGroup) -> Result<LevineReport, LieError> {
    let (m, n) = (tau.m(), tau.n());
    let q = quasi_lie(m, n)?;
    let target = quasi_lie(m, n + 1)?;
    let src = tensor_presentation(&q)?;
    let bracket = Hom::new(&src, target.presentation(), quasi_bracket_matrix(&q, &target)?)?;

    let mut rows = Vec::with_capacity(tau.generators().len());
    for g in tau.generators() {
        let TauGenerator::Tree(t) = g else {
            return Err(LieError::InvalidParameters("η′ is defined on framed trees only".into()));
        };
        rows.push(eta_prime(t, &q)?.coords);
    }
    let eta = Hom::new(tau.presentation(), &src, IntMatrix::from_dense_cols(src.generator_count(), &rows))?;

    let kernel_lattice = bracket.kernel_lattice()?;
    let d_prime = kernel_lattice.quotient(&src.relator_lattice())?;
    let tau_structure = (*tau.structure()).clone();
    let checks = vec![
        Check::flag("bracket well defined", bracket.is_well_defined()?),
        Check::flag("eta' well defined", eta.is_well_defined()?),
        Check::flag("eta' lands in the bracket kernel", eta.composes_to_zero(&bracket)?),
        Check::flag("eta' injective", eta.is_injective()?),
        Check::flag("eta' onto the bracket kernel", eta.kernel_of_next_in_image(&bracket)?),
        Check::new("invariant factors agree", tau_structure == d_prime, format!("T = {tau_structure}, D' = {d_prime}")),
    ];
    Ok(LevineReport { m, n, tau: tau_structure, d_prime, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::witt_number;
    use crate::trees::{canonicalize, UnrootedTree};

    fn canon(s: &str) -> CanonicalTree {
        canonicalize(&s.parse::<UnrootedTree>().unwrap()).0
    }

    #[test]
    fn free_kernel_ranks() {
        for m in 1..=3 {
            for n in 0..=2 {
                let k = bracket_kernel(m, n, false).unwrap();
                let expect = Int::from(m) * witt_number(m, n + 1) - witt_number(m, n + 2);
                assert_eq!(Int::from(k.structure.free_rank), expect, "m={m} n={n}");
            }
        }
        assert_eq!(bracket_kernel(2, 0, false).unwrap().structure.free_rank, 3);
        assert_eq!(bracket_kernel(2, 1, false).unwrap().structure.free_rank, 0);
        assert_eq!(bracket_kernel(3, 1, false).unwrap().structure.free_rank, 1);
    }

    #[test]
    fn eta_prime_of_the_tripod_satisfies_jacobi() {
        let q = quasi_lie(3, 1).unwrap();
        let e = eta_prime(&canon("<1,(2,3)>"), &q).unwrap();
        let nonzero: usize = e.coords.iter().filter(|c| !c.is_zero()).count();
        assert_eq!(nonzero, 3);
        let lie = free_lie(3, 3);
        let mut total = super::super::LieElement::zero();
        for i in 0..3 {
            for (j, g) in q.generators().iter().enumerate() {
                let c = e.get(i, j);
                if !c.is_zero() {
                    let t = RootedTree::node(RootedTree::leaf(i as u32 + 1), g.tree().clone());
                    total.add_scaled(&lie.expand(&t).unwrap(), c);
                }
            }
        }
        assert!(total.is_zero());
    }

    #[test]
    fn eta_of_a_chord_is_symmetric() {
        let lie = free_lie(2, 2);
        let e = eta(&canon("<1,2>"), &lie).unwrap();
        assert_eq!(e.coords, vec![Int::from(0), Int::from(1), Int::from(1), Int::from(0)]);
    }

    #[test]
    fn levine_small_cases() {
        for (m, n) in [(1, 0), (2, 0), (1, 1), (2, 1), (2, 2)] {
            let r = verify_levine_iso(m, n).unwrap();
            assert!(r.pass(), "m={m} n={n}: {:?}", r.checks);
        }
        let r = verify_levine_iso(2, 1).unwrap();
        assert_eq!(r.d_prime.to_string(), "(Z2)^4");
        assert_eq!(verify_levine_iso(2, 2).unwrap().d_prime.free_rank, 1);
    }
}
