use super::{Combination, TauError, TauGenerator};
use crate::trees::{all_rootings, enumerate_unrooted, inner_product, rooted_product, CanonicalTree, RootedTree};

/// `Δ(t) = Σ_v ⟨i(v), (T_v, T_v)⟩` over the univalent vertices of `t`.
///
/// Every term is symmetric, so `2·Δ(t)` vanishes modulo antisymmetry.
pub fn delta(t: &CanonicalTree) -> Combination {
    let mut out = Combination::new();
    for r in all_rootings(&t.to_unrooted()) {
        let doubled = rooted_product(&r.tree, &r.tree);
        out.add_tree(&inner_product(&RootedTree::Leaf(r.label), &doubled), r.sign);
    }
    out
}

/// Linear extension of [`delta`] to a combination of trees.
pub fn delta_of(c: &Combination) -> Result<Combination, TauError> {
    let mut out = Combination::new();
    for (g, v) in c.iter() {
        match g {
            TauGenerator::Tree(t) => out.add_combination(&delta(t), v),
            TauGenerator::Inf(_) => {
                return Err(TauError::InvalidParameters(format!("Δ is not defined on {g}")));
            }
        }
    }
    Ok(out)
}

/// `Δ` of every order-`p` tree, spanning the framing relations in order `2p+1`.
pub fn delta_span(m: usize, p: usize) -> Result<Vec<Combination>, TauError> {
    Ok(enumerate_unrooted(m, p)?.iter().map(delta).filter(|c| !c.is_empty()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{canonicalize, UnrootedTree};
    use num_traits::Zero;

    fn canon(s: &str) -> CanonicalTree {
        canonicalize(&s.parse::<UnrootedTree>().unwrap()).0
    }

    fn gen(s: &str) -> TauGenerator {
        TauGenerator::Tree(canon(s))
    }

    #[test]
    fn delta_of_a_chord() {
        let d = delta(&canon("<1,2>"));
        assert_eq!(d.len(), 2);
        assert!(!d.coefficient(&gen("<1,(2,2)>")).is_zero());
        assert!(!d.coefficient(&gen("<2,(1,1)>")).is_zero());
    }

    #[test]
    fn delta_of_a_loop_doubles_one_class() {
        let d = delta(&canon("<1,1>"));
        assert_eq!(d.len(), 1);
        assert_eq!(d.coefficient(&gen("<1,(1,1)>")).magnitude().to_string(), "2");
    }

    #[test]
    fn delta_of_a_tripod_has_one_term_per_leaf() {
        let d = delta(&canon("<1,(2,3)>"));
        assert_eq!(d.len(), 3);
        assert!(d.iter().all(|(g, _)| match g {
            TauGenerator::Tree(t) => t.order() == 3 && t.symmetric(),
            TauGenerator::Inf(_) => false,
        }));
        assert!(!d.coefficient(&gen("<1,((3,2),(3,2))>")).is_zero());
    }
}
