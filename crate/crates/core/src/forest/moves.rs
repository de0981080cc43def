use serde::{Deserialize, Serialize};

use super::{ForestError, IntersectionForest};
use crate::trees::{
    ihx_split, inner_product, rooted_internal_edges, rooted_product, unrooted_ihx, RootedTree, TreeError, UnrootedTree,
};

/// A forest rewrite with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// `(ω, J)` with `|ω| ≥ 2` becomes `|ω|` entries `(sign ω, J)`.
    Split { rooted: RootedTree, omega: i64 },
    /// Twist on `(i,J)` changes by `ε` and `−ε·⟨(i,J),J⟩` appears.
    BoundaryTwist { rooted: RootedTree, epsilon: i64 },
    /// Twist on `J` changes by `−2ε` and `ε·⟨J,J⟩` appears.
    InteriorTwist { rooted: RootedTree, epsilon: i64 },
    /// `(±1, I)` becomes `(±1, H)`, `(±1, X)` and `∓⟨H,X⟩`, where
    /// `I = H − X` at the given internal edge of `I`.
    TwistedIhx { rooted: RootedTree, omega: i64, edge: usize },
    /// Adds `+I − H + X` for the given internal edge of `T = I`.
    FramedIhxInsert { tree: UnrootedTree, edge: usize },
}

impl Move {
    pub fn name(&self) -> &'static str {
        match self {
            Move::Split { .. } => "split",
            Move::BoundaryTwist { .. } => "boundary_twist",
            Move::InteriorTwist { .. } => "interior_twist",
            Move::TwistedIhx { .. } => "twisted_ihx",
            Move::FramedIhxInsert { .. } => "framed_ihx_insert",
        }
    }

    pub fn apply(&self, f: &IntersectionForest) -> Result<IntersectionForest, ForestError> {
        let mut out = f.clone();
        match self {
            Move::Split { rooted, omega } => {
                if omega.abs() < 2 {
                    return Err(ForestError::Invalid(format!("splitting needs |ω| ≥ 2, got {omega}")));
                }
                let at = out.find_twist(rooted, Some(*omega)).ok_or_else(|| missing(*omega, rooted))?;
                let entry = out.twists_mut().remove(at);
                for _ in 0..omega.unsigned_abs() {
                    out.push_twist(omega.signum(), entry.rooted.clone());
                }
            }
            Move::BoundaryTwist { rooted, epsilon } => {
                check_unit(*epsilon)?;
                let j = match rooted {
                    RootedTree::Node(a, b) if a.is_leaf() => (**b).clone(),
                    RootedTree::Node(a, b) if b.is_leaf() => (**a).clone(),
                    _ => {
                        return Err(TreeError::Malformed(format!("{rooted} has no leaf branch at its root")).into());
                    }
                };
                bump_twist(&mut out, rooted, *epsilon);
                out.push_tree(-epsilon, inner_product(rooted, &j));
            }
            Move::InteriorTwist { rooted, epsilon } => {
                check_unit(*epsilon)?;
                bump_twist(&mut out, rooted, -2 * epsilon);
                out.push_tree(*epsilon, inner_product(rooted, rooted));
            }
            Move::TwistedIhx { rooted, omega, edge } => {
                if omega.abs() != 1 {
                    return Err(ForestError::NotUnit(*omega));
                }
                let at = out.find_twist(rooted, Some(*omega)).ok_or_else(|| missing(*omega, rooted))?;
                let path = rooted_internal_edges(rooted)
                    .into_iter()
                    .nth(*edge)
                    .ok_or_else(|| TreeError::Malformed(format!("{rooted} has no internal edge {edge}")))?;
                let (h, x) = ihx_split(rooted, &path)?;
                out.twists_mut().remove(at);
                out.push_twist(*omega, h.clone());
                out.push_twist(*omega, x.clone());
                out.push_tree(-omega, inner_product(&h, &x));
            }
            Move::FramedIhxInsert { tree, edge } => {
                let r = unrooted_ihx(tree, *edge)?;
                out.push_tree(1, r.i);
                out.push_tree(-1, r.h);
                out.push_tree(1, r.x);
            }
        }
        out.validate()?;
        Ok(out)
    }

    /// Applies the move and records the hashes on either side.
    pub fn record(&self, f: &IntersectionForest) -> Result<(IntersectionForest, MoveRecord), ForestError> {
        let next = self.apply(f)?;
        let record = MoveRecord { step: self.clone(), before: f.hash(), after: next.hash() };
        Ok((next, record))
    }
}

fn check_unit(epsilon: i64) -> Result<(), ForestError> {
    if epsilon.abs() != 1 {
        return Err(ForestError::Invalid(format!("ε must be ±1, got {epsilon}")));
    }
    Ok(())
}

fn missing(omega: i64, j: &RootedTree) -> ForestError {
    ForestError::MissingEntry(format!("{omega}·inf{j}"))
}

/// Changes the twist on the class of `j` by `by`, creating the entry when
/// absent and dropping it when it reaches zero.
fn bump_twist(f: &mut IntersectionForest, j: &RootedTree, by: i64) {
    match f.find_twist(j, None) {
        Some(at) => {
            let twists = f.twists_mut();
            twists[at].omega += by;
            if twists[at].omega == 0 {
                twists.remove(at);
            }
        }
        None => f.push_twist(by, j.clone()),
    }
}

/// A move as applied, with hashes of the forests before and after.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub step: Move,
    pub before: String,
    pub after: String,
}

/// Replays `log` from `initial`, checking every recorded hash.
pub fn replay(initial: &IntersectionForest, log: &[MoveRecord]) -> Result<IntersectionForest, ForestError> {
    let mut cur = initial.clone();
    for (step, rec) in log.iter().enumerate() {
        let found = cur.hash();
        if found != rec.before {
            return Err(ForestError::ReplayMismatch { step, expected: rec.before.clone(), found });
        }
        cur = rec.step.apply(&cur)?;
        let found = cur.hash();
        if found != rec.after {
            return Err(ForestError::ReplayMismatch { step, expected: rec.after.clone(), found });
        }
    }
    Ok(cur)
}

/// `(i,J)` for the boundary-twist move.
pub fn boundary_disk(i: u32, j: &RootedTree) -> RootedTree {
    rooted_product(&RootedTree::leaf(i), j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::tau_of;
    use crate::tautower::{build, TauKind};

    fn r(s: &str) -> RootedTree {
        s.parse().unwrap()
    }

    fn u(s: &str) -> UnrootedTree {
        s.parse().unwrap()
    }

    fn ms(f: &IntersectionForest) -> Vec<(String, i64)> {
        f.multiset().into_iter().collect()
    }

    #[test]
    fn split_positive_and_negative() {
        let f = IntersectionForest::empty(2).with_twist(2, r("(1,2)")).unwrap();
        let g = Move::Split { rooted: r("(1,2)"), omega: 2 }.apply(&f).unwrap();
        assert_eq!(ms(&g), vec![("1 inf(1,2)".to_string(), 2)]);
        let f = IntersectionForest::empty(2).with_twist(-3, r("(1,2)")).unwrap();
        let g = Move::Split { rooted: r("(2,1)"), omega: -3 }.apply(&f).unwrap();
        assert_eq!(ms(&g), vec![("-1 inf(1,2)".to_string(), 3)]);
        assert!(matches!(Move::Split { rooted: r("(1,1)"), omega: 2 }.apply(&f), Err(ForestError::MissingEntry(_))));
        assert!(Move::Split { rooted: r("(1,2)"), omega: 1 }.apply(&f).is_err());
    }

    #[test]
    fn boundary_twist_clears_a_unit_twist() {
        let f = IntersectionForest::empty(2).with_twist(1, r("(1,2)")).unwrap();
        let g = Move::BoundaryTwist { rooted: r("(1,2)"), epsilon: -1 }.apply(&f).unwrap();
        assert!(g.twists().is_empty());
        assert_eq!(ms(&g), vec![("+<(1,2),2>".to_string(), 1)]);
        let twisted = build(TauKind::Twisted, 2, 1).unwrap();
        assert!(tau_of(&g, &twisted).unwrap().is_zero().unwrap());

        let h = Move::BoundaryTwist { rooted: r("(1,2)"), epsilon: 1 }.apply(&g).unwrap();
        assert_eq!(h.twists(), f.twists());
        assert_eq!(h.trees().len(), 2);
        let framed = build(TauKind::Framed, 2, 1).unwrap();
        assert!(tau_of(&h, &framed).unwrap().is_zero().unwrap());
        assert!(Move::BoundaryTwist { rooted: r("((1,2),(1,2))"), epsilon: 1 }.apply(&f).is_err());
        assert!(Move::BoundaryTwist { rooted: r("(1,2)"), epsilon: 2 }.apply(&f).is_err());
    }

    #[test]
    fn interior_twist_from_nothing() {
        let f = IntersectionForest::empty(2);
        let g = Move::InteriorTwist { rooted: r("(1,2)"), epsilon: 1 }.apply(&f).unwrap();
        assert_eq!(ms(&g), vec![("+<(1,2),(1,2)>".to_string(), 1), ("-2 inf(1,2)".to_string(), 1)]);
        let twisted = build(TauKind::Twisted, 2, 2).unwrap();
        assert!(tau_of(&g, &twisted).unwrap().is_zero().unwrap());
        let back = Move::InteriorTwist { rooted: r("(1,2)"), epsilon: -1 }.apply(&g).unwrap();
        assert!(back.twists().is_empty());
        assert_eq!(back.trees().len(), 2);
    }

    #[test]
    fn twisted_ihx_on_a_tripod_root() {
        let f = IntersectionForest::empty(3).with_twist(1, r("((1,2),3)")).unwrap();
        let mv = Move::TwistedIhx { rooted: r("((1,2),3)"), omega: 1, edge: 0 };
        let g = mv.apply(&f).unwrap();
        assert_eq!(g.twists().len(), 2);
        assert_eq!(g.trees().len(), 1);
        assert_eq!(g.trees()[0].sign, -1);
        let twisted = build(TauKind::Twisted, 3, 4).unwrap();
        let before = tau_of(&f, &twisted).unwrap();
        assert!(before.sub(&tau_of(&g, &twisted).unwrap()).unwrap().is_zero().unwrap());

        let neg = IntersectionForest::empty(3).with_twist(-1, r("((1,2),3)")).unwrap();
        let g2 = Move::TwistedIhx { rooted: r("((1,2),3)"), omega: -1, edge: 0 }.apply(&neg).unwrap();
        assert!(g2.twists().iter().all(|t| t.omega == -1));
        assert_eq!(g2.trees()[0].sign, 1);

        let two = IntersectionForest::empty(3).with_twist(2, r("((1,2),3)")).unwrap();
        assert!(matches!(
            Move::TwistedIhx { rooted: r("((1,2),3)"), omega: 2, edge: 0 }.apply(&two),
            Err(ForestError::NotUnit(2))
        ));
        assert!(Move::TwistedIhx { rooted: r("((1,2),3)"), omega: 1, edge: 1 }.apply(&f).is_err());
    }

    #[test]
    fn framed_ihx_insert_vanishes() {
        let framed = build(TauKind::Framed, 4, 2).unwrap();
        let f = IntersectionForest::empty(4);
        let g = Move::FramedIhxInsert { tree: u("<(1,2),(3,4)>"), edge: 0 }.apply(&f).unwrap();
        assert_eq!(g.trees().iter().map(|e| e.sign).sum::<i64>(), 1);
        let e = tau_of(&g, &framed).unwrap();
        assert!(e.zero_certificate().unwrap().is_some());
    }

    #[test]
    fn records_replay() {
        let f0 = IntersectionForest::empty(2).with_twist(2, r("(1,2)")).unwrap();
        let moves = [
            Move::Split { rooted: r("(1,2)"), omega: 2 },
            Move::InteriorTwist { rooted: r("(1,1)"), epsilon: 1 },
            Move::BoundaryTwist { rooted: boundary_disk(2, &r("1")), epsilon: 1 },
        ];
        let mut cur = f0.clone();
        let mut log = Vec::new();
        for mv in &moves {
            let (next, rec) = mv.record(&cur).unwrap();
            log.push(rec);
            cur = next;
        }
        assert_eq!(replay(&f0, &log).unwrap().hash(), cur.hash());
        let json = serde_json::to_string(&log).unwrap();
        assert!(json.contains(r#""move":"interior_twist""#));
        let back: Vec<MoveRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, log);
        assert!(matches!(replay(&cur, &log), Err(ForestError::ReplayMismatch { step: 0, .. })));
    }
}
