use super::ast::InductiveSystem;
use crate::slcore::{Formula, SpatialAtom};

/// `|R|`: equalities and `emp` count 1, `α ↦ (x1..xn)` counts n+1, a call
/// counts its arity, and every quantified variable adds 1.
pub fn rule_size(r: &Formula) -> usize {
    let spatial: usize = r
        .spatial
        .iter()
        .map(|a| match a {
            SpatialAtom::Emp => 1,
            SpatialAtom::PointsTo(p) => p.targets.len() + 1,
        })
        .sum();
    r.existentials.len() + spatial + r.calls.iter().map(|c| c.args.len()).sum::<usize>() + r.pure.len()
}

pub fn system_size(sys: &InductiveSystem) -> usize {
    sys.predicates.iter().flat_map(|p| p.rules.iter()).map(rule_size).sum()
}
