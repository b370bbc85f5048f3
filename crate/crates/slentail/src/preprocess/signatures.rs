use std::collections::{BTreeMap, BTreeSet};

use crate::frontend::InductiveSystem;

/// Partition of a predicate's formal indices into forward, backward and
/// equality parameters.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Signature {
    pub fw: BTreeSet<usize>,
    pub bw: BTreeSet<usize>,
    pub eq: BTreeSet<usize>,
}

impl Signature {
    pub fn new(
        fw: impl IntoIterator<Item = usize>,
        bw: impl IntoIterator<Item = usize>,
        eq: impl IntoIterator<Item = usize>,
    ) -> Self {
        Signature { fw: fw.into_iter().collect(), bw: bw.into_iter().collect(), eq: eq.into_iter().collect() }
    }

    pub fn arity(&self) -> usize {
        self.fw.len() + self.bw.len() + self.eq.len()
    }
}

/// Computes signatures for every predicate of a system with one points-to
/// per rule.
///
/// Index `k` of `P` is forward when `P` allocates it in every rule and every
/// caller passes one of its own targets there. It is backward when every
/// rule of `P` points to it and every caller passes its own allocated cell.
/// Anything else is an equality parameter.
pub fn compute_signatures(sys: &InductiveSystem) -> BTreeMap<String, Signature> {
    // Per (callee, index): (all occurrences are targets, all are allocated).
    let mut edges: BTreeMap<(&str, usize), (bool, bool)> = BTreeMap::new();
    for p in &sys.predicates {
        for r in &p.rules {
            let classes = r.classes();
            let pt = r.points_tos().next();
            for c in &r.calls {
                for (k, a) in c.args.iter().enumerate() {
                    let fw = pt.is_some_and(|pt| pt.targets.iter().any(|t| classes.same(t, a)));
                    let bw = pt.is_some_and(|pt| classes.same(&pt.source, a));
                    let e = edges.entry((&c.pred, k)).or_insert((true, true));
                    e.0 &= fw;
                    e.1 &= bw;
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for p in &sys.predicates {
        let mut sig = Signature::default();
        for (k, x) in p.formals.iter().enumerate() {
            let (fw_edge, bw_edge) = edges.get(&(&*p.name, k)).copied().unwrap_or((true, true));
            let allocated = p.rules.iter().all(|r| {
                let classes = r.classes();
                r.points_tos().any(|pt| classes.same(&pt.source, x))
            });
            let referenced = p.rules.iter().all(|r| {
                let classes = r.classes();
                r.points_tos().any(|pt| pt.targets.iter().any(|t| classes.same(t, x)))
            });
            if fw_edge && allocated {
                sig.fw.insert(k);
            } else if bw_edge && referenced {
                sig.bw.insert(k);
            } else {
                sig.eq.insert(k);
            }
        }
        out.insert(p.name.to_string(), sig);
    }
    out
}

/// Sufficient test for locality: no predicate has equality parameters.
pub fn locality_test(signatures: &BTreeMap<String, Signature>) -> bool {
    signatures.values().all(|s| s.eq.is_empty())
}
