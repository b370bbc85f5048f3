use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::frontend::{InductiveSystem, Predicate, QuerySide};
use crate::slcore::{pos_string, Formula, Tree, Var};
use crate::Error;

/// Default cap on the number of trees an enumeration may produce.
pub const TREE_CAP: usize = 100_000;

/// Nodes are (predicate, rule index).
pub type RuleTree = Tree<(Arc<str>, usize)>;

/// An unfolding tree: each node names a predicate and one of its rules, and
/// the children follow the calls of that rule in order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct UnfoldingTree {
    pub tree: RuleTree,
}

impl UnfoldingTree {
    pub fn root_predicate(&self) -> &str {
        &self.tree.label.0
    }

    pub fn height(&self) -> usize {
        self.tree.height()
    }
}

/// All unfolding trees of `pred` with at most `max_depth` levels, in rule
/// order. Depth 0 is read as depth 1: a lone base rule is the smallest tree.
pub fn enumerate_unfoldings(sys: &InductiveSystem, pred: &str, max_depth: usize) -> Result<Vec<UnfoldingTree>, Error> {
    enumerate_capped(sys, pred, max_depth, TREE_CAP)
}

pub fn enumerate_capped(
    sys: &InductiveSystem,
    pred: &str,
    max_depth: usize,
    cap: usize,
) -> Result<Vec<UnfoldingTree>, Error> {
    let levels = max_depth.max(1);
    let mut level: HashMap<Arc<str>, Vec<RuleTree>> = HashMap::new();
    for _ in 0..levels {
        let mut next: HashMap<Arc<str>, Vec<RuleTree>> = HashMap::new();
        for p in &sys.predicates {
            let mut out = Vec::new();
            for (ri, r) in p.rules.iter().enumerate() {
                let mut combos: Vec<Vec<RuleTree>> = vec![Vec::new()];
                for c in &r.calls {
                    let subs = level.get(&c.pred).map(|v| v.as_slice()).unwrap_or(&[]);
                    let mut grown = Vec::with_capacity(combos.len() * subs.len());
                    for prefix in &combos {
                        for s in subs {
                            let mut v = prefix.clone();
                            v.push(s.clone());
                            grown.push(v);
                        }
                    }
                    if grown.len() > cap {
                        return Err(Error::BoundExceeded(format!("more than {cap} unfolding trees of {}", p.name)));
                    }
                    combos = grown;
                }
                out.extend(combos.into_iter().map(|kids| Tree::node((p.name.clone(), ri), kids)));
                if out.len() > cap {
                    return Err(Error::BoundExceeded(format!("more than {cap} unfolding trees of {}", p.name)));
                }
            }
            next.insert(p.name.clone(), out);
        }
        level = next;
    }
    Ok(level.remove(pred).unwrap_or_default().into_iter().map(|tree| UnfoldingTree { tree }).collect())
}

fn atoms(r: &Formula) -> usize {
    r.points_tos().count()
}

/// Least number of points-to atoms in any unfolding of each predicate.
fn min_atoms(sys: &InductiveSystem) -> BTreeMap<Arc<str>, usize> {
    let mut best: BTreeMap<Arc<str>, usize> = BTreeMap::new();
    loop {
        let mut changed = false;
        for p in &sys.predicates {
            for r in &p.rules {
                let calls: Option<usize> = r.calls.iter().map(|c| best.get(&c.pred).copied()).sum();
                if let Some(c) = calls {
                    let n = atoms(r) + c;
                    if best.get(&p.name).is_none_or(|b| n < *b) {
                        best.insert(p.name.clone(), n);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return best;
        }
    }
}

/// Unfolding trees of `pred` whose formula has exactly `n` points-to atoms.
pub struct BySize<'a> {
    sys: &'a InductiveSystem,
    min: BTreeMap<Arc<str>, usize>,
    memo: HashMap<(Arc<str>, usize), Vec<RuleTree>>,
    cap: usize,
}

impl<'a> BySize<'a> {
    pub fn new(sys: &'a InductiveSystem) -> Self {
        BySize { sys, min: min_atoms(sys), memo: HashMap::new(), cap: TREE_CAP }
    }

    pub fn trees(&mut self, pred: &str, n: usize) -> Result<Vec<UnfoldingTree>, Error> {
        Ok(self.go(&Arc::from(pred), n)?.into_iter().map(|tree| UnfoldingTree { tree }).collect())
    }

    fn go(&mut self, pred: &Arc<str>, n: usize) -> Result<Vec<RuleTree>, Error> {
        if let Some(v) = self.memo.get(&(pred.clone(), n)) {
            return Ok(v.clone());
        }
        let sys = self.sys;
        let p = sys.get(pred).ok_or_else(|| Error::Unsupported(format!("unknown predicate {pred}")))?;
        let mut out = Vec::new();
        for (ri, r) in p.rules.iter().enumerate() {
            let a = atoms(r);
            if a > n {
                continue;
            }
            let mins: Option<Vec<usize>> = r.calls.iter().map(|c| self.min.get(&c.pred).copied()).collect();
            let Some(mins) = mins else { continue };
            if a + mins.iter().sum::<usize>() > n {
                continue;
            }
            // Distribute the remaining atoms over the calls.
            let mut combos: Vec<(usize, Vec<RuleTree>)> = vec![(n - a, Vec::new())];
            for (k, c) in r.calls.iter().enumerate() {
                let rest_min: usize = mins[k + 1..].iter().sum();
                let mut grown = Vec::new();
                for (left, prefix) in &combos {
                    for take in mins[k]..=left.saturating_sub(rest_min) {
                        for s in self.go(&c.pred, take)? {
                            let mut v = prefix.clone();
                            v.push(s);
                            grown.push((left - take, v));
                        }
                    }
                }
                if grown.len() > self.cap {
                    return Err(Error::BoundExceeded(format!("more than {} unfolding trees of {pred}", self.cap)));
                }
                combos = grown;
            }
            out.extend(
                combos.into_iter().filter(|(left, _)| *left == 0).map(|(_, kids)| Tree::node((pred.clone(), ri), kids)),
            );
        }
        self.memo.insert((pred.clone(), n), out.clone());
        Ok(out)
    }
}

/// `Φ(t)` for the call `root(args)`: each rule instance has its formals
/// replaced by the arguments and its existentials renamed by position.
pub fn unfold(sys: &InductiveSystem, t: &UnfoldingTree, args: &[Var]) -> Result<Formula, Error> {
    fn go(
        sys: &InductiveSystem,
        t: &RuleTree,
        args: &[Var],
        pos: &mut Vec<u32>,
        out: &mut Formula,
    ) -> Result<(), Error> {
        let (name, ri) = &t.label;
        let p = sys.get(name).ok_or_else(|| Error::Unsupported(format!("unknown predicate {name}")))?;
        let rule = p.rules.get(*ri).ok_or_else(|| Error::Unsupported(format!("{name} has no rule {ri}")))?;
        if rule.calls.len() != t.children.len() {
            return Err(Error::Unsupported(format!(
                "node {} of the unfolding tree has the wrong arity",
                pos_string(pos)
            )));
        }
        let tag = pos_string(pos);
        let mut map: BTreeMap<Var, Var> = p.formals.iter().cloned().zip(args.iter().cloned()).collect();
        for e in &rule.existentials {
            map.insert(e.clone(), Var::named(&format!("{e}@{tag}")));
        }
        let inst = rule.substitute(&map);
        out.existentials.extend(inst.existentials.iter().cloned());
        out.spatial.extend(inst.spatial.iter().filter(|a| **a != crate::slcore::SpatialAtom::Emp).cloned());
        out.pure.extend(inst.pure.iter().cloned());
        for (i, (c, sub)) in inst.calls.iter().zip(&t.children).enumerate() {
            if c.pred != sub.label.0 {
                return Err(Error::Unsupported(format!("child {i} of {} does not unfold {}", pos_string(pos), c.pred)));
            }
            pos.push(i as u32);
            go(sys, sub, &c.args, pos, out)?;
            pos.pop();
        }
        Ok(())
    }
    let mut out = Formula::default();
    go(sys, &t.tree, args, &mut Vec::new(), &mut out)?;
    if out.spatial.is_empty() {
        out.spatial.push(crate::slcore::SpatialAtom::Emp);
    }
    Ok(out)
}

/// The system extended so that `side` is a single call, with its arguments.
/// A formula side becomes a one-rule predicate over its free variables.
pub fn side_as_call(sys: &InductiveSystem, side: &QuerySide, base: &str) -> (InductiveSystem, String, Vec<Var>) {
    match side {
        QuerySide::Call(c) => (sys.clone(), c.pred.to_string(), c.args.clone()),
        QuerySide::Formula(f) => {
            let formals = side.free_vars_ordered();
            let name = sys.fresh_pred_name(base);
            let mut out = sys.clone();
            out.insert(Predicate::new(&name, formals.clone(), vec![f.clone()]));
            out.refresh_selector_count();
            (out, name, formals)
        }
    }
}
