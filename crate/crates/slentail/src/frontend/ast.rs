use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::slcore::{Formula, PredicateCall, Var};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Predicate {
    pub name: Arc<str>,
    pub formals: Vec<Var>,
    pub rules: Vec<Formula>,
}

impl Predicate {
    pub fn new(name: &str, formals: Vec<Var>, rules: Vec<Formula>) -> Self {
        Predicate { name: Arc::from(name), formals, rules }
    }

    pub fn arity(&self) -> usize {
        self.formals.len()
    }
}

/// A set of inductive definitions in declaration order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct InductiveSystem {
    pub predicates: Vec<Predicate>,
    /// Largest points-to arity (the number of selectors).
    pub selector_count: usize,
}

impl InductiveSystem {
    pub fn new(predicates: Vec<Predicate>) -> Self {
        let mut s = InductiveSystem { predicates, selector_count: 0 };
        s.refresh_selector_count();
        s
    }

    pub fn refresh_selector_count(&mut self) {
        self.selector_count = self
            .predicates
            .iter()
            .flat_map(|p| p.rules.iter())
            .flat_map(|r| r.points_tos())
            .map(|pt| pt.targets.len())
            .max()
            .unwrap_or(0);
    }

    pub fn get(&self, name: &str) -> Option<&Predicate> {
        self.predicates.iter().find(|p| &*p.name == name)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Predicate> {
        self.predicates.iter_mut().find(|p| &*p.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    /// Adds or replaces a predicate.
    pub fn insert(&mut self, pred: Predicate) {
        match self.predicates.iter().position(|p| p.name == pred.name) {
            Some(i) => self.predicates[i] = pred,
            None => self.predicates.push(pred),
        }
    }

    /// Every variable name used by any predicate, for freshness checks.
    pub fn var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for p in &self.predicates {
            for f in &p.formals {
                out.insert(f.to_string());
            }
            for r in &p.rules {
                for v in r.all_vars() {
                    out.insert(v.to_string());
                }
            }
        }
        out
    }

    /// A predicate name not yet used, built from `base`.
    pub fn fresh_pred_name(&self, base: &str) -> String {
        if !self.contains(base) {
            return base.to_string();
        }
        (1..).map(|i| format!("{base}_{i}")).find(|n| !self.contains(n)).unwrap()
    }

    /// Predicates reachable from `root` through calls, in discovery order.
    pub fn reachable_from(&self, root: &str) -> Vec<Arc<str>> {
        let mut out: Vec<Arc<str>> = Vec::new();
        let mut stack = vec![Arc::<str>::from(root)];
        while let Some(n) = stack.pop() {
            if out.contains(&n) {
                continue;
            }
            if let Some(p) = self.get(&n) {
                out.push(n.clone());
                for r in p.rules.iter().rev() {
                    for c in r.calls.iter().rev() {
                        stack.push(c.pred.clone());
                    }
                }
            }
        }
        out
    }

    /// Drops predicates not reachable from `root`.
    pub fn trimmed(&self, root: &str) -> InductiveSystem {
        let keep = self.reachable_from(root);
        let mut s = InductiveSystem::new(self.predicates.iter().filter(|p| keep.contains(&p.name)).cloned().collect());
        s.selector_count = s.selector_count.max(self.selector_count);
        s
    }
}

/// One side of an entailment: a predicate call or a formula that is turned
/// into a fresh wrapper predicate before checking.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QuerySide {
    Call(PredicateCall),
    Formula(Formula),
}

impl QuerySide {
    /// Free variables in order of first occurrence (nil excluded).
    pub fn free_vars_ordered(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        let mut push = |v: &Var| {
            if !v.is_nil() && !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            QuerySide::Call(c) => c.args.iter().for_each(&mut push),
            QuerySide::Formula(f) => {
                let bound: BTreeSet<&Var> = f.existentials.iter().collect();
                let mut all = Vec::new();
                for p in f.points_tos() {
                    all.push(&p.source);
                    all.extend(p.targets.iter());
                }
                for c in &f.calls {
                    all.extend(c.args.iter());
                }
                for e in &f.pure {
                    all.push(&e.lhs);
                    all.push(&e.rhs);
                }
                all.into_iter().filter(|v| !bound.contains(v)).for_each(&mut push);
            }
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EntailmentQuery {
    pub lhs: QuerySide,
    pub rhs: QuerySide,
}

/// A parsed `.sid` file.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SidFile {
    pub system: InductiveSystem,
    pub query: Option<EntailmentQuery>,
}

impl fmt::Display for QuerySide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuerySide::Call(c) => write!(f, "{c}"),
            QuerySide::Formula(phi) => write!(f, "{phi}"),
        }
    }
}

impl fmt::Display for EntailmentQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "entail {} |- {};", self.lhs, self.rhs)
    }
}
