use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::frontend::{InductiveSystem, Predicate};
use crate::slcore::{fresh_name, Formula, PureAtom, Var};
use crate::Error;

/// State of one run of parameter elimination.
struct Eliminator {
    sys: InductiveSystem,
    tracked: Var,
    /// `(predicate, formal index, del)` to the predicate created for it in
    /// the current tracking session.
    visited: BTreeMap<(String, usize, bool), String>,
    counter: usize,
}

fn unsat(r: &Formula) -> bool {
    let classes = r.classes();
    r.points_tos().any(|p| classes.same(&p.source, &Var::Nil))
}

impl Eliminator {
    fn fresh(&mut self, base: &str) -> String {
        loop {
            self.counter += 1;
            let n = format!("{base}_e{}", self.counter);
            if !self.sys.contains(&n) {
                return n;
            }
        }
    }

    /// Tracks formal `s` of `pred`; returns the name of the specialised copy.
    fn track(&mut self, pred: &str, s: usize, del: bool) -> Result<String, Error> {
        let p = self.sys.get(pred).expect("tracked predicate exists").clone();
        let x = p.formals[s].clone();
        let mut formals = p.formals.clone();
        if del {
            formals.remove(s);
        }
        let base = p.name.to_string();
        let qname = self.fresh(&base);
        self.visited.insert((pred.to_string(), s, del), qname.clone());
        self.sys.insert(Predicate::new(&qname, formals.clone(), Vec::new()));
        let subst = BTreeMap::from([(x.clone(), self.tracked.clone())]);
        let mut rules = Vec::new();
        for rule in &p.rules {
            let classes = rule.classes();
            let allocated = rule.points_tos().any(|pt| classes.same(&pt.source, &x));
            let occ: Vec<(usize, usize)> = rule
                .calls
                .iter()
                .enumerate()
                .flat_map(|(j, c)| c.args.iter().enumerate().filter(|(_, a)| **a == x).map(move |(l, _)| (j, l)))
                .collect();
            let new_rule = if allocated || occ.is_empty() {
                if !del && allocated {
                    let mut r = rule.clone();
                    r.pure.push(PureAtom::new(x.clone(), self.tracked.clone()));
                    r
                } else {
                    rule.substitute(&subst)
                }
            } else {
                if occ.len() > 1 {
                    return Err(Error::BranchingPropagation { pred: p.name.to_string(), param: x.to_string() });
                }
                let (j, l) = occ[0];
                let referenced = rule.points_tos().any(|pt| pt.targets.iter().any(|t| classes.same(t, &x)));
                let next_del = del && !referenced;
                let mut r = rule.clone();
                if del && referenced {
                    r.existentials.push(x.clone());
                }
                let callee = r.calls[j].pred.to_string();
                let key = (callee.clone(), l, next_del);
                let target = match self.visited.get(&key) {
                    Some(n) => n.clone(),
                    None => self.track(&callee, l, next_del)?,
                };
                r.calls[j].pred = Arc::from(target.as_str());
                if next_del {
                    r.calls[j].args.remove(l);
                }
                r
            };
            if !unsat(&new_rule) {
                rules.push(new_rule);
            }
        }
        self.sys.get_mut(&qname).unwrap().rules = rules;
        Ok(qname)
    }

    /// Replaces every `nil` argument of a call by specialising the callee.
    fn specialise_nil_args(&mut self, root: &str) -> Result<(), Error> {
        self.tracked = Var::Nil;
        self.visited.clear();
        loop {
            let mut site = None;
            'find: for name in self.sys.reachable_from(root) {
                let p = self.sys.get(&name).unwrap();
                for (ri, r) in p.rules.iter().enumerate() {
                    for (ci, c) in r.calls.iter().enumerate() {
                        if let Some(l) = c.args.iter().position(|a| a.is_nil()) {
                            site = Some((name.to_string(), ri, ci, c.pred.to_string(), l));
                            break 'find;
                        }
                    }
                }
            }
            let Some((name, ri, ci, callee, l)) = site else { return Ok(()) };
            let key = (callee.clone(), l, true);
            let target = match self.visited.get(&key) {
                Some(n) => n.clone(),
                None => self.track(&callee, l, true)?,
            };
            let call = &mut self.sys.get_mut(&name).unwrap().rules[ri].calls[ci];
            call.pred = Arc::from(target.as_str());
            call.args.remove(l);
        }
    }
}

/// Drops rules that call predicates without rules, until nothing changes.
fn prune_empty(sys: &mut InductiveSystem) {
    loop {
        let empty: BTreeSet<String> =
            sys.predicates.iter().filter(|p| p.rules.is_empty()).map(|p| p.name.to_string()).collect();
        let mut changed = false;
        for p in sys.predicates.iter_mut() {
            let before = p.rules.len();
            p.rules.retain(|r| r.calls.iter().all(|c| !empty.contains(&*c.pred)));
            changed |= p.rules.len() != before;
        }
        if !changed {
            return;
        }
    }
}

/// Result of parameter elimination.
pub struct Eliminated {
    pub system: InductiveSystem,
    pub root: String,
    /// Actual parameters that became constants, `nil` excluded.
    pub parameters: Vec<Var>,
}

/// Specialises `root` to the actual parameters, one at a time. Each formal
/// is followed along its direct propagation chain and replaced by its actual
/// where it is allocated or referenced. The result is trimmed to the new
/// root, and predicates are renamed `Q1, Q2, ...` in discovery order.
/// Renames formals and existentials that share a name with a constant, so
/// that constants stay distinguishable from bound names after tracking.
fn rename_apart(sys: &InductiveSystem, constants: &[Var]) -> InductiveSystem {
    let avoid: BTreeSet<&Var> = constants.iter().filter(|v| !v.is_nil()).collect();
    let taken = sys.var_names();
    let fresh = |v: &Var| {
        let free = |s: &str| !taken.contains(s) && !avoid.iter().any(|c| c.as_name() == Some(s));
        Var::named(&fresh_name(&v.to_string(), &|s| !free(s)))
    };
    let mut out = sys.clone();
    for p in out.predicates.iter_mut() {
        let formal_map: BTreeMap<Var, Var> =
            p.formals.iter().filter(|v| avoid.contains(v)).map(|v| (v.clone(), fresh(v))).collect();
        p.formals = p.formals.iter().map(|v| formal_map.get(v).cloned().unwrap_or_else(|| v.clone())).collect();
        for r in p.rules.iter_mut() {
            let mut map = formal_map.clone();
            for e in r.existentials.iter().filter(|v| avoid.contains(v)) {
                map.insert(e.clone(), fresh(e));
            }
            if !map.is_empty() {
                *r = r.substitute(&map);
            }
        }
    }
    out
}

pub fn eliminate_parameters(sys: &InductiveSystem, root: &str, actuals: &[Var]) -> Result<Eliminated, Error> {
    let pred = sys.get(root).ok_or_else(|| Error::Unsupported(format!("unknown root predicate `{root}`")))?;
    if pred.arity() != actuals.len() {
        return Err(Error::ArityMismatch {
            name: root.to_string(),
            expected: pred.arity(),
            found: actuals.len(),
            line: 0,
            col: 0,
        });
    }
    let mut el = Eliminator {
        sys: rename_apart(&sys.trimmed(root), actuals),
        tracked: Var::Nil,
        visited: BTreeMap::new(),
        counter: 0,
    };
    let mut parameters = Vec::new();
    let mut current = root.to_string();
    for a in actuals {
        el.tracked = a.clone();
        el.visited.clear();
        current = el.track(&current, 0, true)?;
        if !a.is_nil() && !parameters.contains(a) {
            parameters.push(a.clone());
        }
    }
    el.specialise_nil_args(&current)?;
    let mut out = el.sys.trimmed(&current);
    prune_empty(&mut out);
    let out = out.trimmed(&current);
    let order = out.reachable_from(&current);
    let rename: BTreeMap<String, String> =
        order.iter().enumerate().map(|(i, n)| (n.to_string(), format!("Q{}", i + 1))).collect();
    let mut renamed = InductiveSystem::default();
    for n in &order {
        let p = out.get(n).unwrap();
        let mut q = Predicate::new(&rename[&**n], p.formals.clone(), p.rules.clone());
        for r in q.rules.iter_mut() {
            for c in r.calls.iter_mut() {
                c.pred = Arc::from(rename[&*c.pred].as_str());
            }
        }
        renamed.predicates.push(q);
    }
    renamed.refresh_selector_count();
    renamed.selector_count = renamed.selector_count.max(sys.selector_count);
    Ok(Eliminated { system: renamed, root: "Q1".to_string(), parameters })
}
