use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::ast::{InductiveSystem, Predicate};
use crate::slcore::{Formula, Var, VarClasses};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagnosticKind {
    EmptyHead,
    PureShape,
    BranchingPropagation,
    DisconnectedRule,
}

/// A violated restriction, located by predicate name and rule index (from 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub pred: String,
    pub rule: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} in {}#{}: {}", self.kind, self.pred, self.rule, self.message)
    }
}

/// Class roots reachable from `start` through points-to edges, modulo `=_Π`.
pub(crate) fn reachable(rule: &Formula, classes: &VarClasses, start: &Var) -> BTreeSet<Var> {
    let mut seen = BTreeSet::from([classes.find(start)]);
    let mut changed = true;
    while changed {
        changed = false;
        for p in rule.points_tos() {
            if seen.contains(&classes.find(&p.source)) {
                for t in &p.targets {
                    changed |= seen.insert(classes.find(t));
                }
            }
        }
    }
    seen
}

/// `v` is a root of the head: every variable of the spatial part is reachable.
pub(crate) fn is_head_root(rule: &Formula, v: &Var) -> bool {
    let classes = rule.classes();
    let seen = reachable(rule, &classes, v);
    rule.spatial_vars().iter().all(|x| seen.contains(&classes.find(x)))
}

/// For each predicate, which formals are roots of the head of every rule.
pub(crate) fn head_root_table(sys: &InductiveSystem) -> BTreeMap<String, Vec<bool>> {
    sys.predicates
        .iter()
        .map(|p| {
            let roots = p.formals.iter().map(|x| p.rules.iter().all(|r| is_head_root(r, x))).collect();
            (p.name.to_string(), roots)
        })
        .collect()
}

/// Candidate roots of a rule: allocated formals in declaration order, then
/// the other allocated variables in the order their atoms appear.
pub(crate) fn root_candidates(pred: &Predicate, rule: &Formula) -> Vec<Var> {
    let classes = rule.classes();
    let alloc: BTreeSet<Var> = rule.allocated().iter().map(|v| classes.find(v)).collect();
    let mut out: Vec<Var> = pred.formals.iter().filter(|x| alloc.contains(&classes.find(x))).cloned().collect();
    for p in rule.points_tos() {
        if !out.iter().any(|v| classes.same(v, &p.source)) {
            out.push(p.source.clone());
        }
    }
    out
}

/// The connectivity condition with `root` as the chosen root.
pub(crate) fn connected_from(
    rule: &Formula,
    root: &Var,
    sys: &InductiveSystem,
    head_roots: &BTreeMap<String, Vec<bool>>,
) -> bool {
    if !is_head_root(rule, root) {
        return false;
    }
    let classes = rule.classes();
    let seen = reachable(rule, &classes, root);
    rule.calls.iter().all(|c| {
        let roots = head_roots.get(&*c.pred);
        sys.get(&c.pred).is_some()
            && c.args
                .iter()
                .enumerate()
                .any(|(s, y)| !y.is_nil() && seen.contains(&classes.find(y)) && roots.is_some_and(|r| r[s]))
    })
}

/// Checks the fragment's restrictions; an empty result means the system is
/// accepted. Rules whose formals are not heads roots may still be connected
/// through another allocated variable (see `root_candidates`).
pub fn validate_system(sys: &InductiveSystem) -> Vec<Diagnostic> {
    let head_roots = head_root_table(sys);
    let mut out = Vec::new();
    for p in &sys.predicates {
        for (j, r) in p.rules.iter().enumerate() {
            let diag = |kind, message: String| Diagnostic { kind, pred: p.name.to_string(), rule: j, message };
            if r.head_is_empty() {
                out.push(diag(DiagnosticKind::EmptyHead, "rule head has no points-to atom".into()));
                continue;
            }
            let classes = r.classes();
            let alloc: BTreeSet<Var> = r.allocated().iter().map(|v| classes.find(v)).collect();
            for x in &p.formals {
                let class = classes.class_of(x);
                if class.len() > 1 && !alloc.contains(&classes.find(x)) {
                    out.push(diag(
                        DiagnosticKind::PureShape,
                        format!("formal `{x}` is equated without an allocated variable"),
                    ));
                }
                let users: BTreeSet<usize> = r
                    .calls
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.args.iter().any(|a| !a.is_nil() && classes.same(a, x)))
                    .map(|(i, _)| i)
                    .collect();
                // An allocated formal is never tracked further, so it may fan out.
                if users.len() > 1 && !alloc.contains(&classes.find(x)) {
                    out.push(diag(
                        DiagnosticKind::BranchingPropagation,
                        format!("formal `{x}` is passed to {} predicate occurrences", users.len()),
                    ));
                }
            }
            let connected = root_candidates(p, r).iter().any(|root| connected_from(r, root, sys, &head_roots));
            if !connected {
                out.push(diag(DiagnosticKind::DisconnectedRule, "no root reaches every atom and call".into()));
            }
        }
    }
    out
}
