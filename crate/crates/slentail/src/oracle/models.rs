use std::collections::{BTreeMap, BTreeSet};

use crate::slcore::{Formula, Loc, State, Var, NULL};

/// Models of a call-free formula, one per way of placing the unallocated
/// variable classes: on `nil`, on an allocated cell, or on fresh dangling
/// locations (shared or not). Allocated classes get distinct cells `1..`,
/// numbered by first allocation. Returns the models and whether `cap`
/// truncated the list.
pub fn models_of_formula(phi: &Formula, cap: usize) -> (Vec<State>, bool) {
    let classes = phi.classes();
    let bound: BTreeSet<&Var> = phi.existentials.iter().collect();
    let mut cell_of: BTreeMap<Var, Loc> = BTreeMap::new();
    let nil_root = classes.find(&Var::Nil);
    for pt in phi.points_tos() {
        let root = classes.find(&pt.source);
        if root == nil_root || cell_of.contains_key(&root) {
            return (Vec::new(), false);
        }
        let next = cell_of.len() as Loc + 1;
        cell_of.insert(root, next);
    }
    let cells = cell_of.len() as Loc;
    let mut roots: BTreeSet<Var> = phi.all_vars().iter().map(|v| classes.find(v)).collect();
    roots.remove(&nil_root);
    let dangling: Vec<Var> = roots.into_iter().filter(|r| !cell_of.contains_key(r)).collect();

    let mut out = Vec::new();
    let mut truncated = false;
    // choice[i]: 0 = nil, 1..=cells = that cell, cells+k = k-th fresh location
    let mut choice = vec![0 as Loc; dangling.len()];
    loop {
        if out.len() >= cap {
            truncated = true;
            break;
        }
        let mut value = cell_of.clone();
        value.insert(nil_root.clone(), NULL);
        for (r, c) in dangling.iter().zip(&choice) {
            value.insert(r.clone(), *c);
        }
        let mut s = State::new();
        for v in phi.all_vars() {
            if !bound.contains(&v) {
                s.store.insert(v.clone(), value[&classes.find(&v)]);
            }
        }
        for pt in phi.points_tos() {
            let targets = pt.targets.iter().map(|t| value[&classes.find(t)]).collect();
            s.heap.insert(value[&classes.find(&pt.source)], targets);
        }
        out.push(s);
        // Next assignment; fresh locations grow one at a time so that each
        // partition of the dangling classes is produced once.
        let mut i = dangling.len();
        loop {
            if i == 0 {
                return (out, truncated);
            }
            i -= 1;
            let max_fresh = choice[..i].iter().filter(|c| **c > cells).map(|c| *c - cells).max().unwrap_or(0);
            if choice[i] < cells + max_fresh + 1 {
                choice[i] += 1;
                for c in choice[i + 1..].iter_mut() {
                    *c = 0;
                }
                break;
            }
        }
    }
    (out, truncated)
}
