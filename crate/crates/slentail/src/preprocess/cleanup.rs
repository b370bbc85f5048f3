use std::collections::{BTreeMap, BTreeSet};

use crate::frontend::InductiveSystem;
use crate::slcore::Var;

/// Removes unused formals of unpinned predicates (and the matching call
/// arguments), then moves existentials down into the unique single-rule,
/// single-caller predicate that uses them. Pinned predicates keep their
/// formal lists so that queries against them stay well-typed.
pub fn cleanup(sys: &InductiveSystem, pinned: &BTreeSet<String>) -> InductiveSystem {
    let mut out = drop_unused_formals(sys, pinned);
    while push_existential(&mut out, pinned) {}
    for p in out.predicates.iter_mut() {
        for r in p.rules.iter_mut() {
            let used = r.used_vars();
            r.existentials.retain(|z| used.contains(z));
        }
    }
    out
}

fn drop_unused_formals(sys: &InductiveSystem, pinned: &BTreeSet<String>) -> InductiveSystem {
    // least fixpoint of liveness, seeded by direct use in heads and pure parts
    let mut live: BTreeMap<String, Vec<bool>> = sys
        .predicates
        .iter()
        .map(|p| {
            let pinned_here = pinned.contains(&*p.name);
            let v = p
                .formals
                .iter()
                .map(|x| {
                    pinned_here
                        || p.rules
                            .iter()
                            .any(|r| r.spatial_vars().contains(x) || r.pure.iter().any(|e| e.lhs == *x || e.rhs == *x))
                })
                .collect();
            (p.name.to_string(), v)
        })
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for p in &sys.predicates {
            for (k, x) in p.formals.iter().enumerate() {
                if live[&*p.name][k] {
                    continue;
                }
                let used = p.rules.iter().any(|r| {
                    r.calls.iter().any(|c| {
                        c.args.iter().enumerate().any(|(m, a)| a == x && live.get(&*c.pred).is_none_or(|l| l[m]))
                    })
                });
                if used {
                    live.get_mut(&*p.name).unwrap()[k] = true;
                    changed = true;
                }
            }
        }
    }
    let mut out = sys.clone();
    for p in out.predicates.iter_mut() {
        let l = &live[&*p.name];
        p.formals = p.formals.iter().zip(l).filter(|(_, keep)| **keep).map(|(x, _)| x.clone()).collect();
        for r in p.rules.iter_mut() {
            for c in r.calls.iter_mut() {
                if let Some(cl) = live.get(&*c.pred) {
                    c.args = c.args.iter().zip(cl).filter(|(_, keep)| **keep).map(|(a, _)| a.clone()).collect();
                }
            }
        }
    }
    out
}

/// Performs one existential move; returns whether anything changed.
fn push_existential(sys: &mut InductiveSystem, pinned: &BTreeSet<String>) -> bool {
    let mut sites: BTreeMap<String, usize> = BTreeMap::new();
    for p in &sys.predicates {
        for r in &p.rules {
            for c in &r.calls {
                *sites.entry(c.pred.to_string()).or_default() += 1;
            }
        }
    }
    for pi in 0..sys.predicates.len() {
        for ri in 0..sys.predicates[pi].rules.len() {
            let rule = &sys.predicates[pi].rules[ri];
            for z in rule.existentials.clone() {
                let local_use = rule.spatial_vars().contains(&z) || rule.pure.iter().any(|e| e.lhs == z || e.rhs == z);
                if local_use {
                    continue;
                }
                let uses: Vec<(usize, usize)> = rule
                    .calls
                    .iter()
                    .enumerate()
                    .flat_map(|(ci, c)| c.args.iter().enumerate().filter(|(_, a)| **a == z).map(move |(k, _)| (ci, k)))
                    .collect();
                let [(ci, k)] = uses[..] else { continue };
                let callee = rule.calls[ci].pred.to_string();
                let Some(target) = sys.get(&callee) else { continue };
                if pinned.contains(&callee)
                    || target.rules.len() != 1
                    || sites.get(&callee) != Some(&1)
                    || callee == *sys.predicates[pi].name
                {
                    continue;
                }
                let formal: Var = target.formals[k].clone();
                let rule = &mut sys.predicates[pi].rules[ri];
                rule.existentials.retain(|v| *v != z);
                rule.calls[ci].args.remove(k);
                let t = sys.get_mut(&callee).unwrap();
                t.formals.remove(k);
                t.rules[0].existentials.insert(0, formal);
                return true;
            }
        }
    }
    false
}
