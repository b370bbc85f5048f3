use std::collections::{BTreeMap, BTreeSet};

use crate::frontend::{head_root_table, root_candidates, InductiveSystem, Predicate};
use crate::slcore::{Formula, PointsTo, Pos, PredicateCall, SpatialAtom, Var, VarClasses};
use crate::Error;

use super::cleanup::cleanup;

/// Depth-first spanning tree of a head from the atom allocating `root`.
/// Children are the atoms allocating the targets, in selector order.
fn dfs(atoms: &[&PointsTo], classes: &VarClasses, root: &Var) -> Vec<(Pos, usize)> {
    fn visit(
        i: usize,
        pos: Pos,
        atoms: &[&PointsTo],
        classes: &VarClasses,
        seen: &mut BTreeSet<usize>,
        out: &mut Vec<(Pos, usize)>,
    ) {
        out.push((pos.clone(), i));
        let mut d = 0;
        for t in &atoms[i].targets {
            if let Some(k) = atoms.iter().position(|a| classes.same(&a.source, t)) {
                if seen.insert(k) {
                    let mut q = pos.clone();
                    q.push(d);
                    d += 1;
                    visit(k, q, atoms, classes, seen, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    if let Some(start) = atoms.iter().position(|a| classes.same(&a.source, root)) {
        let mut seen = BTreeSet::from([start]);
        visit(start, Pos::new(), atoms, classes, &mut seen, &mut out);
    }
    out
}

struct Placement {
    tree: Vec<(Pos, usize)>,
    call_pos: Vec<Pos>,
}

fn place(rule: &Formula, root: &Var, head_roots: &BTreeMap<String, Vec<bool>>) -> Option<Placement> {
    let classes = rule.classes();
    let atoms: Vec<&PointsTo> = rule.points_tos().collect();
    let tree = dfs(&atoms, &classes, root);
    if tree.len() != atoms.len() {
        return None;
    }
    let mut call_pos = Vec::new();
    for c in &rule.calls {
        let refs = |p: &&(Pos, usize), only_roots: bool| {
            c.args.iter().enumerate().any(|(k, y)| {
                !y.is_nil()
                    && atoms[p.1].targets.iter().any(|t| classes.same(t, y))
                    && (!only_roots || head_roots.get(&*c.pred).is_some_and(|r| r[k]))
            })
        };
        let preferred = tree.iter().filter(|p| refs(p, true)).map(|p| p.0.clone()).min();
        let any = tree.iter().filter(|p| refs(p, false)).map(|p| p.0.clone()).min();
        call_pos.push(preferred.or(any)?);
    }
    Some(Placement { tree, call_pos })
}

/// Rewrites the system so that every rule has exactly one points-to atom.
/// Each multi-atom rule is cut along a depth-first spanning tree of its head;
/// every non-root position becomes a fresh predicate over the rule's formals
/// and existentials, and `cleanup` then drops what is unused.
pub fn split_system(sys: &InductiveSystem) -> Result<InductiveSystem, Error> {
    let head_roots = head_root_table(sys);
    let mut out = sys.clone();
    let mut fresh: Vec<Predicate> = Vec::new();
    let mut taken: BTreeSet<String> = sys.predicates.iter().map(|p| p.name.to_string()).collect();
    for (i, pred) in sys.predicates.iter().enumerate() {
        for (j, rule) in pred.rules.iter().enumerate() {
            if rule.head_is_empty() {
                return Err(Error::EmptyRule { pred: pred.name.to_string(), rule: j });
            }
            let placement = root_candidates(pred, rule)
                .iter()
                .find_map(|r| place(rule, r, &head_roots))
                .ok_or_else(|| Error::DisconnectedRule { pred: pred.name.to_string(), rule: j })?;
            if placement.tree.len() == 1 {
                continue;
            }
            let atoms: Vec<&PointsTo> = rule.points_tos().collect();
            let classes = rule.classes();
            let mut params: Vec<Var> = pred.formals.clone();
            params.extend(rule.existentials.iter().cloned());
            let name_of = |p: &Pos, taken: &BTreeSet<String>| {
                let base = if p.is_empty() {
                    pred.name.to_string()
                } else {
                    let tail: Vec<String> = p.iter().map(|d| d.to_string()).collect();
                    format!("{}_{}_{}", pred.name, j, tail.join("_"))
                };
                let mut n = base.clone();
                let mut k = 1;
                while !p.is_empty() && taken.contains(&n) {
                    n = format!("{base}_{k}");
                    k += 1;
                }
                n
            };
            let mut names: BTreeMap<Pos, String> = BTreeMap::new();
            for (p, _) in &placement.tree {
                let n = name_of(p, &taken);
                taken.insert(n.clone());
                names.insert(p.clone(), n);
            }
            for (p, atom) in &placement.tree {
                let mut r =
                    Formula { spatial: vec![SpatialAtom::PointsTo(atoms[*atom].clone())], ..Default::default() };
                let mut d = 0u32;
                loop {
                    let mut q = p.clone();
                    q.push(d);
                    match names.get(&q) {
                        Some(n) => r.calls.push(PredicateCall::new(n, params.clone())),
                        None => break,
                    }
                    d += 1;
                }
                for (c, cp) in rule.calls.iter().zip(placement.call_pos.iter()) {
                    if cp == p {
                        r.calls.push(c.clone());
                    }
                }
                for e in &rule.pure {
                    let home = placement
                        .tree
                        .iter()
                        .find(|(_, a)| classes.same(&e.lhs, &atoms[*a].source))
                        .map_or(Pos::new(), |(q, _)| q.clone());
                    if home == *p {
                        r.pure.push(e.clone());
                    }
                }
                if p.is_empty() {
                    r.existentials = rule.existentials.clone();
                    out.predicates[i].rules[j] = r;
                } else {
                    fresh.push(Predicate::new(&names[p], params.clone(), vec![r]));
                }
            }
        }
    }
    let pinned: BTreeSet<String> = sys.predicates.iter().map(|p| p.name.to_string()).collect();
    out.predicates.extend(fresh);
    Ok(cleanup(&out, &pinned))
}
