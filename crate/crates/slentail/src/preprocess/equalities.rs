use std::collections::{BTreeMap, BTreeSet};

use crate::frontend::{InductiveSystem, Predicate};
use crate::slcore::{Formula, PureAtom, Var};
use crate::Error;

/// Rewrites every rule over `=_Π` class representatives. A class is
/// represented by `nil` if it contains it, else by its allocated formal, else
/// by its formal, else by its first existential in declaration order. Only
/// equalities between an allocated formal and other formals survive.
pub fn eliminate_equalities(sys: &InductiveSystem) -> Result<InductiveSystem, Error> {
    let mut out = sys.clone();
    for p in out.predicates.iter_mut() {
        for j in 0..p.rules.len() {
            p.rules[j] = eliminate_in_rule(p, j)?;
        }
    }
    Ok(out)
}

fn eliminate_in_rule(p: &Predicate, j: usize) -> Result<Formula, Error> {
    let rule = &p.rules[j];
    let unsat = |reason: String| Error::UnsatRule { pred: p.name.to_string(), rule: j, reason };
    let classes = rule.classes();
    let sources: Vec<&Var> = rule.points_tos().map(|pt| &pt.source).collect();
    for (a, x) in sources.iter().enumerate() {
        for y in &sources[a + 1..] {
            if classes.same(x, y) {
                return Err(unsat(format!("`{x}` and `{y}` are allocated twice")));
            }
        }
        if classes.same(x, &Var::Nil) {
            return Err(unsat(format!("`{x}` equals nil but is allocated")));
        }
    }
    let alloc: BTreeSet<Var> = sources.iter().map(|v| classes.find(v)).collect();
    let mut vars: Vec<Var> = p.formals.clone();
    vars.extend(rule.existentials.iter().cloned());
    vars.push(Var::Nil);
    let mut rep: BTreeMap<Var, Var> = BTreeMap::new();
    for v in &vars {
        let root = classes.find(v);
        if rep.contains_key(&root) {
            continue;
        }
        let members: Vec<&Var> = vars.iter().filter(|u| classes.find(u) == root).collect();
        let formals: Vec<&Var> = members.iter().copied().filter(|u| p.formals.contains(u)).collect();
        let allocated_formal = formals.iter().find(|u| sources.contains(u)).copied();
        let chosen = if members.contains(&&Var::Nil) {
            Var::Nil
        } else if let Some(a) = allocated_formal {
            a.clone()
        } else if let Some(f) = formals.first() {
            (*f).clone()
        } else {
            members[0].clone()
        };
        rep.insert(root, chosen);
    }
    let subst: BTreeMap<Var, Var> =
        vars.iter().filter(|v| !v.is_nil()).map(|v| (v.clone(), rep[&classes.find(v)].clone())).collect();
    let mut out = rule.clone();
    out.pure.clear();
    out = out.substitute(&subst);
    // restore existential list: keep representatives only, in order
    out.existentials = rule.existentials.iter().filter(|z| subst.get(*z) == Some(*z)).cloned().collect();
    for x in &p.formals {
        if !alloc.contains(&classes.find(x)) || subst[x] != *x {
            continue;
        }
        for y in &p.formals {
            if y != x && classes.same(x, y) {
                out.pure.push(PureAtom::new(x.clone(), y.clone()));
            }
        }
    }
    Ok(out)
}
