use std::collections::{BTreeMap, BTreeSet};

use super::{StateId, TreeAutomaton};
use crate::preprocess::PipelineArtifacts;
use crate::slcore::{Formula, Var, VarClasses};
use crate::tiles::{normalize_tile, Port, Tile};
use crate::Error;

/// Index of the first selector pointing into `v`'s class, if any.
pub(crate) fn selector_of(v: &Var, targets: &[Var], classes: &VarClasses) -> Option<usize> {
    targets.iter().position(|t| classes.same(t, v))
}

fn selector_sort(vs: &mut [Var], targets: &[Var], classes: &VarClasses) {
    vs.sort_by_key(|v| selector_of(v, targets, classes).unwrap_or(usize::MAX));
}

/// Builds the automaton of a processed rooted system: one state per
/// predicate and one transition per rule, labelled with the rule's tile in
/// normal form. Ports are factorised by the signatures, the incoming
/// backward part and each outgoing forward part are ordered by the
/// selectors that reference them, and outgoing ports are ordered by the
/// selector of their first forward variable.
pub fn sl2ta(art: &PipelineArtifacts) -> Result<TreeAutomaton, Error> {
    let sys = &art.processed;
    let params: BTreeSet<Var> = art.parameters.iter().cloned().collect();
    let mut ta = TreeAutomaton::new();
    let mut state: BTreeMap<&str, StateId> = BTreeMap::new();
    for p in &sys.predicates {
        let id = ta.add_state(p.name.to_lowercase());
        state.insert(&p.name, id);
    }
    let factor = |pred: &str, args: &[Var]| -> Port {
        let sig = &art.signatures[pred];
        let pick = |set: &BTreeSet<usize>| set.iter().map(|k| args[*k].clone()).collect::<Vec<_>>();
        Port::new(pick(&sig.fw), pick(&sig.bw), pick(&sig.eq))
    };
    for p in &sys.predicates {
        for rule in &p.rules {
            let pt = rule.points_tos().next().ok_or_else(|| Error::EmptyRule { pred: p.name.to_string(), rule: 0 })?;
            let classes = rule.classes();
            let mut input = factor(&p.name, &p.formals);
            selector_sort(&mut input.bw, &pt.targets, &classes);
            let mut outs: Vec<(Port, StateId)> = rule
                .calls
                .iter()
                .map(|c| {
                    let mut port = factor(&c.pred, &c.args);
                    selector_sort(&mut port.fw, &pt.targets, &classes);
                    (port, state[&*c.pred])
                })
                .collect();
            outs.sort_by_key(|(port, _)| {
                port.fw.first().and_then(|v| selector_of(v, &pt.targets, &classes)).unwrap_or(usize::MAX)
            });
            let formula = Formula { calls: Vec::new(), ..rule.clone() };
            let raw = Tile::new(formula, input, outs.iter().map(|(p, _)| p.clone()).collect());
            let tile = normalize_tile(&raw, &params)?;
            ta.add_transition(tile, outs.iter().map(|(_, q)| *q).collect(), state[&*p.name]);
        }
    }
    ta.finals.insert(state[art.root.as_str()]);
    Ok(ta)
}
