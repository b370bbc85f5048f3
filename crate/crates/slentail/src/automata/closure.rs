use std::collections::{BTreeMap, BTreeSet};

use super::{StateId, Transition, TreeAutomaton};
use crate::slcore::Var;
use crate::tiles::{normalize_tile, Port, Tile};

/// Selector index of the first forward variable of `port`, or `MAX`.
fn port_key(port: &Port, tile: &Tile) -> usize {
    let Some(pt) = tile.points_to() else { return usize::MAX };
    port.fw.first().and_then(|v| pt.targets.iter().position(|t| t == v)).unwrap_or(usize::MAX)
}

/// Where `port` goes among `ports` so outgoing ports stay ordered by the
/// selector of their first forward variable.
fn insert_position(port: &Port, ports: &[Port], tile: &Tile) -> usize {
    let key = port_key(port, tile);
    ports.iter().filter(|p| port_key(p, tile) < key).count()
}

struct Closure<'a> {
    a: &'a TreeAutomaton,
    out: TreeAutomaton,
    params: BTreeSet<Var>,
    rev: BTreeMap<StateId, StateId>,
    rotated: BTreeSet<StateId>,
}

impl Closure<'_> {
    fn rev_state(&mut self, q: StateId) -> StateId {
        if let Some(&r) = self.rev.get(&q) {
            return r;
        }
        let r = self.out.add_state(format!("{}^rev", self.a.state_names[q]));
        self.rev.insert(q, r);
        r
    }

    fn add(&mut self, tile: Tile, children: Vec<StateId>, target: StateId) {
        // Rotated tiles are already in normal form up to local numbering.
        let tile = normalize_tile(&tile, &self.params).expect("rotated tile stays a singleton");
        self.out.add_transition(tile, children, target);
    }

    /// Rules reading the path from the root of `A` down to a `q`-labelled
    /// node upside down, so that this node's parent becomes its child.
    fn rotate_rule(&mut self, q: StateId, visited: &mut BTreeSet<StateId>) {
        visited.insert(q);
        if !self.rotated.insert(q) {
            // q^rev already has all of its rules.
            return;
        }
        let q_rev = self.rev_state(q);
        let rules: Vec<Transition> = self.a.transitions.clone();
        for rule in &rules {
            let u = self.a.tile(rule).clone();
            for j in (0..rule.children.len()).filter(|j| rule.children[*j] == q) {
                let xj = u.outputs[j].clone();
                let mut ports: Vec<Port> = u.outputs.clone();
                ports.remove(j);
                let mut states = rule.children.clone();
                states.remove(j);
                if u.input.is_empty() && self.a.finals.contains(&rule.target) {
                    self.add(Tile::new(u.formula.clone(), xj.swapped(), ports), states, q_rev);
                } else if !u.input.bw.is_empty() {
                    let swapped_in = u.input.swapped();
                    let p = insert_position(&swapped_in, &ports, &u);
                    ports.insert(p, swapped_in);
                    let s_rev = self.rev_state(rule.target);
                    states.insert(p, s_rev);
                    self.add(Tile::new(u.formula.clone(), xj.swapped(), ports), states, q_rev);
                    if !visited.contains(&rule.target) {
                        self.rotate_rule(rule.target, visited);
                    }
                }
            }
        }
    }
}

/// Closes `a` under rotations. For every rule that can label the root of a
/// rotated tree, a fresh final state accepts that rule with its incoming
/// port turned into an outgoing one, whose subtree is the reversed path back
/// to the old root. Reversed-path states `q^rev` do not depend on the
/// chosen root rule, so they are shared.
pub fn rotation_closure(a: &TreeAutomaton, params: &BTreeSet<Var>) -> TreeAutomaton {
    let mut c = Closure { a, out: a.clone(), params: params.clone(), rev: BTreeMap::new(), rotated: BTreeSet::new() };
    for (k, rho) in a.transitions.iter().enumerate() {
        let t = a.tile(rho).clone();
        let q = rho.target;
        if t.input.is_empty() && a.finals.contains(&q) {
            continue;
        }
        if t.input.bw.is_empty() {
            continue;
        }
        let q_rev = c.rev_state(q);
        let q_f = c.out.add_state(format!("{}^f{}", a.state_names[q], k));
        c.out.finals.insert(q_f);
        let swapped_in = t.input.swapped();
        let mut ports = t.outputs.clone();
        let p = insert_position(&swapped_in, &ports, &t);
        ports.insert(p, swapped_in);
        let mut states = rho.children.clone();
        states.insert(p, q_rev);
        c.add(Tile::new(t.formula.clone(), Port::default(), ports), states, q_f);
        c.rotate_rule(q, &mut BTreeSet::new());
    }
    c.out
}
