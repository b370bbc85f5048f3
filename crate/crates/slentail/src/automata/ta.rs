use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::slcore::{Pos, Tree};
use crate::tiles::Tile;

pub type StateId = usize;
pub type SymbolId = usize;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Transition {
    pub symbol: SymbolId,
    pub children: Vec<StateId>,
    pub target: StateId,
}

/// A bottom-up nondeterministic tree automaton over normal tiles.
///
/// Symbols are interned per automaton; two automata are compared through
/// the tiles themselves, which are equal exactly when they denote the same
/// symbol.
#[derive(Clone, Debug, Default)]
pub struct TreeAutomaton {
    pub state_names: Vec<String>,
    pub alphabet: Vec<Tile>,
    symbol_index: HashMap<Tile, SymbolId>,
    pub transitions: Vec<Transition>,
    pub finals: BTreeSet<StateId>,
}

/// Assignment of states to tree positions.
pub type Run = BTreeMap<Pos, StateId>;

impl TreeAutomaton {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        self.state_names.push(name.into());
        self.state_names.len() - 1
    }

    pub fn intern(&mut self, tile: Tile) -> SymbolId {
        if let Some(&s) = self.symbol_index.get(&tile) {
            return s;
        }
        self.alphabet.push(tile.clone());
        self.symbol_index.insert(tile, self.alphabet.len() - 1);
        self.alphabet.len() - 1
    }

    pub fn symbol_of(&self, tile: &Tile) -> Option<SymbolId> {
        self.symbol_index.get(tile).copied()
    }

    /// Adds a transition unless already present; returns whether it was new.
    pub fn add_transition(&mut self, tile: Tile, children: Vec<StateId>, target: StateId) -> bool {
        debug_assert_eq!(tile.arity(), children.len());
        let symbol = self.intern(tile);
        let t = Transition { symbol, children, target };
        if self.transitions.contains(&t) {
            return false;
        }
        self.transitions.push(t);
        true
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    /// `Σ (n + 1)` over transitions of arity `n`.
    pub fn size(&self) -> usize {
        self.transitions.iter().map(|t| t.children.len() + 1).sum()
    }

    pub fn tile(&self, t: &Transition) -> &Tile {
        &self.alphabet[t.symbol]
    }

    /// States reachable at the root of `t`, bottom-up.
    fn reach(&self, t: &Tree<Tile>) -> (BTreeSet<StateId>, Vec<BTreeSet<StateId>>) {
        let kids: Vec<BTreeSet<StateId>> = t.children.iter().map(|c| self.reach(c).0).collect();
        let Some(sym) = self.symbol_of(&t.label) else {
            return (BTreeSet::new(), kids);
        };
        let here = self
            .transitions
            .iter()
            .filter(|tr| {
                tr.symbol == sym
                    && tr.children.len() == kids.len()
                    && tr.children.iter().zip(&kids).all(|(q, s)| s.contains(q))
            })
            .map(|tr| tr.target)
            .collect();
        (here, kids)
    }

    /// An accepting run over `t`, if any.
    pub fn accepting_run(&self, t: &Tree<Tile>) -> Option<Run> {
        let (root, _) = self.reach(t);
        let q = *root.iter().find(|q| self.finals.contains(q))?;
        let mut run = Run::new();
        self.descend(t, q, &mut Vec::new(), &mut run).then_some(run)
    }

    fn descend(&self, t: &Tree<Tile>, q: StateId, pos: &mut Pos, run: &mut Run) -> bool {
        let Some(sym) = self.symbol_of(&t.label) else { return false };
        let kids: Vec<BTreeSet<StateId>> = t.children.iter().map(|c| self.reach(c).0).collect();
        for tr in &self.transitions {
            if tr.symbol != sym || tr.target != q || tr.children.len() != kids.len() {
                continue;
            }
            if !tr.children.iter().zip(&kids).all(|(s, set)| set.contains(s)) {
                continue;
            }
            run.insert(pos.clone(), q);
            for (i, (c, s)) in t.children.iter().zip(&tr.children).enumerate() {
                pos.push(i as u32);
                let ok = self.descend(c, *s, pos, run);
                pos.pop();
                if !ok {
                    return false;
                }
            }
            return true;
        }
        false
    }

    pub fn accepts(&self, t: &Tree<Tile>) -> bool {
        let (root, _) = self.reach(t);
        root.iter().any(|q| self.finals.contains(q))
    }

    /// States that accept at least one tree.
    pub fn productive_states(&self) -> BTreeSet<StateId> {
        let mut prod = BTreeSet::new();
        loop {
            let before = prod.len();
            for tr in &self.transitions {
                if tr.children.iter().all(|c| prod.contains(c)) {
                    prod.insert(tr.target);
                }
            }
            if prod.len() == before {
                return prod;
            }
        }
    }

    /// Restriction to productive states reachable top-down from a final.
    pub fn trim(&self) -> TreeAutomaton {
        let prod = self.productive_states();
        let useful_tr: Vec<&Transition> = self
            .transitions
            .iter()
            .filter(|t| prod.contains(&t.target) && t.children.iter().all(|c| prod.contains(c)))
            .collect();
        let mut reach: BTreeSet<StateId> = self.finals.iter().filter(|q| prod.contains(q)).copied().collect();
        loop {
            let before = reach.len();
            for t in &useful_tr {
                if reach.contains(&t.target) {
                    reach.extend(t.children.iter().copied());
                }
            }
            if reach.len() == before {
                break;
            }
        }
        let map: BTreeMap<StateId, StateId> = reach.iter().enumerate().map(|(i, q)| (*q, i)).collect();
        let mut out = TreeAutomaton::new();
        for q in &reach {
            out.add_state(self.state_names[*q].clone());
        }
        for t in useful_tr.into_iter().filter(|t| reach.contains(&t.target)) {
            out.add_transition(self.tile(t).clone(), t.children.iter().map(|c| map[c]).collect(), map[&t.target]);
        }
        out.finals = self.finals.iter().filter_map(|q| map.get(q).copied()).collect();
        out
    }

    /// Disjoint union.
    pub fn union(&self, other: &TreeAutomaton) -> TreeAutomaton {
        let mut out = self.clone();
        let off = out.state_count();
        for n in &other.state_names {
            out.add_state(n.clone());
        }
        for t in &other.transitions {
            out.add_transition(other.tile(t).clone(), t.children.iter().map(|c| c + off).collect(), t.target + off);
        }
        out.finals.extend(other.finals.iter().map(|q| q + off));
        out
    }

    /// Every accepted tree of height at most `depth`, stopping after `cap`.
    pub fn enumerate(&self, depth: usize, cap: usize) -> Vec<Tree<Tile>> {
        // trees[q] = trees of height <= current level accepted at q
        let mut trees: Vec<Vec<Tree<Tile>>> = vec![Vec::new(); self.state_count()];
        for _ in 0..depth {
            let mut next: Vec<Vec<Tree<Tile>>> = vec![Vec::new(); self.state_count()];
            for tr in &self.transitions {
                let mut combos: Vec<Vec<Tree<Tile>>> = vec![Vec::new()];
                for c in &tr.children {
                    let mut grown = Vec::new();
                    for prefix in &combos {
                        for t in &trees[*c] {
                            if grown.len() >= cap {
                                break;
                            }
                            let mut p = prefix.clone();
                            p.push(t.clone());
                            grown.push(p);
                        }
                    }
                    combos = grown;
                }
                for kids in combos {
                    if next[tr.target].len() < cap {
                        next[tr.target].push(Tree::node(self.tile(tr).clone(), kids));
                    }
                }
            }
            for v in next.iter_mut() {
                v.sort();
                v.dedup();
            }
            trees = next;
        }
        let mut out: Vec<Tree<Tile>> = self.finals.iter().flat_map(|q| trees[*q].iter().cloned()).collect();
        out.sort();
        out.dedup();
        out.truncate(cap);
        out
    }
}

impl fmt::Display for TreeAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let finals: Vec<&str> = self.finals.iter().map(|q| self.state_names[*q].as_str()).collect();
        writeln!(f, "states {} / finals {}", self.state_count(), finals.join(", "))?;
        for t in &self.transitions {
            let kids: Vec<&str> = t.children.iter().map(|q| self.state_names[*q].as_str()).collect();
            writeln!(f, "[{}]({}) -> {}", self.tile(t), kids.join(","), self.state_names[t.target])?;
        }
        Ok(())
    }
}
