use std::collections::{BTreeSet, HashMap};

use super::{StateId, TreeAutomaton};
use crate::slcore::Tree;
use crate::tiles::Tile;

/// Outcome of an inclusion check.
#[derive(Clone, Debug)]
pub struct InclusionResult {
    pub included: bool,
    /// A tree accepted by the left automaton and rejected by the right one.
    pub witness: Option<Tree<Tile>>,
    /// Number of (state, state set) pairs explored.
    pub explored: usize,
}

struct Pair {
    set: BTreeSet<StateId>,
    tree: Tree<Tile>,
    round: usize,
    alive: bool,
}

/// Decides `L(a) ⊆ L(b)` by a bottom-up subset construction on `b` run in
/// lockstep with `a`. Each explored pair `(q, S)` records a tree that `a`
/// accepts in `q` and `b` accepts in exactly `S`. With `antichain` set, a
/// pair is dropped when another with the same `q` and a smaller `S`
/// exists, since it can only lead to larger sets. Pairs are built in
/// rounds of increasing height, so a witness has minimal height.
pub fn inclusion(a: &TreeAutomaton, b: &TreeAutomaton, antichain: bool) -> InclusionResult {
    // Transitions of b by symbol, keyed through the shared tile.
    let mut b_by_tile: HashMap<&Tile, Vec<usize>> = HashMap::new();
    for (i, t) in b.transitions.iter().enumerate() {
        b_by_tile.entry(b.tile(t)).or_default().push(i);
    }
    let mut pairs: Vec<Pair> = Vec::new();
    let mut by_state: Vec<Vec<usize>> = vec![Vec::new(); a.state_count()];
    let mut round = 0;
    loop {
        round += 1;
        let mut fresh: Vec<(StateId, BTreeSet<StateId>, Tree<Tile>)> = Vec::new();
        for tr in &a.transitions {
            let tile = a.tile(tr);
            let b_rules: &[usize] = b_by_tile.get(tile).map(|v| v.as_slice()).unwrap_or(&[]);
            // Every combination of live child pairs with one born last round.
            let lists: Vec<Vec<usize>> = tr
                .children
                .iter()
                .map(|c| by_state[*c].iter().copied().filter(|i| pairs[*i].alive).collect())
                .collect();
            if lists.iter().any(|l| l.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; lists.len()];
            loop {
                let chosen: Vec<usize> = idx.iter().zip(&lists).map(|(i, l)| l[*i]).collect();
                let new_enough = round == 1 || chosen.iter().any(|c| pairs[*c].round == round - 1);
                if new_enough {
                    let set: BTreeSet<StateId> = b_rules
                        .iter()
                        .map(|i| &b.transitions[*i])
                        .filter(|bt| bt.children.iter().zip(&chosen).all(|(s, c)| pairs[*c].set.contains(s)))
                        .map(|bt| bt.target)
                        .collect();
                    let kids = chosen.iter().map(|c| pairs[*c].tree.clone()).collect();
                    fresh.push((tr.target, set, Tree::node(tile.clone(), kids)));
                }
                // next combination
                let mut k = 0;
                while k < idx.len() {
                    idx[k] += 1;
                    if idx[k] < lists[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
        }
        let mut added = false;
        for (q, set, tree) in fresh {
            let dominated = by_state[q].iter().any(|i| {
                let p = &pairs[*i];
                p.alive && if antichain { p.set.is_subset(&set) } else { p.set == set }
            });
            if dominated {
                continue;
            }
            if a.finals.contains(&q) && set.is_disjoint(&b.finals) {
                return InclusionResult { included: false, witness: Some(tree), explored: pairs.len() + 1 };
            }
            if antichain {
                for i in &by_state[q] {
                    if set.is_subset(&pairs[*i].set) {
                        pairs[*i].alive = false;
                    }
                }
            }
            by_state[q].push(pairs.len());
            pairs.push(Pair { set, tree, round, alive: true });
            added = true;
        }
        if !added {
            return InclusionResult { included: true, witness: None, explored: pairs.len() };
        }
    }
}
