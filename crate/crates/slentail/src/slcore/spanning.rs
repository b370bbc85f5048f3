use std::collections::{BTreeMap, BTreeSet};

use super::state::next_permutation;
use super::{Loc, Pos, State};
use crate::Error;

/// Default cell bound for spanning-tree enumeration.
pub const DEFAULT_CELL_BOUND: usize = 10;

/// A spanning tree of a state, as a position to location map.
pub type SpanningTree = BTreeMap<Pos, Loc>;

/// Successor sets restricted to allocated locations.
fn alloc_succ(state: &State) -> BTreeMap<Loc, BTreeSet<Loc>> {
    state
        .heap
        .iter()
        .map(|(l, c)| (*l, c.iter().copied().filter(|t| state.heap.contains_key(t) && t != l).collect()))
        .collect()
}

/// Enumerates all spanning trees: bijective trees over the allocated
/// locations whose parent-child links are backed by selector edges. Trees
/// differing only in child order are distinct. Sorted by their listing.
pub fn spanning_trees(state: &State, bound: usize) -> Result<Vec<SpanningTree>, Error> {
    let n = state.heap.len();
    if n > bound {
        return Err(Error::BoundExceeded(format!("{n} cells exceeds spanning-tree bound {bound}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let succ = alloc_succ(state);
    let cells: Vec<Loc> = state.heap.keys().copied().collect();
    let mut out = Vec::new();
    for &root in &cells {
        let others: Vec<Loc> = cells.iter().copied().filter(|l| *l != root).collect();
        let preds: Vec<Vec<Loc>> =
            others.iter().map(|l| cells.iter().copied().filter(|p| succ[p].contains(l)).collect()).collect();
        let mut choice = vec![0usize; others.len()];
        if preds.iter().any(|p| p.is_empty()) {
            continue;
        }
        loop {
            let parent: BTreeMap<Loc, Loc> =
                others.iter().enumerate().map(|(i, l)| (*l, preds[i][choice[i]])).collect();
            if reaches_root(&parent, root) {
                let mut children: BTreeMap<Loc, Vec<Loc>> = BTreeMap::new();
                for (c, p) in &parent {
                    children.entry(*p).or_default().push(*c);
                }
                expand_orders(root, &children, &mut out);
            }
            // odometer over parent choices
            let mut i = 0;
            loop {
                if i == choice.len() {
                    break;
                }
                choice[i] += 1;
                if choice[i] < preds[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    out.sort_by(|a, b| a.iter().collect::<Vec<_>>().cmp(&b.iter().collect::<Vec<_>>()));
    Ok(out)
}

fn reaches_root(parent: &BTreeMap<Loc, Loc>, root: Loc) -> bool {
    parent.keys().all(|start| {
        let mut cur = *start;
        for _ in 0..=parent.len() {
            if cur == root {
                return true;
            }
            cur = parent[&cur];
        }
        false
    })
}

/// Every assignment of child orders for a fixed parent relation.
fn expand_orders(root: Loc, children: &BTreeMap<Loc, Vec<Loc>>, out: &mut Vec<SpanningTree>) {
    let nodes: Vec<Loc> = children.keys().copied().collect();
    let mut perms: Vec<Vec<usize>> = nodes.iter().map(|n| (0..children[n].len()).collect()).collect();
    loop {
        let mut tree = SpanningTree::new();
        let mut stack = vec![(Pos::new(), root)];
        while let Some((p, l)) = stack.pop() {
            tree.insert(p.clone(), l);
            if let Some(k) = nodes.iter().position(|n| *n == l) {
                for (d, ci) in perms[k].iter().enumerate() {
                    let mut q = p.clone();
                    q.push(d as u32);
                    stack.push((q, children[&l][*ci]));
                }
            }
        }
        out.push(tree);
        let mut i = 0;
        loop {
            if i == perms.len() {
                return;
            }
            if next_permutation(&mut perms[i]) {
                break;
            }
            perms[i].sort();
            i += 1;
        }
    }
}

/// Whether every edge between allocated locations is local for `tree`:
/// it is a self loop or links a node to its parent or one of its children.
/// Edges into unallocated locations (null or dangling) are not constrained.
pub fn edges_local(state: &State, tree: &SpanningTree) -> bool {
    let pos_of: BTreeMap<Loc, &Pos> = tree.iter().map(|(p, l)| (*l, p)).collect();
    state.edges().all(|(src, _, dst)| {
        if src == dst || !state.heap.contains_key(&dst) {
            return true;
        }
        let (a, b) = (pos_of[&src], pos_of[&dst]);
        (a.len() + 1 == b.len() && b.starts_with(a)) || (b.len() + 1 == a.len() && a.starts_with(b))
    })
}

pub fn is_local_state(state: &State, bound: usize) -> Result<bool, Error> {
    let trees = spanning_trees(state, bound)?;
    let first = trees.first().ok_or(Error::NoSpanningTree)?;
    Ok(edges_local(state, first))
}
