use std::collections::{BTreeMap, BTreeSet};

use super::{Formula, Loc, State, Var, VarClasses};
use crate::Error;

/// Strict-semantics satisfaction `S ⊨ φ` for a formula without calls.
///
/// Equalities are folded into classes first. The points-to atoms are then
/// matched against distinct heap cells by backtracking; a cell matches only
/// if it has exactly as many selectors as the atom has targets. Every heap
/// cell must be claimed by exactly one atom.
pub fn eval_formula(state: &State, phi: &Formula) -> Result<bool, Error> {
    if !phi.calls.is_empty() {
        return Err(Error::Unsupported("evaluation of a formula with predicate calls".into()));
    }
    let bound: BTreeSet<Var> = phi.existentials.iter().cloned().collect();
    let classes = phi.classes();
    let atoms: Vec<_> = phi.points_tos().collect();

    // initial class values from the store
    let mut values: BTreeMap<Var, Loc> = BTreeMap::new();
    for v in phi.all_vars().into_iter().chain(std::iter::once(Var::Nil)) {
        if bound.contains(&v) {
            continue;
        }
        let l = state.lookup(&v).ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
        let root = classes.find(&v);
        match values.get(&root) {
            Some(prev) if *prev != l => return Ok(false),
            _ => {
                values.insert(root, l);
            }
        }
    }
    if atoms.len() != state.heap.len() {
        return Ok(false);
    }
    if atoms.is_empty() {
        return Ok(true);
    }
    let cells: Vec<(&Loc, &Vec<Loc>)> = state.heap.iter().collect();
    let mut used = vec![false; cells.len()];
    let order = atom_order(&atoms, &classes, &values);
    Ok(match_atoms(&order, &atoms, &classes, &cells, &mut used, &mut values))
}

/// Orders atoms so that those with an already determined source come first,
/// which keeps the search close to linear on list- and tree-shaped formulas.
fn atom_order(atoms: &[&super::PointsTo], classes: &VarClasses, values: &BTreeMap<Var, Loc>) -> Vec<usize> {
    let mut known: BTreeSet<Var> = values.keys().cloned().collect();
    let mut order = Vec::new();
    let mut left: Vec<usize> = (0..atoms.len()).collect();
    while !left.is_empty() {
        let pick = left.iter().position(|i| known.contains(&classes.find(&atoms[*i].source))).unwrap_or(0);
        let i = left.remove(pick);
        known.insert(classes.find(&atoms[i].source));
        for t in &atoms[i].targets {
            known.insert(classes.find(t));
        }
        order.push(i);
    }
    order
}

fn match_atoms(
    order: &[usize],
    atoms: &[&super::PointsTo],
    classes: &VarClasses,
    cells: &[(&Loc, &Vec<Loc>)],
    used: &mut [bool],
    values: &mut BTreeMap<Var, Loc>,
) -> bool {
    let Some((&i, rest)) = order.split_first() else {
        return true;
    };
    let atom = atoms[i];
    let src = classes.find(&atom.source);
    for (c, (loc, targets)) in cells.iter().enumerate() {
        if used[c] || targets.len() != atom.targets.len() {
            continue;
        }
        let mut added = Vec::new();
        let ok = bind(values, &src, **loc, &mut added)
            && atom.targets.iter().zip(targets.iter()).all(|(v, l)| bind(values, &classes.find(v), *l, &mut added));
        if ok {
            used[c] = true;
            if match_atoms(rest, atoms, classes, cells, used, values) {
                return true;
            }
            used[c] = false;
        }
        for k in added {
            values.remove(&k);
        }
    }
    false
}

fn bind(values: &mut BTreeMap<Var, Loc>, class: &Var, l: Loc, added: &mut Vec<Var>) -> bool {
    match values.get(class) {
        Some(prev) => *prev == l,
        None => {
            values.insert(class.clone(), l);
            added.push(class.clone());
            true
        }
    }
}
