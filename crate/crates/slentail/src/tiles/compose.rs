use std::collections::BTreeSet;

use super::{Port, Tile};
use crate::slcore::{pos_string, Formula, PureAtom, Tree, Var};
use crate::Error;

fn named(vs: impl IntoIterator<Item = Var>) -> BTreeSet<Var> {
    vs.into_iter().filter(|v| matches!(v, Var::Named(_))).collect()
}

/// `t1 ⊛_i t2`: plugs `t2` into the `i`-th outgoing port of `t1`.
///
/// Locals of `t2` are shifted past those of `t1`, so tiles in normal form
/// compose without renaming. Named variables are shared parameters, except
/// that one quantified in either tile, or sitting in a port of both, is a
/// clash.
pub fn compose_tiles(t1: &Tile, i: usize, t2: &Tile) -> Result<Tile, Error> {
    let port = t1
        .outputs
        .get(i)
        .ok_or_else(|| Error::PortMismatch(format!("tile has {} outgoing ports, no port {i}", t1.arity())))?;
    if port.widths() != t2.input.widths() {
        return Err(Error::PortMismatch(format!("outgoing port {i} is ({port}), incoming port is ({})", t2.input)));
    }
    let shift = t1.max_local().map_or(0, |m| m + 1);
    let t2 = t2.map_vars(&|v| match v {
        Var::Local(k) => Var::Local(k + shift),
        _ => v.clone(),
    });
    let all1 = named(t1.formula.all_vars().into_iter().chain(t1.port_vars()));
    let all2 = named(t2.formula.all_vars().into_iter().chain(t2.port_vars()));
    let bound1 = named(t1.formula.existentials.iter().cloned());
    let bound2 = named(t2.formula.existentials.iter().cloned());
    let ports1 = named(t1.port_vars());
    let ports2 = named(t2.port_vars());
    let clash = bound1
        .intersection(&all2)
        .chain(bound2.intersection(&all1))
        .chain(ports1.intersection(&ports2))
        .next()
        .cloned();
    if let Some(v) = clash {
        return Err(Error::VariableClash(v.to_string()));
    }

    let mut outputs: Vec<Port> = t1.outputs[..i].to_vec();
    outputs.extend(t2.outputs.iter().cloned());
    outputs.extend(t1.outputs[i + 1..].iter().cloned());
    let remaining: BTreeSet<&Var> = t1.input.vars().chain(outputs.iter().flat_map(|p| p.vars())).collect();

    let mut formula = t1.formula.clone().star(t2.formula.clone());
    for (a, b) in port.vars().zip(t2.input.vars()) {
        if a != b {
            formula.pure.push(PureAtom::new(a.clone(), b.clone()));
        }
    }
    for v in port.vars().chain(t2.input.vars()) {
        let quantifiable = v.is_local() || !t1.parameters().contains(v) && !t2.parameters().contains(v);
        if !v.is_nil() && quantifiable && !remaining.contains(v) && !formula.existentials.contains(v) {
            formula.existentials.push(v.clone());
        }
    }
    Ok(Tile { formula, input: t1.input.clone(), outputs })
}

/// The characteristic tile `Φ(t)`: every label renamed apart by its
/// position, then children composed in order. It has no outgoing ports.
/// Locals and quantified names are per node; other named variables are
/// parameters shared by the whole tree.
pub fn char_tile(t: &Tree<Tile>) -> Result<Tile, Error> {
    fn go(t: &Tree<Tile>, pos: &mut Vec<u32>) -> Result<Tile, Error> {
        if t.children.len() != t.label.arity() {
            return Err(Error::PortMismatch(format!(
                "node {} has {} children but its tile has arity {}",
                pos_string(pos),
                t.children.len(),
                t.label.arity()
            )));
        }
        let tag = pos_string(pos);
        let bound: BTreeSet<&Var> = t.label.formula.existentials.iter().collect();
        let mut acc = t.label.map_vars(&|v| match v {
            Var::Local(k) => Var::named(&format!("ξ{k}@{tag}")),
            Var::Named(n) if bound.contains(v) => Var::named(&format!("{n}@{tag}")),
            _ => v.clone(),
        });
        for (i, c) in t.children.iter().enumerate() {
            pos.push(i as u32);
            let sub = go(c, pos)?;
            pos.pop();
            acc = compose_tiles(&acc, 0, &sub)?;
        }
        Ok(acc)
    }
    go(t, &mut Vec::new())
}

/// `Φ(t)` as a formula.
pub fn char_formula(t: &Tree<Tile>) -> Result<Formula, Error> {
    Ok(char_tile(t)?.formula)
}

/// Drops the equality parts of every port, quantifying the locals that no
/// longer sit in a port.
pub fn canonical_projection(t: &Tree<Tile>) -> Tree<Tile> {
    t.map(&|tile: &Tile| project_tile(tile))
}

pub fn project_tile(tile: &Tile) -> Tile {
    let strip = |p: &Port| Port::new(p.fw.clone(), p.bw.clone(), Vec::new());
    let input = strip(&tile.input);
    let outputs: Vec<Port> = tile.outputs.iter().map(strip).collect();
    let ports: BTreeSet<&Var> = input.vars().chain(outputs.iter().flat_map(|p| p.vars())).collect();
    let mut formula = tile.formula.clone();
    for v in tile.formula.all_vars() {
        if v.is_local() && !ports.contains(&v) && !formula.existentials.contains(&v) {
            formula.existentials.push(v);
        }
    }
    formula.existentials.sort();
    Tile { formula, input, outputs }
}
