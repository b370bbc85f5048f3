use std::collections::BTreeMap;

use super::{Port, Tile};
use crate::slcore::{Tree, Var};

/// Reasons a tile is not canonical or quasi-canonical; empty when it is.
///
/// The checks read the tile in normal form: `Local` variables are internal
/// to the tile, named variables are parameters. A port position holding the
/// allocated variable stands for a fresh port variable equal to it.
pub fn quasi_canonical_violations(tile: &Tile) -> Vec<String> {
    let mut out = Vec::new();
    if !tile.formula.calls.is_empty() {
        out.push("formula has predicate calls".to_string());
    }
    let Some(pt) = tile.points_to() else {
        out.push("formula does not have exactly one points-to".to_string());
        return out;
    };
    let z = &pt.source;
    let sel = |v: &Var| pt.targets.iter().position(|t| t == v);
    let all_ports: Vec<&Port> = std::iter::once(&tile.input).chain(&tile.outputs).collect();

    for (k, p) in all_ports.iter().enumerate() {
        for v in p.vars() {
            if v.is_nil() {
                out.push(format!("port {} contains nil", k as i64 - 1));
            }
        }
        for v in p.fw.iter().chain(&p.bw) {
            if !v.is_local() && v != z {
                out.push(format!("port {} holds parameter {v}", k as i64 - 1));
            }
        }
    }

    // Each referenced local is linked to exactly one port (fw/bw parts).
    let mut occurrences: BTreeMap<&Var, usize> = BTreeMap::new();
    for p in &all_ports {
        let mut seen: Vec<&Var> = p.fw.iter().chain(&p.bw).collect();
        seen.sort();
        seen.dedup();
        for v in seen {
            *occurrences.entry(v).or_default() += 1;
        }
    }
    for y in &pt.targets {
        if y == z || !y.is_local() {
            continue;
        }
        match occurrences.get(y) {
            Some(1) => {}
            Some(_) => out.push(format!("target {y} occurs in several ports")),
            // Only linked through equality parts: a parameter of the fw/bw projection.
            None if all_ports.iter().any(|p| p.eq.contains(y)) => {}
            // A quantified dangling target, as left behind by the canonical projection.
            None if tile.formula.existentials.contains(y) => {}
            None => out.push(format!("target {y} occurs in no port")),
        }
    }

    let increasing = |vs: &[Var]| -> bool {
        let idx: Vec<Option<usize>> = vs.iter().map(sel).collect();
        idx.iter().all(|i| i.is_some()) && idx.windows(2).all(|w| w[0] < w[1])
    };
    if !increasing(&tile.input.bw) {
        out.push("incoming backward part is not ordered by referencing selectors".to_string());
    }
    if tile.input.fw.iter().any(|v| v != z) {
        out.push("incoming forward part is not the allocated cell".to_string());
    }
    for (i, p) in tile.outputs.iter().enumerate() {
        match p.fw.first() {
            Some(v) if v != z && sel(v).is_some() => {}
            _ => out.push(format!("outgoing port {i} references no target")),
        }
        if !increasing(&p.fw) {
            out.push(format!("outgoing port {i} forward part is not ordered by selectors"));
        }
        if p.bw.iter().any(|v| v != z) {
            out.push(format!("outgoing port {i} backward part is not the allocated cell"));
        }
    }
    let firsts: Vec<Option<usize>> = tile.outputs.iter().map(|p| p.fw.first().and_then(sel)).collect();
    if !firsts.windows(2).all(|w| w[0] < w[1]) {
        out.push("outgoing ports are not ordered by the selector of their first element".to_string());
    }
    let to_z = !tile.input.fw.is_empty() || tile.outputs.iter().any(|p| !p.bw.is_empty());
    if to_z && pt.targets.contains(z) {
        out.push("allocated cell is its own target and also a port".to_string());
    }

    // Equality parts: either a spatial variable, or linked to exactly one
    // other equality slot in another port.
    let spatial = tile.formula.spatial_vars();
    let mut eq_slots: BTreeMap<&Var, Vec<usize>> = BTreeMap::new();
    for (k, p) in all_ports.iter().enumerate() {
        for v in &p.eq {
            eq_slots.entry(v).or_default().push(k);
        }
    }
    for (v, ports) in &eq_slots {
        if spatial.contains(*v) || !v.is_local() {
            continue;
        }
        if occurrences.contains_key(*v) {
            out.push(format!("equality variable {v} also occurs in a forward or backward part"));
        } else if ports.len() != 2 || ports[0] == ports[1] {
            out.push(format!("equality variable {v} is not linked to exactly one other port"));
        }
    }
    out
}

pub fn is_quasi_canonical_tile(tile: &Tile) -> bool {
    quasi_canonical_violations(tile).is_empty()
}

/// Quasi-canonical with empty equality parts.
pub fn is_canonical_tile(tile: &Tile) -> bool {
    is_quasi_canonical_tile(tile) && std::iter::once(&tile.input).chain(&tile.outputs).all(|p| p.eq.is_empty())
}

/// Every label is quasi-canonical, arities match, and each edge joins ports
/// with the same fw/bw/eq widths.
pub fn is_quasi_canonical_tree(t: &Tree<Tile>) -> bool {
    fn go(t: &Tree<Tile>) -> bool {
        t.children.len() == t.label.arity()
            && is_quasi_canonical_tile(&t.label)
            && t.children.iter().zip(&t.label.outputs).all(|(c, p)| c.label.input.widths() == p.widths() && go(c))
    }
    go(t)
}

pub fn is_canonical_tree(t: &Tree<Tile>) -> bool {
    is_quasi_canonical_tree(t) && t.labels().iter().all(|(_, l)| is_canonical_tile(l))
}
