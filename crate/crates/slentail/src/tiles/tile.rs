use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::slcore::{Formula, PointsTo, PureAtom, SpatialAtom, Var};
use crate::Error;

/// A port, factorised into its forward, backward and equality parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Port {
    pub fw: Vec<Var>,
    pub bw: Vec<Var>,
    pub eq: Vec<Var>,
}

impl Port {
    pub fn new(fw: Vec<Var>, bw: Vec<Var>, eq: Vec<Var>) -> Self {
        Port { fw, bw, eq }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn len(&self) -> usize {
        self.fw.len() + self.bw.len() + self.eq.len()
    }

    /// The port seen from the other end of its edge.
    pub fn swapped(&self) -> Port {
        Port { fw: self.bw.clone(), bw: self.fw.clone(), eq: self.eq.clone() }
    }

    /// `fw · bw · eq`
    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.fw.iter().chain(&self.bw).chain(&self.eq)
    }

    pub fn widths(&self) -> (usize, usize, usize) {
        (self.fw.len(), self.bw.len(), self.eq.len())
    }

    pub fn map(&self, f: &dyn Fn(&Var) -> Var) -> Port {
        Port {
            fw: self.fw.iter().map(f).collect(),
            bw: self.bw.iter().map(f).collect(),
            eq: self.eq.iter().map(f).collect(),
        }
    }
}

/// A formula with an incoming port and an ordered list of outgoing ports.
///
/// Tiles produced by [`normalize_tile`] use `Var::Local` for every variable
/// that is not a parameter, numbered by first occurrence, so two tiles are
/// the same alphabet symbol exactly when they are equal. In that form a
/// port variable may repeat across ports: that means the port positions are
/// equal, which saves spelling out the equality in the pure part.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Tile {
    pub formula: Formula,
    pub input: Port,
    pub outputs: Vec<Port>,
}

impl Tile {
    pub fn new(formula: Formula, input: Port, outputs: Vec<Port>) -> Self {
        Tile { formula, input, outputs }
    }

    pub fn arity(&self) -> usize {
        self.outputs.len()
    }

    pub fn port_vars(&self) -> BTreeSet<Var> {
        self.input.vars().chain(self.outputs.iter().flat_map(|p| p.vars())).cloned().collect()
    }

    /// Free variables of the formula that are not port variables.
    pub fn parameters(&self) -> BTreeSet<Var> {
        let ports = self.port_vars();
        self.formula.free_vars().into_iter().filter(|v| !v.is_nil() && !ports.contains(v)).collect()
    }

    /// The single points-to of a singleton tile.
    pub fn points_to(&self) -> Option<&PointsTo> {
        let mut it = self.formula.points_tos();
        let first = it.next();
        if it.next().is_some() {
            return None;
        }
        first
    }

    pub fn map_vars(&self, f: &dyn Fn(&Var) -> Var) -> Tile {
        let subst: BTreeMap<Var, Var> = self
            .formula
            .all_vars()
            .into_iter()
            .chain(self.port_vars())
            .map(|v| {
                let w = f(&v);
                (v, w)
            })
            .collect();
        let mut formula = self.formula.substitute(&subst);
        formula.existentials = self.formula.existentials.iter().map(f).collect();
        Tile { formula, input: self.input.map(f), outputs: self.outputs.iter().map(|p| p.map(f)).collect() }
    }

    /// Largest `Local` index used, if any.
    pub fn max_local(&self) -> Option<u32> {
        self.formula
            .all_vars()
            .into_iter()
            .chain(self.port_vars())
            .filter_map(|v| match v {
                Var::Local(i) => Some(i),
                _ => None,
            })
            .max()
    }
}

/// Brings a singleton tile to normal form. Variables in `params`, and
/// `nil`, are kept; every other variable becomes a `Local`. Equality classes
/// of the pure part are collapsed onto one representative: `nil` first, then
/// the least parameter, then a local. `ξ0` is reserved for the allocated
/// cell when it is not a parameter; the remaining locals are numbered by
/// first occurrence in the targets, the incoming port and the outgoing ports.
pub fn normalize_tile(tile: &Tile, params: &BTreeSet<Var>) -> Result<Tile, Error> {
    if !tile.formula.calls.is_empty() {
        return Err(Error::NotSingleton("tile formula contains predicate calls".into()));
    }
    let pt = tile.points_to().ok_or_else(|| Error::NotSingleton(format!("{}", tile.formula)))?;
    let classes = tile.formula.classes();
    let is_param = |v: &Var| v.is_nil() || params.contains(v);
    // Representative of each class root that contains nil or a parameter.
    let mut fixed: BTreeMap<Var, Var> = BTreeMap::new();
    let all: BTreeSet<Var> =
        tile.formula.all_vars().into_iter().chain(tile.port_vars()).chain(std::iter::once(Var::Nil)).collect();
    for v in all.iter().filter(|v| is_param(v)) {
        let root = classes.find(v);
        let better = match fixed.get(&root) {
            None => true,
            Some(cur) => !cur.is_nil() && (v.is_nil() || v < cur),
        };
        if better {
            fixed.insert(root, v.clone());
        }
    }
    let mut locals: BTreeMap<Var, Var> = BTreeMap::new();
    let mut next = 1u32;
    let mut name = |v: &Var, locals: &mut BTreeMap<Var, Var>, alloc: bool| -> Var {
        let root = classes.find(v);
        if let Some(p) = fixed.get(&root) {
            return p.clone();
        }
        if let Some(l) = locals.get(&root) {
            return l.clone();
        }
        let l = if alloc {
            Var::Local(0)
        } else {
            next += 1;
            Var::Local(next - 1)
        };
        locals.insert(root, l.clone());
        l
    };
    let source = name(&pt.source, &mut locals, true);
    let targets: Vec<Var> = pt.targets.iter().map(|v| name(v, &mut locals, false)).collect();
    let mut rename = |p: &Port, locals: &mut BTreeMap<Var, Var>| Port {
        fw: p.fw.iter().map(|v| name(v, locals, false)).collect(),
        bw: p.bw.iter().map(|v| name(v, locals, false)).collect(),
        eq: p.eq.iter().map(|v| name(v, locals, false)).collect(),
    };
    let input = rename(&tile.input, &mut locals);
    let outputs: Vec<Port> = tile.outputs.iter().map(|p| rename(p, &mut locals)).collect();
    let port_vars: BTreeSet<Var> = input.vars().chain(outputs.iter().flat_map(|p| p.vars())).cloned().collect();
    let mut existentials: Vec<Var> = locals.values().filter(|l| !port_vars.contains(l)).cloned().collect();
    existentials.sort();
    // Equalities that survive: between nil/parameters of one class.
    let mut pure: BTreeSet<PureAtom> = BTreeSet::new();
    for v in all.iter().filter(|v| is_param(v)) {
        let rep = &fixed[&classes.find(v)];
        if rep != v {
            pure.insert(PureAtom::new(rep.clone(), v.clone()));
        }
    }
    let formula = Formula {
        existentials,
        spatial: vec![SpatialAtom::PointsTo(PointsTo { source, targets })],
        calls: Vec::new(),
        pure: pure.into_iter().collect(),
    };
    Ok(Tile { formula, input, outputs })
}

fn write_vars(f: &mut fmt::Formatter<'_>, vs: &[Var]) -> fmt::Result {
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_vars(f, &self.fw)?;
        write!(f, ";")?;
        write_vars(f, &self.bw)?;
        write!(f, ";")?;
        write_vars(f, &self.eq)
    }
}

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | in: {}", self.formula, self.input)?;
        for (k, p) in self.outputs.iter().enumerate() {
            write!(f, " | out_{k}: {p}")?;
        }
        Ok(())
    }
}
