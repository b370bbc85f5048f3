use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::{Var, VarClasses};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PointsTo {
    pub source: Var,
    pub targets: Vec<Var>,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SpatialAtom {
    Emp,
    PointsTo(PointsTo),
}

/// An equality `lhs = rhs`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PureAtom {
    pub lhs: Var,
    pub rhs: Var,
}

impl PureAtom {
    pub fn new(lhs: Var, rhs: Var) -> Self {
        PureAtom { lhs, rhs }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PredicateCall {
    pub pred: Arc<str>,
    pub args: Vec<Var>,
}

impl PredicateCall {
    pub fn new(pred: &str, args: Vec<Var>) -> Self {
        PredicateCall { pred: Arc::from(pred), args }
    }
}

/// `∃ existentials . spatial * calls ∧ pure`
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Formula {
    pub existentials: Vec<Var>,
    pub spatial: Vec<SpatialAtom>,
    pub calls: Vec<PredicateCall>,
    pub pure: Vec<PureAtom>,
}

impl Formula {
    pub fn emp() -> Self {
        Formula { spatial: vec![SpatialAtom::Emp], ..Default::default() }
    }

    pub fn points_to(source: Var, targets: Vec<Var>) -> Self {
        Formula { spatial: vec![SpatialAtom::PointsTo(PointsTo { source, targets })], ..Default::default() }
    }

    pub fn points_tos(&self) -> impl Iterator<Item = &PointsTo> {
        self.spatial.iter().filter_map(|a| match a {
            SpatialAtom::PointsTo(p) => Some(p),
            SpatialAtom::Emp => None,
        })
    }

    /// True when the spatial part has no points-to atom.
    pub fn head_is_empty(&self) -> bool {
        self.points_tos().next().is_none()
    }

    pub fn allocated(&self) -> BTreeSet<Var> {
        self.points_tos().map(|p| p.source.clone()).collect()
    }

    /// Variables occurring in the spatial part (`FV(Σ)` before quantification).
    pub fn spatial_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for p in self.points_tos() {
            out.insert(p.source.clone());
            out.extend(p.targets.iter().cloned());
        }
        out.remove(&Var::Nil);
        out
    }

    /// Every variable occurring anywhere, bound or not, excluding `nil`.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = self.spatial_vars();
        for c in &self.calls {
            out.extend(c.args.iter().cloned());
        }
        for e in &self.pure {
            out.insert(e.lhs.clone());
            out.insert(e.rhs.clone());
        }
        out.extend(self.existentials.iter().cloned());
        out.remove(&Var::Nil);
        out
    }

    /// Variables occurring in atoms, calls or equalities (nil excluded).
    pub fn used_vars(&self) -> BTreeSet<Var> {
        let mut out = self.spatial_vars();
        for c in &self.calls {
            out.extend(c.args.iter().cloned());
        }
        for e in &self.pure {
            out.insert(e.lhs.clone());
            out.insert(e.rhs.clone());
        }
        out.remove(&Var::Nil);
        out
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = self.all_vars();
        for e in &self.existentials {
            out.remove(e);
        }
        out
    }

    pub fn classes(&self) -> VarClasses {
        VarClasses::from_pairs(self.pure.iter().map(|e| (&e.lhs, &e.rhs)))
    }

    /// Simultaneous substitution on every occurrence, bound ones included.
    pub fn substitute(&self, map: &BTreeMap<Var, Var>) -> Formula {
        let s = |v: &Var| map.get(v).cloned().unwrap_or_else(|| v.clone());
        Formula {
            existentials: self.existentials.iter().map(s).collect(),
            spatial: self
                .spatial
                .iter()
                .map(|a| match a {
                    SpatialAtom::Emp => SpatialAtom::Emp,
                    SpatialAtom::PointsTo(p) => SpatialAtom::PointsTo(PointsTo {
                        source: s(&p.source),
                        targets: p.targets.iter().map(s).collect(),
                    }),
                })
                .collect(),
            calls: self
                .calls
                .iter()
                .map(|c| PredicateCall { pred: c.pred.clone(), args: c.args.iter().map(s).collect() })
                .collect(),
            pure: self.pure.iter().map(|e| PureAtom::new(s(&e.lhs), s(&e.rhs))).collect(),
        }
    }

    /// `φ1 * φ2`, with the existentials of both kept (callers rename apart).
    pub fn star(mut self, other: Formula) -> Formula {
        self.existentials.extend(other.existentials);
        self.spatial.retain(|a| *a != SpatialAtom::Emp);
        self.spatial.extend(other.spatial.into_iter().filter(|a| *a != SpatialAtom::Emp));
        if self.spatial.is_empty() {
            self.spatial.push(SpatialAtom::Emp);
        }
        self.calls.extend(other.calls);
        self.pure.extend(other.pure);
        self
    }
}

impl fmt::Display for PointsTo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> (", self.source)?;
        write_list(f, &self.targets)?;
        write!(f, ")")
    }
}

impl fmt::Display for SpatialAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpatialAtom::Emp => write!(f, "emp"),
            SpatialAtom::PointsTo(p) => write!(f, "{p}"),
        }
    }
}

impl fmt::Display for PredicateCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.pred)?;
        write_list(f, &self.args)?;
        write!(f, ")")
    }
}

impl fmt::Display for PureAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Renders in the `.sid` rule syntax.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.existentials.is_empty() {
            write!(f, "\\E ")?;
            write_list(f, &self.existentials)?;
            write!(f, " . ")?;
        }
        let mut first = true;
        for a in &self.spatial {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            write!(f, "{a}")?;
        }
        for c in &self.calls {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            write!(f, "{c}")?;
        }
        if first {
            write!(f, "emp")?;
        }
        for e in &self.pure {
            write!(f, " & {e}")?;
        }
        Ok(())
    }
}

pub(crate) fn write_list(f: &mut fmt::Formatter<'_>, vs: &[Var]) -> fmt::Result {
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}
