use std::collections::BTreeMap;

use super::Var;

/// Union-find over variables, used for `=_Π` classes.
#[derive(Clone, Debug, Default)]
pub struct VarClasses {
    parent: BTreeMap<Var, Var>,
}

impl VarClasses {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a Var, &'a Var)>) -> Self {
        let mut uf = Self::new();
        for (a, b) in pairs {
            uf.union(a, b);
        }
        uf
    }

    pub fn find(&self, v: &Var) -> Var {
        let mut cur = v.clone();
        while let Some(p) = self.parent.get(&cur) {
            if *p == cur {
                break;
            }
            cur = p.clone();
        }
        cur
    }

    pub fn union(&mut self, a: &Var, b: &Var) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // keep the smaller root so results are deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent.insert(hi, lo.clone());
            self.parent.entry(lo.clone()).or_insert(lo);
        }
    }

    pub fn same(&self, a: &Var, b: &Var) -> bool {
        a == b || self.find(a) == self.find(b)
    }

    /// All members of the class of `v` that this structure has seen, plus `v`.
    pub fn class_of(&self, v: &Var) -> Vec<Var> {
        let root = self.find(v);
        let mut out: Vec<Var> = self.parent.keys().filter(|k| self.find(k) == root).cloned().collect();
        if !out.contains(v) {
            out.push(v.clone());
        }
        out.sort();
        out
    }
}
