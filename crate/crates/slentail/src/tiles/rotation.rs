use std::collections::{BTreeMap, BTreeSet};

use super::{project_tile, Port, Tile};
use crate::slcore::{for_each_rotation, Pos, Tree, Var};
use crate::Error;

/// Default node bound of the rotation oracle.
pub const ROTATION_BOUND: usize = 8;

/// Partial substitution built while aligning two tiles. Parameters map to
/// themselves only.
#[derive(Default)]
struct Subst(BTreeMap<Var, Var>);

impl Subst {
    fn bind(&mut self, a: &Var, b: &Var) -> bool {
        if !a.is_local() {
            return a == b;
        }
        match self.0.get(a) {
            Some(x) => x == b,
            None => {
                self.0.insert(a.clone(), b.clone());
                true
            }
        }
    }

    fn bind_all(&mut self, a: &[Var], b: &[Var]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| self.bind(x, y))
    }

    fn apply(&self, v: &Var) -> Option<Var> {
        if v.is_local() {
            self.0.get(v).cloned()
        } else {
            Some(v.clone())
        }
    }
}

/// Where edge `p -> p.i` of the first tree lands below `r(p)` in the second:
/// `Some(j)` for child `j`, `None` for the parent.
fn direction(rp: &[u32], rc: &[u32]) -> Option<usize> {
    if rc.len() == rp.len() + 1 && rc.starts_with(rp) {
        Some(*rc.last().unwrap() as usize)
    } else {
        None
    }
}

fn counterpart(u: &Tile, j: Option<usize>) -> Port {
    match j {
        Some(j) => u.outputs[j].clone(),
        None => u.input.swapped(),
    }
}

fn canonical_node(t: &Tile, u: &Tile, children: &[(usize, Option<usize>)]) -> bool {
    let (Some(pt), Some(pu)) = (t.points_to(), u.points_to()) else {
        return t == u;
    };
    let mut s = Subst::default();
    if !s.bind(&pt.source, &pu.source) || !s.bind_all(&pt.targets, &pu.targets) {
        return false;
    }
    for &(i, j) in children {
        let want = counterpart(u, j);
        let have = &t.outputs[i];
        if !s.bind_all(&have.fw, &want.fw) || !s.bind_all(&have.bw, &want.bw) {
            return false;
        }
    }
    let exists: Option<BTreeSet<Var>> = t.formula.existentials.iter().map(|v| s.apply(v)).collect();
    let pure_t: Option<BTreeSet<(Var, Var)>> =
        t.formula.pure.iter().map(|e| Some((s.apply(&e.lhs)?, s.apply(&e.rhs)?))).collect();
    let pure_u: BTreeSet<(Var, Var)> = u.formula.pure.iter().map(|e| (e.lhs.clone(), e.rhs.clone())).collect();
    exists == Some(u.formula.existentials.iter().cloned().collect()) && pure_t == Some(pure_u)
}

fn eq_node(t: &Tile, u: &Tile, children: &[(usize, Option<usize>)]) -> bool {
    let mut s = Subst::default();
    children.iter().all(|&(i, j)| s.bind_all(&t.outputs[i].eq, &counterpart(u, j).eq))
}

/// Looks for a bijection `r` between the domains under which `u` is a
/// quasi-canonical rotation of `t`: the canonical projections rotate into
/// each other node by node, ports swapping their forward and backward parts
/// on edges whose direction flips, and equality parts follow along.
pub fn rotation_oracle(t: &Tree<Tile>, u: &Tree<Tile>, bound: usize) -> Result<Option<BTreeMap<Pos, Pos>>, Error> {
    let d1 = t.positions();
    let d2 = u.positions();
    if d1.len() > bound || d2.len() > bound {
        return Err(Error::BoundExceeded(format!("rotation oracle limited to {bound} nodes")));
    }
    let tiles1: Vec<&Tile> = d1.iter().map(|p| &t.get(p).unwrap().label).collect();
    let tiles2: Vec<&Tile> = d2.iter().map(|p| &u.get(p).unwrap().label).collect();
    let proj1: Vec<Tile> = tiles1.iter().map(|x| project_tile(x)).collect();
    let proj2: Vec<Tile> = tiles2.iter().map(|x| project_tile(x)).collect();
    let index1: BTreeMap<&Pos, usize> = d1.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut found = None;
    for_each_rotation(&d1, &d2, &mut |img| {
        let ok = d1.iter().enumerate().all(|(a, p)| {
            let rp = &d2[img[a]];
            let arity = tiles1[a].arity();
            let children: Vec<(usize, Option<usize>)> = (0..arity)
                .map(|i| {
                    let mut c = p.clone();
                    c.push(i as u32);
                    (i, direction(rp, &d2[img[index1[&c]]]))
                })
                .collect();
            let b = img[a];
            let ports_exist = children.iter().all(|(_, j)| j.is_none_or(|j| j < tiles2[b].arity()));
            ports_exist && canonical_node(&proj1[a], &proj2[b], &children) && eq_node(tiles1[a], tiles2[b], &children)
        });
        if ok {
            found = Some(d1.iter().cloned().zip(img.iter().map(|i| d2[*i].clone())).collect());
        }
        ok
    });
    Ok(found)
}
