use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::Var;

/// Abstract location. `NULL` is the value of `nil` and is never allocated.
pub type Loc = u32;
pub const NULL: Loc = 0;

/// A store and a heap. A heap cell maps selectors `1..=n` to locations,
/// stored as a vector whose index `k` holds selector `k + 1`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct State {
    pub store: BTreeMap<Var, Loc>,
    pub heap: BTreeMap<Loc, Vec<Loc>>,
}

impl State {
    pub fn new() -> Self {
        let mut s = State::default();
        s.store.insert(Var::Nil, NULL);
        s
    }

    pub fn with_store(mut self, v: &str, l: Loc) -> Self {
        self.store.insert(Var::named(v), l);
        self
    }

    pub fn with_cell(mut self, l: Loc, targets: &[Loc]) -> Self {
        self.heap.insert(l, targets.to_vec());
        self
    }

    pub fn lookup(&self, v: &Var) -> Option<Loc> {
        if v.is_nil() {
            return Some(NULL);
        }
        self.store.get(v).copied()
    }

    pub fn cells(&self) -> usize {
        self.heap.len()
    }

    /// Store (non-nil) and heap conditions of a well-formed state.
    pub fn is_well_formed(&self) -> bool {
        self.store.get(&Var::Nil).is_none_or(|l| *l == NULL)
            && !self.heap.contains_key(&NULL)
            && self.heap.values().all(|c| !c.is_empty())
    }

    /// Allocated and referenced locations (`loc(S)`), `NULL` excluded.
    pub fn locations(&self) -> BTreeSet<Loc> {
        let mut out: BTreeSet<Loc> = self.store.values().copied().collect();
        for (l, c) in &self.heap {
            out.insert(*l);
            out.extend(c.iter().copied());
        }
        out.remove(&NULL);
        out
    }

    /// Every edge `(source, selector, target)` with selectors numbered from 1.
    pub fn edges(&self) -> impl Iterator<Item = (Loc, usize, Loc)> + '_ {
        self.heap.iter().flat_map(|(l, c)| c.iter().enumerate().map(move |(k, t)| (*l, k + 1, *t)))
    }

    pub fn max_loc(&self) -> Loc {
        self.locations().into_iter().max().unwrap_or(NULL)
    }

    /// Renames locations through `f`; `NULL` always maps to itself.
    pub fn relabel(&self, f: &dyn Fn(Loc) -> Loc) -> State {
        let g = |l: Loc| if l == NULL { NULL } else { f(l) };
        State {
            store: self.store.iter().map(|(v, l)| (v.clone(), g(*l))).collect(),
            heap: self.heap.iter().map(|(l, c)| (g(*l), c.iter().map(|t| g(*t)).collect())).collect(),
        }
    }

    /// Canonical relabelling: locations numbered in breadth-first order from
    /// the store variables (sorted by name), following selectors in order.
    /// Unreachable cells keep their relative order after the reachable ones.
    pub fn canonical(&self) -> State {
        let mut order: Vec<Loc> = Vec::new();
        let mut seen = BTreeSet::new();
        let mut queue = std::collections::VecDeque::new();
        for l in self.store.values() {
            if *l != NULL && seen.insert(*l) {
                queue.push_back(*l);
            }
        }
        let drain = |queue: &mut std::collections::VecDeque<Loc>, order: &mut Vec<Loc>, seen: &mut BTreeSet<Loc>| {
            while let Some(l) = queue.pop_front() {
                order.push(l);
                if let Some(c) = self.heap.get(&l) {
                    for t in c {
                        if *t != NULL && seen.insert(*t) {
                            queue.push_back(*t);
                        }
                    }
                }
            }
        };
        drain(&mut queue, &mut order, &mut seen);
        for l in self.locations() {
            if seen.insert(l) {
                queue.push_back(l);
                drain(&mut queue, &mut order, &mut seen);
            }
        }
        let index: BTreeMap<Loc, Loc> = order.iter().enumerate().map(|(i, l)| (*l, i as Loc + 1)).collect();
        self.relabel(&|l| index[&l])
    }

    /// Isomorphism up to renaming of non-null locations. Exact when every
    /// location is reachable from the store; otherwise falls back to a search.
    pub fn isomorphic(&self, other: &State) -> bool {
        if self.heap.len() != other.heap.len() || self.store.len() != other.store.len() {
            return false;
        }
        if self.canonical() == other.canonical() {
            return true;
        }
        if self.all_reachable_from_store() && other.all_reachable_from_store() {
            return false;
        }
        let a: Vec<Loc> = self.locations().into_iter().collect();
        let b: Vec<Loc> = other.locations().into_iter().collect();
        if a.len() != b.len() || a.len() > 8 {
            return false;
        }
        let mut perm: Vec<usize> = (0..b.len()).collect();
        loop {
            let map: BTreeMap<Loc, Loc> = a.iter().zip(perm.iter()).map(|(x, i)| (*x, b[*i])).collect();
            if self.relabel(&|l| map[&l]) == *other {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }

    fn all_reachable_from_store(&self) -> bool {
        let mut seen: BTreeSet<Loc> = self.store.values().copied().collect();
        let mut stack: Vec<Loc> = seen.iter().copied().collect();
        while let Some(l) = stack.pop() {
            if let Some(c) = self.heap.get(&l) {
                for t in c {
                    if seen.insert(*t) {
                        stack.push(*t);
                    }
                }
            }
        }
        self.locations().iter().all(|l| seen.contains(l))
    }
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `S1 ⊎ S2`: defined when stores agree on shared variables and heap domains
/// are disjoint.
pub fn disjoint_union(s1: &State, s2: &State) -> Option<State> {
    for (v, l) in &s2.store {
        if let Some(l1) = s1.store.get(v) {
            if l1 != l {
                return None;
            }
        }
    }
    if s2.heap.keys().any(|l| s1.heap.contains_key(l)) {
        return None;
    }
    let mut out = s1.clone();
    out.store.extend(s2.store.iter().map(|(v, l)| (v.clone(), *l)));
    out.heap.extend(s2.heap.iter().map(|(l, c)| (*l, c.clone())));
    Some(out)
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "store {{")?;
        let mut first = true;
        for (v, l) in &self.store {
            if v.is_nil() {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{v}: {}", loc_name(*l))?;
        }
        write!(f, "}} heap {{")?;
        for (i, (l, c)) in self.heap.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> (", loc_name(*l))?;
            for (k, t) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", loc_name(*t))?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn loc_name(l: Loc) -> String {
    if l == NULL {
        "null".to_string()
    } else {
        format!("l{l}")
    }
}
