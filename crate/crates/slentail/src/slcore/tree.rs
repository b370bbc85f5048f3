use std::collections::BTreeMap;

/// A tree position: a sequence of child indices, ordered lexicographically.
pub type Pos = Vec<u32>;

pub fn pos_string(p: &[u32]) -> String {
    if p.is_empty() {
        "ε".to_string()
    } else {
        p.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// A finite ordered tree with labelled nodes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Tree<T> {
    pub label: T,
    pub children: Vec<Tree<T>>,
}

impl<T> Tree<T> {
    pub fn leaf(label: T) -> Self {
        Tree { label, children: Vec::new() }
    }

    pub fn node(label: T, children: Vec<Tree<T>>) -> Self {
        Tree { label, children }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    /// Number of levels: a single node has height 1.
    pub fn height(&self) -> usize {
        1 + self.children.iter().map(|c| c.height()).max().unwrap_or(0)
    }

    /// Positions in preorder.
    pub fn positions(&self) -> Vec<Pos> {
        let mut out = Vec::new();
        self.walk(&mut Vec::new(), &mut |p, _| out.push(p.to_vec()));
        out
    }

    pub fn walk<'a>(&'a self, prefix: &mut Pos, f: &mut dyn FnMut(&[u32], &'a Tree<T>)) {
        f(prefix, self);
        for (i, c) in self.children.iter().enumerate() {
            prefix.push(i as u32);
            c.walk(prefix, f);
            prefix.pop();
        }
    }

    pub fn get(&self, p: &[u32]) -> Option<&Tree<T>> {
        match p.split_first() {
            None => Some(self),
            Some((d, rest)) => self.children.get(*d as usize)?.get(rest),
        }
    }

    pub fn map<U>(&self, f: &dyn Fn(&T) -> U) -> Tree<U> {
        Tree { label: f(&self.label), children: self.children.iter().map(|c| c.map(f)).collect() }
    }

    /// Position to label listing in preorder.
    pub fn labels(&self) -> Vec<(Pos, &T)> {
        let mut out = Vec::new();
        self.walk(&mut Vec::new(), &mut |p, t| out.push((p.to_vec(), &t.label)));
        out
    }
}

fn adjacent(a: &[u32], b: &[u32]) -> bool {
    (a.len() + 1 == b.len() && b.starts_with(a)) || (b.len() + 1 == a.len() && a.starts_with(b))
}

/// Calls `visit` with every rotation `r : d1 → d2`, given as the image of
/// each element of `d1` (by index). `visit` returns true to stop early.
/// Both domains must be prefix-closed.
pub fn for_each_rotation(d1: &[Pos], d2: &[Pos], visit: &mut dyn FnMut(&[usize]) -> bool) {
    if d1.len() != d2.len() || d1.is_empty() {
        return;
    }
    // parents come before children once sorted by length
    let mut order: Vec<usize> = (0..d1.len()).collect();
    order.sort_by_key(|i| (d1[*i].len(), d1[*i].clone()));
    let index1: BTreeMap<&[u32], usize> = d1.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let neigh2: Vec<Vec<usize>> =
        (0..d2.len()).map(|i| (0..d2.len()).filter(|j| adjacent(&d2[i], &d2[*j])).collect()).collect();
    let mut image = vec![usize::MAX; d1.len()];
    let mut used = vec![false; d2.len()];
    extend(0, &order, d1, &index1, &neigh2, &mut image, &mut used, visit);
}

#[allow(clippy::too_many_arguments)]
fn extend(
    k: usize,
    order: &[usize],
    d1: &[Pos],
    index1: &BTreeMap<&[u32], usize>,
    neigh2: &[Vec<usize>],
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if k == order.len() {
        return visit(image);
    }
    let node = order[k];
    let p = &d1[node];
    let candidates: Vec<usize> = if p.is_empty() {
        (0..used.len()).collect()
    } else {
        let parent = index1[&p[..p.len() - 1]];
        neigh2[image[parent]].clone()
    };
    for c in candidates {
        if used[c] {
            continue;
        }
        used[c] = true;
        image[node] = c;
        if extend(k + 1, order, d1, index1, neigh2, image, used, visit) {
            return true;
        }
        used[c] = false;
        image[node] = usize::MAX;
    }
    false
}

/// Some rotation between the two domains, if one exists.
pub fn find_rotation(d1: &[Pos], d2: &[Pos]) -> Option<BTreeMap<Pos, Pos>> {
    let mut found = None;
    for_each_rotation(d1, d2, &mut |img| {
        found = Some(d1.iter().cloned().zip(img.iter().map(|i| d2[*i].clone())).collect());
        true
    });
    found
}

/// All ordered tree shapes with exactly `n` nodes, as position sets.
pub fn tree_shapes(n: usize) -> Vec<Vec<Pos>> {
    fn forests(n: usize) -> Vec<Vec<Tree<()>>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 1..=n {
            for head in shapes(first) {
                for tail in forests(n - first) {
                    let mut f = vec![head.clone()];
                    f.extend(tail);
                    out.push(f);
                }
            }
        }
        out
    }
    fn shapes(n: usize) -> Vec<Tree<()>> {
        forests(n - 1).into_iter().map(|cs| Tree::node((), cs)).collect()
    }
    if n == 0 {
        return Vec::new();
    }
    shapes(n).iter().map(|t| t.positions()).collect()
}
