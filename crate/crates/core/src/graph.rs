//! Dense bitset digraphs on at most 64 vertices.
//!
//! Every vertex set is a `u64` mask, so degree counts, `e(A, B)` and
//! anti-neighbourhoods are population counts and mask complements.

/// A set of vertex ids packed into one word.
pub type VertexSet = u64;

pub const MAX_VERTICES: usize = 64;

#[inline]
pub fn bit(v: usize) -> VertexSet {
    1u64 << v
}

/// Mask with the lowest `n` bits set.
#[inline]
pub fn full(n: usize) -> VertexSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn set_of(vs: &[usize]) -> VertexSet {
    vs.iter().fold(0, |m, &v| m | bit(v))
}

/// Ascending vertex ids of a mask.
pub fn members(mut m: VertexSet) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

#[inline]
pub fn count(m: VertexSet) -> usize {
    m.count_ones() as usize
}

/// Loopless digraph with at most one arc per ordered pair.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<VertexSet>,
    inn: Vec<VertexSet>,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut m = f.debug_map();
        for u in 0..self.n {
            m.entry(&u, &members(self.out[u]).collect::<Vec<_>>());
        }
        m.finish()
    }
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "digraph on {n} vertices exceeds the 64-vertex bitset limit");
        Digraph {
            n,
            out: vec![0; n],
            inn: vec![0; n],
        }
    }

    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut d = Digraph::new(n);
        for (u, v) in arcs {
            d.add_arc(u, v);
        }
        d
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        full(self.n)
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loop {u}->{u}");
        self.out[u] |= bit(v);
        self.inn[v] |= bit(u);
    }

    pub fn remove_arc(&mut self, u: usize, v: usize) {
        self.out[u] &= !bit(v);
        self.inn[v] &= !bit(u);
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u] & bit(v) != 0
    }

    /// No arc `u -> v` (and `u != v`).
    #[inline]
    pub fn has_anti_arc(&self, u: usize, v: usize) -> bool {
        u != v && !self.has_arc(u, v)
    }

    #[inline]
    pub fn out_set(&self, u: usize) -> VertexSet {
        self.out[u]
    }

    #[inline]
    pub fn in_set(&self, u: usize) -> VertexSet {
        self.inn[u]
    }

    /// Anti-out-neighbours of `u` inside `within`.
    #[inline]
    pub fn anti_out_set(&self, u: usize, within: VertexSet) -> VertexSet {
        within & !self.out[u] & !bit(u)
    }

    #[inline]
    pub fn anti_in_set(&self, u: usize, within: VertexSet) -> VertexSet {
        within & !self.inn[u] & !bit(u)
    }

    pub fn out_degree(&self, u: usize) -> usize {
        count(self.out[u])
    }

    pub fn in_degree(&self, u: usize) -> usize {
        count(self.inn[u])
    }

    /// Number of arcs from `a` to `b`.
    pub fn arcs_between(&self, a: VertexSet, b: VertexSet) -> usize {
        members(a).map(|u| count(self.out[u] & b)).sum()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|&m| count(m)).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| members(self.out[u]).map(move |v| (u, v)))
    }

    /// `a` dominates `b`: every arc from `a` to `b` is present.
    pub fn dominates(&self, a: VertexSet, b: VertexSet) -> bool {
        members(a).all(|u| self.out[u] & b & !bit(u) == b & !bit(u))
    }

    /// No arc from `a` to `b`.
    pub fn anti_dominates(&self, a: VertexSet, b: VertexSet) -> bool {
        members(a).all(|u| self.out[u] & b == 0)
    }

    /// Induced subdigraph on `subset`, keeping the original ids.
    pub fn induced(&self, subset: VertexSet) -> Digraph {
        let mut d = Digraph::new(self.n);
        for u in members(subset) {
            d.out[u] = self.out[u] & subset;
            d.inn[u] = self.inn[u] & subset;
        }
        d
    }

    /// Complement of the subdigraph induced by `subset` (other vertices isolated).
    pub fn complement_on(&self, subset: VertexSet) -> Digraph {
        let mut d = Digraph::new(self.n);
        for u in members(subset) {
            d.out[u] = subset & !self.out[u] & !bit(u);
            d.inn[u] = subset & !self.inn[u] & !bit(u);
        }
        d
    }

    pub fn reversed(&self) -> Digraph {
        Digraph {
            n: self.n,
            out: self.inn.clone(),
            inn: self.out.clone(),
        }
    }

    /// Relabel so that old vertex `order[i]` becomes `i`.
    pub fn relabeled(&self, order: &[usize]) -> Digraph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut d = Digraph::new(order.len());
        for (i, &u) in order.iter().enumerate() {
            for v in members(self.out[u]) {
                if pos[v] != usize::MAX {
                    d.add_arc(i, pos[v]);
                }
            }
        }
        d
    }

    /// Vertices reachable from `from` inside `subset` (including `from`).
    pub fn reach(&self, from: usize, subset: VertexSet) -> VertexSet {
        let mut seen = bit(from);
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for u in members(frontier) {
                next |= self.out[u] & subset;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    }

    /// Vertices reachable from `from` in the complement of `self[subset]`.
    pub fn anti_reach(&self, from: usize, subset: VertexSet) -> VertexSet {
        let mut seen = bit(from);
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for u in members(frontier) {
                next |= self.anti_out_set(u, subset);
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    }

    pub fn is_strong_on(&self, subset: VertexSet) -> bool {
        match members(subset).next() {
            None => true,
            Some(v) => {
                self.reach(v, subset) == subset && self.reversed().reach(v, subset) == subset
            }
        }
    }
}

/// Strong components of `d[subset]`, or of its complement when `complemented`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    /// Components in a topological order of the condensation.
    pub sets: Vec<VertexSet>,
    graph: Digraph,
}

impl Components {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.sets
            .iter()
            .position(|&s| s & bit(v) != 0)
            .expect("vertex outside the component universe")
    }

    fn incoming(&self, i: usize) -> bool {
        let c = self.sets[i];
        let rest: VertexSet = self.sets.iter().fold(0, |m, s| m | s) & !c;
        members(rest).any(|u| self.graph.out_set(u) & c != 0)
    }

    fn outgoing(&self, i: usize) -> bool {
        let c = self.sets[i];
        let rest: VertexSet = self.sets.iter().fold(0, |m, s| m | s) & !c;
        members(c).any(|u| self.graph.out_set(u) & rest != 0)
    }

    /// Indices of components with no incoming condensation arc.
    pub fn initial(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.incoming(i)).collect()
    }

    /// Indices of components with no outgoing condensation arc.
    pub fn terminal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.outgoing(i)).collect()
    }

    /// The digraph the components were computed on (complement already applied).
    pub fn graph(&self) -> &Digraph {
        &self.graph
    }
}

pub fn strong_components(d: &Digraph, subset: VertexSet, complemented: bool) -> Components {
    let g = if complemented {
        d.complement_on(subset)
    } else {
        d.induced(subset)
    };
    let rev = g.reversed();
    let mut left = subset;
    let mut comps: Vec<(usize, VertexSet)> = Vec::new();
    while left != 0 {
        let v = left.trailing_zeros() as usize;
        let fwd = g.reach(v, subset);
        let comp = fwd & rev.reach(v, subset);
        comps.push((count(fwd), comp));
        left &= !comp;
    }
    // X reaches Y (X != Y) implies reach(X) strictly contains reach(Y).
    comps.sort_by(|a, b| b.0.cmp(&a.0).then((a.1.trailing_zeros()).cmp(&b.1.trailing_zeros())));
    Components {
        sets: comps.into_iter().map(|(_, c)| c).collect(),
        graph: g,
    }
}

/// A path of anti-arcs of `d[subset]` from `from` to `to`, shortest first.
pub fn find_anti_path(d: &Digraph, subset: VertexSet, from: usize, to: usize) -> Option<Vec<usize>> {
    debug_assert!(subset & bit(from) != 0 && subset & bit(to) != 0);
    if from == to {
        return Some(vec![from]);
    }
    let mut parent = [usize::MAX; MAX_VERTICES];
    let mut seen = bit(from);
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for v in members(d.anti_out_set(u, subset) & !seen) {
            seen |= bit(v);
            parent[v] = u;
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                debug_assert!(path.windows(2).all(|w| d.has_anti_arc(w[0], w[1])));
                return Some(path);
            }
            queue.push_back(v);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_is_one_component() {
        let d = Digraph::new(3);
        let c = strong_components(&d, bit(1), false);
        assert_eq!(c.sets, vec![bit(1)]);
        assert_eq!(c.initial(), vec![0]);
        assert_eq!(c.terminal(), vec![0]);
    }

    #[test]
    fn complement_of_complete_bipartite_splits_into_classes() {
        // classes {0,1} and {2,3}, all arcs both ways between them
        let mut d = Digraph::new(4);
        for a in 0..2 {
            for b in 2..4 {
                d.add_arc(a, b);
                d.add_arc(b, a);
            }
        }
        let c = strong_components(&d, full(4), true);
        let mut sets = c.sets.clone();
        sets.sort();
        assert_eq!(sets, vec![0b0011, 0b1100]);
        assert_eq!(c.initial().len(), 2);
        assert_eq!(c.terminal().len(), 2);
    }

    #[test]
    fn condensation_order_is_topological() {
        // 0 -> 1 <-> 2 -> 3
        let d = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 1), (2, 3)]);
        let c = strong_components(&d, full(4), false);
        assert_eq!(c.sets, vec![bit(0), bit(1) | bit(2), bit(3)]);
        assert_eq!(c.initial(), vec![0]);
        assert_eq!(c.terminal(), vec![2]);
    }

    #[test]
    fn anti_path_trivial_and_missing() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 0), (0, 2), (2, 0)]);
        assert_eq!(find_anti_path(&d, full(3), 2, 2), Some(vec![2]));
        assert_eq!(find_anti_path(&d, full(3), 0, 1), None);
        let p = find_anti_path(&d, full(3), 1, 2).unwrap();
        assert_eq!(p, vec![1, 2]);
    }

    #[test]
    fn dominance_helpers() {
        let d = Digraph::from_arcs(4, [(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert!(d.dominates(0b0011, 0b1100));
        assert!(d.anti_dominates(0b1100, 0b0011));
        assert_eq!(d.arcs_between(0b0011, 0b1100), 4);
    }
}
