//! Cycle-factors, hamiltonicity and the dominance-ordered normalisation of
//! factors in (contractions of) bipartite tournaments.

use crate::cycle::{Cycle, CycleFactor};
use crate::graph::{bit, count, members, Digraph, VertexSet, MAX_VERTICES};

/// Largest vertex count handed to the subset dynamic program.
pub const DP_LIMIT: usize = 20;

/// Spanning cycle-factor of `d[ground]` via a perfect matching between
/// out-copies and in-copies of the vertices.
pub fn find_cycle_factor(d: &Digraph, ground: VertexSet) -> Option<CycleFactor> {
    if ground == 0 {
        return Some(CycleFactor::default());
    }
    const NONE: usize = usize::MAX;
    let mut succ = [NONE; MAX_VERTICES];
    let mut pred = [NONE; MAX_VERTICES];
    fn augment(
        d: &Digraph,
        ground: VertexSet,
        u: usize,
        seen: &mut VertexSet,
        succ: &mut [usize],
        pred: &mut [usize],
    ) -> bool {
        for v in members(d.out_set(u) & ground) {
            if *seen & bit(v) != 0 {
                continue;
            }
            *seen |= bit(v);
            if pred[v] == usize::MAX || augment(d, ground, pred[v], seen, succ, pred) {
                succ[u] = v;
                pred[v] = u;
                return true;
            }
        }
        false
    }
    for u in members(ground) {
        let mut seen = 0;
        if !augment(d, ground, u, &mut seen, &mut succ, &mut pred) {
            return None;
        }
    }
    Some(CycleFactor::from_successors(&succ, ground))
}

/// Hamiltonian cycle of `d[subset]` by subset dynamic programming.
///
/// Panics when `subset` has more than [`DP_LIMIT`] vertices.
pub fn hamiltonian_dp(d: &Digraph, subset: VertexSet) -> Option<Cycle> {
    let vs: Vec<usize> = members(subset).collect();
    let n = vs.len();
    assert!(n <= DP_LIMIT, "subset DP limited to {DP_LIMIT} vertices, got {n}");
    if n < 2 {
        return None;
    }
    // local adjacency
    let adj: Vec<u32> = vs
        .iter()
        .map(|&u| {
            vs.iter()
                .enumerate()
                .filter(|&(_, &v)| d.has_arc(u, v))
                .fold(0u32, |m, (j, _)| m | (1 << j))
        })
        .collect();
    let size = 1usize << n;
    let mut ends = vec![0u32; size];
    ends[1] = 1;
    for mask in 1..size {
        if mask & 1 == 0 {
            continue;
        }
        let e = ends[mask];
        if e == 0 {
            continue;
        }
        let mut bits = e;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let mut nxt = adj[v] & !(mask as u32);
            while nxt != 0 {
                let w = nxt.trailing_zeros() as usize;
                nxt &= nxt - 1;
                ends[mask | (1 << w)] |= 1 << w;
            }
        }
    }
    let fullm = size - 1;
    let last = (0..n).find(|&v| ends[fullm] & (1 << v) != 0 && adj[v] & 1 != 0 && v != 0)?;
    let mut path = vec![last];
    let mut mask = fullm;
    let mut cur = last;
    while cur != 0 {
        let prev_mask = mask & !(1 << cur);
        let prev = (0..n)
            .find(|&u| ends[prev_mask] & (1 << u) != 0 && adj[u] & (1 << cur) != 0)
            .expect("DP table is consistent");
        path.push(prev);
        mask = prev_mask;
        cur = prev;
    }
    path.reverse();
    Some(Cycle::new(path.into_iter().map(|i| vs[i]).collect()))
}

/// Hamiltonian cycle of `d[subset]` by pruned depth-first search.
pub fn hamiltonian_search(d: &Digraph, subset: VertexSet) -> Option<Cycle> {
    let start = members(subset).next()?;
    if count(subset) < 2 {
        return None;
    }
    if !d.is_strong_on(subset) {
        return None;
    }
    let mut path = vec![start];
    fn dfs(d: &Digraph, subset: VertexSet, start: usize, path: &mut Vec<usize>, visited: VertexSet) -> bool {
        let end = *path.last().unwrap();
        let left = subset & !visited;
        if left == 0 {
            return d.has_arc(end, start);
        }
        // every unvisited vertex still needs an entry and an exit
        for v in members(left) {
            if d.in_set(v) & (left | bit(end)) == 0 || d.out_set(v) & (left | bit(start)) == 0 {
                return false;
            }
        }
        let mut cand: Vec<usize> = members(d.out_set(end) & left).collect();
        cand.sort_by_key(|&v| count(d.out_set(v) & left));
        for v in cand {
            path.push(v);
            if dfs(d, subset, start, path, visited | bit(v)) {
                return true;
            }
            path.pop();
        }
        false
    }
    if dfs(d, subset, start, &mut path, bit(start)) {
        Some(Cycle::new(path))
    } else {
        None
    }
}

/// Exact hamiltonicity: subset DP up to [`DP_LIMIT`] vertices, search beyond.
pub fn hamiltonian_cycle(d: &Digraph, subset: VertexSet) -> Option<Cycle> {
    if count(subset) <= DP_LIMIT {
        hamiltonian_dp(d, subset)
    } else {
        hamiltonian_search(d, subset)
    }
}

/// Splices `c2` into `c1` through arcs `x -> u` and `pred(u) -> succ(x)`.
pub fn splice_pair(d: &Digraph, c1: &Cycle, c2: &Cycle) -> Option<Cycle> {
    for (a, b) in [(c1, c2), (c2, c1)] {
        for &x in a.vertices() {
            let xs = a.succ(x);
            for u in members(d.out_set(x) & b.vertex_set()) {
                if d.has_arc(b.pred(u), xs) {
                    let mut v = b.rotated_to(u);
                    v.extend(a.rotated_to(xs));
                    return Some(Cycle::new(v));
                }
            }
        }
    }
    None
}

/// One cycle on `V(c1) ∪ V(c2)`, or `None`.
///
/// Tries the splice scan, then exact hamiltonicity of the union.
pub fn merge_pair(d: &Digraph, c1: &Cycle, c2: &Cycle) -> Option<Cycle> {
    let (s1, s2) = (c1.vertex_set(), c2.vertex_set());
    if d.arcs_between(s1, s2) == 0 || d.arcs_between(s2, s1) == 0 {
        return None;
    }
    splice_pair(d, c1, c2).or_else(|| hamiltonian_cycle(d, s1 | s2))
}

/// Either a hamiltonian cycle of the ground set or a factor with no arc
/// from a later cycle to an earlier one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HmOutcome {
    Hamiltonian(Cycle),
    Ordered(CycleFactor),
}

impl HmOutcome {
    pub fn is_hamiltonian(&self) -> bool {
        matches!(self, HmOutcome::Hamiltonian(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HmError {
    #[error("factor does not span the ground set")]
    NotSpanning,
    #[error("strongly connected union of {0} cycles has no hamiltonian cycle")]
    MergeFailed(usize),
}

/// Checks `e(C_j, C_i) = 0` for all `i < j`.
pub fn is_dominance_ordered(d: &Digraph, f: &CycleFactor) -> bool {
    let sets: Vec<VertexSet> = f.cycles.iter().map(Cycle::vertex_set).collect();
    (0..sets.len()).all(|i| (i + 1..sets.len()).all(|j| d.arcs_between(sets[j], sets[i]) == 0))
}

/// Repeatedly merges cycles that lie in a common strong component of the
/// cycle-level "has an arc to" relation until either one cycle remains or
/// the cycles are totally ordered by dominance.
pub fn hm_normalize(d: &Digraph, ground: VertexSet, f: &CycleFactor) -> Result<HmOutcome, HmError> {
    if f.validate(d, ground, 2).is_err() {
        return Err(HmError::NotSpanning);
    }
    let mut cycles = f.cycles.clone();
    loop {
        if cycles.len() == 1 {
            return Ok(HmOutcome::Hamiltonian(cycles.pop().unwrap()));
        }
        let sets: Vec<VertexSet> = cycles.iter().map(Cycle::vertex_set).collect();
        let m = cycles.len();
        let q = Digraph::from_arcs(
            m,
            (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|&(i, j)| {
                i != j && d.arcs_between(sets[i], sets[j]) > 0
            }),
        );
        let comps = crate::graph::strong_components(&q, crate::graph::full(m), false);
        let Some(group) = comps.sets.iter().copied().find(|&c| count(c) > 1) else {
            let ordered: Vec<Cycle> = comps
                .sets
                .iter()
                .map(|&c| cycles[c.trailing_zeros() as usize].clone())
                .collect();
            let out = CycleFactor::new(ordered);
            debug_assert!(is_dominance_ordered(d, &out));
            return Ok(HmOutcome::Ordered(out));
        };
        let idx: Vec<usize> = members(group).collect();
        // prefer a pairwise splice inside the group
        let mut merged = None;
        'pairs: for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                if d.arcs_between(sets[i], sets[j]) > 0 && d.arcs_between(sets[j], sets[i]) > 0 {
                    if let Some(c) = splice_pair(d, &cycles[i], &cycles[j]) {
                        merged = Some((vec![i, j], c));
                        break 'pairs;
                    }
                }
            }
        }
        let (used, c) = match merged {
            Some(x) => x,
            None => {
                let union = idx.iter().fold(0, |acc, &i| acc | sets[i]);
                let c = hamiltonian_cycle(d, union).ok_or(HmError::MergeFailed(idx.len()))?;
                (idx, c)
            }
        };
        let mut next: Vec<Cycle> = cycles
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !used.contains(i))
            .map(|(_, c)| c)
            .collect();
        next.push(c);
        cycles = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::full;

    #[test]
    fn cycle_digraph_factor_is_itself() {
        let d = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        let f = find_cycle_factor(&d, full(4)).unwrap();
        assert_eq!(f.cycles, vec![Cycle::new(vec![0, 1, 2, 3])]);
    }

    #[test]
    fn acyclic_has_no_factor() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 2), (0, 2)]);
        assert!(find_cycle_factor(&d, full(3)).is_none());
        assert!(hamiltonian_dp(&d, full(3)).is_none());
    }

    #[test]
    fn single_cycle_is_hamiltonian_outcome() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]);
        let f = CycleFactor::new(vec![Cycle::new(vec![0, 1, 2])]);
        assert_eq!(hm_normalize(&d, full(3), &f).unwrap(), HmOutcome::Hamiltonian(Cycle::new(vec![0, 1, 2])));
    }

    #[test]
    fn one_way_pair_is_ordered() {
        // digons {0,1} and {2,3}, arcs only from the first to the second
        let d = Digraph::from_arcs(4, [(0, 1), (1, 0), (2, 3), (3, 2), (0, 2), (1, 3)]);
        let f = CycleFactor::new(vec![Cycle::new(vec![2, 3]), Cycle::new(vec![0, 1])]);
        match hm_normalize(&d, full(4), &f).unwrap() {
            HmOutcome::Ordered(o) => {
                assert_eq!(o.cycles, vec![Cycle::new(vec![0, 1]), Cycle::new(vec![2, 3])]);
            }
            other => panic!("{other:?}"),
        }
        assert!(merge_pair(&d, &Cycle::new(vec![0, 1]), &Cycle::new(vec![2, 3])).is_none());
    }

    #[test]
    fn two_digons_splice() {
        // u1=0,u2=1 / v1=2,v2=3 with 0->2 and 3->1
        let d = Digraph::from_arcs(4, [(0, 1), (1, 0), (2, 3), (3, 2), (0, 2), (3, 1)]);
        let c = merge_pair(&d, &Cycle::new(vec![0, 1]), &Cycle::new(vec![2, 3])).unwrap();
        assert_eq!(c, Cycle::new(vec![0, 2, 3, 1]));
        c.validate(&d, 2).unwrap();
    }

    #[test]
    fn search_agrees_with_dp_on_small_strong_digraph() {
        let d = Digraph::from_arcs(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (2, 0), (4, 1)]);
        let a = hamiltonian_dp(&d, full(5)).unwrap();
        let b = hamiltonian_search(&d, full(5)).unwrap();
        a.validate(&d, 2).unwrap();
        b.validate(&d, 2).unwrap();
    }
}
