//! `p = 2, 3` by exhaustive search over short cycles.

use crate::cycle::Cycle;
use crate::factor::{find_cycle_factor, hm_normalize, HmOutcome};
use crate::graph::{bit, members, Digraph, VertexSet};
use crate::tournament::RegularBipartiteTournament;

/// A `2p`-cycle whose complement is hamiltonian, with that hamiltonian cycle.
///
/// Cycles are tried smallest start vertex first, so the result is
/// deterministic. `None` means no such factor exists.
pub fn base_case(d: &RegularBipartiteTournament, p: usize) -> Option<(Cycle, Cycle)> {
    let g = d.digraph();
    let all = g.vertices();
    let len = 2 * p;
    let mut found = None;
    for s in members(all) {
        let allowed = all & (u64::MAX << s) & !bit(s);
        let mut path = vec![s];
        dfs(g, s, allowed, len, &mut path, &mut |cycle| {
            let rest = all & !cycle.iter().fold(0, |m, &v| m | bit(v));
            match complement_cycle(g, rest) {
                Some(h) => {
                    found = Some((Cycle::new(cycle.to_vec()), h));
                    true
                }
                None => false,
            }
        });
        if found.is_some() {
            break;
        }
    }
    found
}

/// Hamiltonian cycle of `g[rest]`, when one exists.
fn complement_cycle(g: &Digraph, rest: VertexSet) -> Option<Cycle> {
    if !g.is_strong_on(rest) {
        return None;
    }
    let f = find_cycle_factor(g, rest)?;
    match hm_normalize(g, rest, &f).ok()? {
        HmOutcome::Hamiltonian(h) => Some(h),
        HmOutcome::Ordered(_) => None,
    }
}

/// Extends `path` to cycles of length `len` through `path[0]`; stops when
/// `visit` returns true.
fn dfs(g: &Digraph, s: usize, allowed: VertexSet, len: usize, path: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    let last = *path.last().expect("path starts at s");
    if path.len() == len {
        return g.has_arc(last, s) && visit(path);
    }
    let used = path.iter().fold(0, |m, &v| m | bit(v));
    for v in members(g.out_set(last) & allowed & !used) {
        path.push(v);
        if dfs(g, s, allowed, len, path, visit) {
            return true;
        }
        path.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tournament::{make_f4k, random_regular};

    #[test]
    fn f12_has_no_six_cycle_factor() {
        assert!(base_case(&make_f4k(3).unwrap(), 3).is_none());
    }

    #[test]
    fn f8_splits_into_two_four_cycles() {
        let (a, b) = base_case(&make_f4k(2).unwrap(), 2).unwrap();
        assert_eq!((a.len(), b.len()), (4, 4));
    }

    #[test]
    fn random_instances_have_base_factors() {
        for seed in 0..10 {
            let d = random_regular(4, seed);
            for p in [2, 3] {
                let (a, b) = base_case(&d, p).unwrap();
                a.validate(d.digraph(), 4).unwrap();
                b.validate(d.digraph(), 4).unwrap();
                assert_eq!(a.len(), 2 * p);
                assert_eq!(a.vertex_set() | b.vertex_set(), d.digraph().vertices());
            }
        }
    }
}
