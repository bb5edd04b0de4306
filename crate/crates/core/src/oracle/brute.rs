use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::tournament::RegularBipartiteTournament;

/// Exact mode is limited to `4k <= 24`.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 24;

/// Hamiltonian cycle of `d[subset]` by dynamic programming over subsets of
/// `subset`, as a vertex list starting at the smallest vertex. Exponential in
/// `|subset|`; meant for at most about 20 vertices.
pub fn hamiltonian_subset_dp(d: &Digraph, subset: u64) -> Option<Vec<usize>> {
    let verts: Vec<usize> = (0..64).filter(|&v| subset >> v & 1 == 1).collect();
    let m = verts.len();
    if m < 2 {
        return None;
    }
    let full = (1usize << m) - 1;
    // reach[mask] bit j: a path from verts[0] through exactly `mask` ends at verts[j]
    let mut reach = vec![0u32; 1 << m];
    reach[1] = 1;
    for mask in 1..=full {
        if mask & 1 == 0 || reach[mask] == 0 {
            continue;
        }
        for j in 0..m {
            if reach[mask] >> j & 1 == 0 {
                continue;
            }
            for t in 1..m {
                if mask >> t & 1 == 0 && d.has_arc(verts[j], verts[t]) {
                    reach[mask | 1 << t] |= 1 << t;
                }
            }
        }
    }
    let end = (1..m).find(|&j| reach[full] >> j & 1 == 1 && d.has_arc(verts[j], verts[0]))?;
    // walk back
    let mut order = vec![end];
    let (mut mask, mut cur) = (full, end);
    while mask != 1 {
        let prev_mask = mask & !(1 << cur);
        let prev = (0..m)
            .find(|&j| reach[prev_mask] >> j & 1 == 1 && d.has_arc(verts[j], verts[cur]))
            .expect("dp table is consistent");
        order.push(prev);
        mask = prev_mask;
        cur = prev;
    }
    order.reverse();
    Some(order.into_iter().map(|j| verts[j]).collect())
}

/// Some `(2p, 4k - 2p)`-cycle-factor, found by trying every `2p`-cycle
/// (smallest vertex first, each cycle once) and testing its complement.
/// `Ok(None)` means none exists.
pub fn brute_force_two_factor(d: &RegularBipartiteTournament, p: usize) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let n = d.vertex_count();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::TooLarge(n));
    }
    let k = d.k();
    if p < 1 || 2 * p >= n {
        return Err(Error::POutOfRange { p, k, max: 2 * k - 1 });
    }
    let g = d.digraph();
    let all: u64 = (1u64 << n) - 1;
    let mut found = None;
    for s in 0..n {
        let mut path = vec![s];
        let mut visit = |cyc: &[usize]| {
            let used = cyc.iter().fold(0u64, |m, &v| m | 1 << v);
            match hamiltonian_subset_dp(g, all & !used) {
                Some(rest) => {
                    found = Some((cyc.to_vec(), rest));
                    true
                }
                None => false,
            }
        };
        if cycles_from(g, s, 2 * p, 1 << s, &mut path, &mut visit) {
            break;
        }
    }
    Ok(found)
}

/// Cycles of length `len` whose smallest vertex is `path[0]`.
fn cycles_from(g: &Digraph, s: usize, len: usize, used: u64, path: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    let last = path[path.len() - 1];
    if path.len() == len {
        return g.has_arc(last, s) && visit(path);
    }
    for v in s + 1..g.vertex_count() {
        if used >> v & 1 == 0 && g.has_arc(last, v) {
            path.push(v);
            if cycles_from(g, s, len, used | 1 << v, path, visit) {
                return true;
            }
            path.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tournament::make_f4k;

    /// Tries every ordering of the subset.
    fn hamiltonian_by_permutation(d: &Digraph, subset: u64) -> bool {
        fn go(d: &Digraph, first: usize, last: usize, left: &mut Vec<usize>) -> bool {
            if left.is_empty() {
                return d.has_arc(last, first);
            }
            for i in 0..left.len() {
                let v = left.remove(i);
                let ok = d.has_arc(last, v) && go(d, first, v, left);
                left.insert(i, v);
                if ok {
                    return true;
                }
            }
            false
        }
        let mut verts: Vec<usize> = (0..64).filter(|&v| subset >> v & 1 == 1).collect();
        if verts.len() < 2 {
            return false;
        }
        let first = verts.remove(0);
        go(d, first, first, &mut verts)
    }

    #[test]
    fn dp_agrees_with_permutations_on_small_digraphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3000 {
            let n = rng.gen_range(2..=8);
            let density = rng.gen_range(0.15..0.7);
            let mut d = Digraph::new(n);
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.gen_bool(density) {
                        d.add_arc(u, v);
                    }
                }
            }
            let subset = rng.gen_range(0..(1u64 << n));
            let dp = hamiltonian_subset_dp(&d, subset);
            assert_eq!(dp.is_some(), hamiltonian_by_permutation(&d, subset), "n={n} subset={subset:b}");
            if let Some(c) = dp {
                assert_eq!(c.iter().fold(0u64, |m, &v| m | 1 << v), subset);
                for i in 0..c.len() {
                    assert!(d.has_arc(c[i], c[(i + 1) % c.len()]));
                }
            }
        }
    }

    #[test]
    fn f12_has_no_six_six_factor() {
        assert_eq!(brute_force_two_factor(&make_f4k(3).unwrap(), 3).unwrap(), None);
    }

    #[test]
    fn f8_splits_into_four_cycles_through_every_class() {
        let (a, b) = brute_force_two_factor(&make_f4k(2).unwrap(), 2).unwrap().unwrap();
        // classes of F_8: K = {0,1}, M = {2,3}, L = {4,5}, N = {6,7}
        for c in [a, b] {
            let mut classes: Vec<usize> = c.iter().map(|&v| v / 2).collect();
            classes.sort();
            assert_eq!(classes, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn rejects_large_instances() {
        let d = make_f4k(7).unwrap();
        assert_eq!(brute_force_two_factor(&d, 3), Err(Error::TooLarge(28)));
    }
}
