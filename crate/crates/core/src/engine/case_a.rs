//! The complement of `D^M[C']` has a unique initial strong component.

use super::external::external_arc;
use super::finish::good_anti_cycle;
use super::view::View;
use super::{ids, Ctx, Dead, Step};
use crate::contraction::Direction;
use crate::cycle::Cycle;
use crate::graph::{bit, count, members, VertexSet};
use crate::tournament::RegularBipartiteTournament;

pub(crate) fn run(
    ctx: &mut Ctx,
    d: &RegularBipartiteTournament,
    c1: &Cycle,
    c2: &Cycle,
    dir: Direction,
    _depth: usize,
) -> Step {
    let v = View::new(d, c1, c2, dir)?;
    ctx.note(format!("case A dir={}", dir.tag()));
    let comps = v.comps_cp();
    if comps.len() > 1 {
        let init = comps.initial();
        if init.len() != 1 {
            return Err(Dead::new("case A", "complement of C' has several initial components"));
        }
        let iset = comps.sets[init[0]];
        let Some((a, b)) = v.cp.arcs().find(|&(a, b)| iset & bit(a) == 0 && iset & bit(b) != 0) else {
            return Err(Dead::new("case A", "no arc of C' enters the initial component"));
        };
        return external_arc(ctx, d, &v, a, b, true, 0);
    }
    let pairs = v.p_pairs();
    if pairs.is_empty() {
        return Err(Dead::new("case A", "P does not hold"));
    }
    if v.comps_c().len() == 1 {
        ctx.note("case A.1: both complements strong");
        return both_strong(ctx, d, &v, &pairs);
    }
    partitioned(ctx, d, &v)
}

fn both_strong(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View, pairs: &[(usize, usize)]) -> Step {
    let (cs, cps) = (v.cs(), v.cps());
    let mut last = Dead::new("case A.1", "no anti-cycle");
    for &(u, w) in pairs {
        let Some(top) = v.anti_path(cps, w, u) else {
            return Err(Dead::new("case A.1", format!("no anti-path {w} to {u} in strong C'")));
        };
        for u1 in members(v.anti_out_c(u)) {
            for w1 in members(v.anti_in_c(w)) {
                let Some(bottom) = v.anti_path(cs, u1, w1) else {
                    return Err(Dead::new("case A.1", format!("no anti-path {u1} to {w1} in strong C")));
                };
                let mut h = top.clone();
                h.extend(bottom);
                match good_anti_cycle(ctx, d, v, &h) {
                    Ok(g) => return Ok(g),
                    Err(e) => last = e,
                }
            }
        }
    }
    Err(last)
}

/// Partitions `(A, B)` of `V(C)` with no anti-arc from `A` to `B`.
fn partitions(v: &View) -> Vec<VertexSet> {
    let cs = v.cs();
    let mut out: Vec<VertexSet> = Vec::new();
    for x in members(cs) {
        let a = v.g().anti_reach(x, cs);
        if a != cs && !out.contains(&a) {
            out.push(a);
        }
    }
    out
}

fn partitioned(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View) -> Step {
    let cs = v.cs();
    let parts = partitions(v);
    let Some(&first) = parts.first() else {
        return Err(Dead::new("case A.2", "complement of C is strong after all"));
    };
    for &aset in &parts {
        let bset = cs & !aset;
        for a in members(aset) {
            for b in members(bset) {
                if let Some(path) = v.anti_path(cs, b, a) {
                    ctx.note(format!("case A.2.1 A={} B={} a={a} b={b}", ids(aset), ids(bset)));
                    return returning_path(ctx, d, v, aset, bset, a, b, &path);
                }
            }
        }
    }
    ctx.note(format!("case A.2.2 A={}", ids(first)));
    no_return(ctx, d, v, first, cs & !first)
}

#[allow(clippy::too_many_arguments)]
fn returning_path(
    ctx: &mut Ctx,
    d: &RegularBipartiteTournament,
    v: &View,
    aset: VertexSet,
    bset: VertexSet,
    a: usize,
    b: usize,
    path: &[usize],
) -> Step {
    let (cs, cps) = (v.cs(), v.cps());
    let g = v.g();
    let out_a = v.anti_out_cp(a);
    let in_b = v.anti_in_cp(b);
    let l = count(cps);
    if count(out_a) + count(in_b) < l {
        return Err(Dead::new("case A.2.1", "anti-degree sum on C' below |C'|"));
    }
    if count(out_a) + count(in_b) > l {
        // b' -/-> b and a -/-> a' with a' = succ(b'); then anti-path a' to b'
        for b2 in members(in_b) {
            let a2 = v.cp.succ(b2);
            if out_a & bit(a2) == 0 {
                continue;
            }
            let Some(q) = v.anti_path(cps, a2, b2) else {
                return Err(Dead::new("case A.2.1", "complement of C' not strong"));
            };
            let mut h = q;
            h.extend_from_slice(path);
            return good_anti_cycle(ctx, d, v, &h);
        }
        return Err(Dead::new("case A.2.1", "pigeonhole pair missing"));
    }
    // equality: A and B independent, every B-vertex reachable back to A
    let b_prime: VertexSet = members(cps).filter(|&c| g.anti_out_set(c, bset) != 0).fold(0, |m, c| m | bit(c));
    let a_prime: VertexSet = members(cps).filter(|&c| g.anti_in_set(c, aset) != 0).fold(0, |m, c| m | bit(c));
    for (b2, z2) in v.cp.arcs() {
        if b_prime & bit(b2) == 0 {
            continue;
        }
        for z in members(v.anti_in_c(z2)) {
            for b0 in members(g.anti_out_set(b2, bset)) {
                if let (Some(p), Some(q)) = (v.anti_path(cs, b0, z), v.anti_path(cps, z2, b2)) {
                    let mut h = q;
                    h.extend(p);
                    return good_anti_cycle(ctx, d, v, &h);
                }
            }
        }
    }
    for (z2, a2) in v.cp.arcs() {
        if a_prime & bit(a2) == 0 {
            continue;
        }
        for z in members(v.anti_out_c(z2)) {
            for a0 in members(g.anti_in_set(a2, aset)) {
                if let (Some(p), Some(q)) = (v.anti_path(cs, z, a0), v.anti_path(cps, a2, z2)) {
                    let mut h = q;
                    h.extend(p);
                    return good_anti_cycle(ctx, d, v, &h);
                }
            }
        }
    }
    Err(Dead::new("case A.2.1", "(A', C'(B')) partition contradicts P"))
}

fn no_return(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View, aset: VertexSet, bset: VertexSet) -> Step {
    let cps = v.cps();
    let l = count(cps);
    let (small, large) = if count(bset) <= count(aset) { (bset, aset) } else { (aset, bset) };
    for side in [small, large] {
        for b in members(side) {
            let (ins, outs) = (v.anti_in_cp(b), v.anti_out_cp(b));
            if count(ins) + count(outs) <= l {
                continue;
            }
            for u in members(ins) {
                let w = v.cp.succ(u);
                if outs & bit(w) == 0 {
                    continue;
                }
                if let Some(mut h) = v.anti_path(cps, w, u) {
                    h.push(b);
                    return good_anti_cycle(ctx, d, v, &h);
                }
            }
        }
    }
    Err(Dead::new("case A.2.2", "C would induce a complete bipartite digraph, so D[C1] = F"))
}
