//! The moves that end an extension step: anti-cycle switches followed by a
//! group merge, and direct insertion of a `C'` vertex into `C`.

use super::view::View;
use super::{Ctx, Dead, Good, Step};
use crate::contraction::ContractedDigraph;
use crate::cycle::{Cycle, CycleFactor};
use crate::factor::{hm_normalize, HmOutcome};
use crate::graph::{bit, members, VertexSet};
use crate::merge::merge_to_two_factor;
use crate::rewiring::{switch_factor, switch_log_line, AntiCycle};
use crate::tournament::{find_f_witness, is_f_isomorphic, FMode, RegularBipartiteTournament};

fn union(cycles: &[Cycle]) -> VertexSet {
    cycles.iter().fold(0, |m, c| m | c.vertex_set())
}

/// Good host factor from the designated cycle and its complement.
pub(crate) fn good_from(d: &RegularBipartiteTournament, first: Cycle, second: Cycle) -> Good {
    let p1 = first.len() / 2;
    let witness = if p1.is_multiple_of(2) && p1 >= 4 {
        find_f_witness(d.digraph(), first.vertex_set())
    } else {
        None
    };
    Good { first, second, witness }
}

/// Joins contracted cycles `group` (`p + 1` vertices whose lift is strong
/// and, for even `p + 1`, not `F`) into one host cycle and merges the
/// lifted `rest` behind it.
pub(crate) fn somme_cf(
    ctx: &mut Ctx,
    d: &RegularBipartiteTournament,
    cd: &ContractedDigraph,
    group: &[Cycle],
    rest: &[Cycle],
) -> Step {
    let p1: usize = group.iter().map(Cycle::len).sum();
    let lift = |c: &Cycle| cd.lift(c).map_err(|e| Dead::new("somme", e.to_string()));
    let lifted = group.iter().map(lift).collect::<Step<Vec<_>>>()?;
    let rest_lifted = rest.iter().map(lift).collect::<Step<Vec<_>>>()?;
    let host = d.digraph();
    let hset = union(&lifted);
    // strong in D^M implies strong in D; matching arcs may also link the pieces
    if !host.is_strong_on(hset) {
        return Err(Dead::new("somme", "lifted group is not strongly connected"));
    }
    if p1.is_multiple_of(2) && is_f_isomorphic(host, hset, FMode::F) {
        return Err(Dead::new("somme", "lifted group induces F"));
    }
    let big = if lifted.len() == 1 {
        lifted[0].clone()
    } else {
        match hm_normalize(host, hset, &CycleFactor::new(lifted)) {
            Ok(HmOutcome::Hamiltonian(h)) => h,
            _ => return Err(Dead::new("somme", "lifted group has no hamiltonian cycle")),
        }
    };
    let lens: Vec<usize> = group.iter().map(Cycle::len).collect();
    ctx.note(format!("somme pieces={lens:?} -> {}", big.len()));
    if rest_lifted.len() == 1 {
        return Ok(good_from(d, big, rest_lifted[0].clone()));
    }
    let mut all = vec![big.clone()];
    all.extend(rest_lifted);
    let out = merge_to_two_factor(d, &CycleFactor::new(all), &big).map_err(|e| Dead::new("merge", e.to_string()))?;
    ctx.log.extend(out.log);
    Ok(Good {
        first: out.first,
        second: out.second,
        witness: out.witness,
    })
}

/// Cycles of `f` summing to `p1` whose lifted union is strongly connected
/// and, for even `p1`, not `F`. Smallest index sets first.
pub(crate) fn select_group(
    d: &RegularBipartiteTournament,
    cd: &ContractedDigraph,
    f: &CycleFactor,
    p1: usize,
) -> Option<(Vec<Cycle>, Vec<Cycle>)> {
    let host = d.digraph();
    let m = cd.matching();
    let cycles = &f.cycles;
    let mut budget = 20_000usize;
    let mut chosen = Vec::new();
    fn go(
        i: usize,
        left: usize,
        cycles: &[Cycle],
        chosen: &mut Vec<usize>,
        budget: &mut usize,
        ok: &dyn Fn(&[usize]) -> bool,
    ) -> bool {
        if left == 0 {
            *budget = budget.saturating_sub(1);
            return ok(chosen);
        }
        if i == cycles.len() || *budget == 0 {
            return false;
        }
        if cycles[i].len() <= left {
            chosen.push(i);
            if go(i + 1, left - cycles[i].len(), cycles, chosen, budget, ok) {
                return true;
            }
            chosen.pop();
        }
        go(i + 1, left, cycles, chosen, budget, ok)
    }
    let ok = |idx: &[usize]| {
        let set = idx.iter().fold(0, |acc, &i| acc | cycles[i].vertex_set());
        let lifted = members(set).fold(set, |acc, u| acc | bit(m.partner(u)));
        host.is_strong_on(lifted) && (p1 % 2 == 1 || !is_f_isomorphic(host, lifted, FMode::F))
    };
    if !go(0, p1, cycles, &mut chosen, &mut budget, &ok) {
        return None;
    }
    let group = chosen.iter().map(|&i| cycles[i].clone()).collect();
    let rest = (0..cycles.len()).filter(|i| !chosen.contains(i)).map(|i| cycles[i].clone()).collect();
    Some((group, rest))
}

/// Switch along `h`, an anti-cycle made of an anti-path of `C'` from
/// `succ(y)` to `y` followed by an anti-path of `C`; the switched cycles on
/// `V(C)` plus `succ(y)` are then merged.
pub(crate) fn good_anti_cycle(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View, h: &[usize]) -> Step {
    let (cs, cps) = (v.cs(), v.cps());
    let t = h.len();
    let start = (0..t)
        .find(|&i| cps & bit(h[i]) != 0 && cs & bit(h[(i + t - 1) % t]) != 0)
        .ok_or_else(|| Dead::new("anti-cycle", "anti-cycle does not meet both cycles"))?;
    let mut h = h.to_vec();
    h.rotate_left(start);
    let s = h.iter().take_while(|&&x| cps & bit(x) != 0).count();
    if h[s..].iter().any(|&x| cs & bit(x) == 0) {
        return Err(Dead::new("anti-cycle", "C' part is not contiguous"));
    }
    if s < 2 || v.cp.succ(h[s - 1]) != h[0] {
        return Err(Dead::new("anti-cycle", "C' part does not run from succ(y) to y"));
    }
    let ac = AntiCycle::new(&v.cd, h.clone()).map_err(|e| Dead::new("anti-cycle", e.to_string()))?;
    ctx.note(switch_log_line(&v.cd, &ac));
    let f = CycleFactor::new(vec![v.c.clone(), v.cp.clone()]);
    let (cd2, f2) = switch_factor(&v.cd, &f, &ac).map_err(|e| Dead::new("anti-cycle", e.to_string()))?;
    let target = cs | bit(h[0]);
    let (group, rest): (Vec<Cycle>, Vec<Cycle>) = f2.cycles.into_iter().partition(|c| c.vertex_set() & !target == 0);
    if union(&group) != target {
        return Err(Dead::new("anti-cycle", "switched cycles do not cover V(C) + succ(y)"));
    }
    somme_cf(ctx, d, &cd2, &group, &rest)
}

/// Anti-cycles accepted by [`good_anti_cycle`], in a fixed order.
pub(crate) fn t1_candidates(v: &View, limit: usize) -> Vec<Vec<usize>> {
    let (cs, cps) = (v.cs(), v.cps());
    let mut out = Vec::new();
    for &y in v.cp.vertices() {
        let x = v.cp.succ(y);
        let (outs, ins) = (v.anti_out_c(y), v.anti_in_c(x));
        if outs == 0 || ins == 0 {
            continue;
        }
        let Some(top) = v.anti_path(cps, x, y) else { continue };
        for c1 in members(outs) {
            for c2 in members(ins) {
                if let Some(bottom) = v.anti_path(cs, c1, c2) {
                    let mut h = top.clone();
                    h.extend(bottom);
                    out.push(h);
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
        }
    }
    out
}

/// Tries [`t1_candidates`] in order.
pub(crate) fn any_t1(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View, limit: usize) -> Step {
    let mut last = Dead::new("anti-cycle", "no anti-cycle through C and a C' arc");
    for h in t1_candidates(v, limit) {
        match good_anti_cycle(ctx, d, v, &h) {
            Ok(g) => return Ok(g),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Moves `b` from `C'` into `C` between `x` and `succ(x)`, using the arcs
/// `pred(b) -> succ(b)`, `x -> b` and `b -> succ(x)`.
pub(crate) fn extending_c(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View, b: usize, x: usize) -> Step {
    let g = v.g();
    let (a, c) = (v.cp.pred(b), v.cp.succ(b));
    let y = v.c.succ(x);
    if v.cp.len() < 3 || !g.has_arc(a, c) || !g.has_arc(x, b) || !g.has_arc(b, y) {
        return Err(Dead::new("extend-c", format!("pattern absent at b={b} x={x}")));
    }
    let mut first = v.c.rotated_to(y);
    first.push(b);
    let mut second = v.cp.rotated_to(c);
    second.pop();
    let lift = |vs: Vec<usize>| v.cd.lift(&Cycle::new(vs)).map_err(|e| Dead::new("extend-c", e.to_string()));
    let (h1, h2) = (lift(first)?, lift(second)?);
    ctx.note(format!("extend-c a={a} b={b} c={c} x={x} y={y}"));
    Ok(good_from(d, h1, h2))
}

pub(crate) fn t2_candidates(v: &View) -> Vec<(usize, usize)> {
    let g = v.g();
    let mut out = Vec::new();
    if v.cp.len() < 3 {
        return out;
    }
    for &b in v.cp.vertices() {
        if !g.has_arc(v.cp.pred(b), v.cp.succ(b)) {
            continue;
        }
        for &x in v.c.vertices() {
            if g.has_arc(x, b) && g.has_arc(b, v.c.succ(x)) {
                out.push((b, x));
            }
        }
    }
    out
}

pub(crate) fn any_t2(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View) -> Step {
    let p1 = v.p() + 1;
    let mut last = Dead::new("extend-c", "no insertion pattern");
    for (b, x) in t2_candidates(v) {
        match extending_c(ctx, d, v, b, x) {
            Ok(g) if p1 % 2 == 1 || !is_f_isomorphic(d.digraph(), g.first.vertex_set(), FMode::F) => return Ok(g),
            Ok(_) => last = Dead::new("extend-c", "inserted cycle induces F"),
            Err(e) => last = e,
        }
    }
    Err(last)
}
