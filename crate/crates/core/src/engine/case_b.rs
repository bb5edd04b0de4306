//! `D[C_2]` is `F`, so `D^M[C']` is a balanced complete bipartite digraph.

use super::base::base_case;
use super::finish::somme_cf;
use super::view::View;
use super::{ids, Ctx, Dead, Step};
use crate::contraction::{contract, factor_matching, Direction};
use crate::cycle::{Cycle, CycleFactor};
use crate::graph::{bit, count, members, VertexSet};
use crate::rewiring::{switch_factor, switch_log_line, AntiCycle};
use crate::tournament::{is_f_isomorphic, FMode, RegularBipartiteTournament};

/// Alternating cycle `x_0 y_0 x_1 y_1 ...`.
fn alternate(xs: &[usize], ys: &[usize]) -> Option<Cycle> {
    if xs.len() != ys.len() || xs.is_empty() {
        return None;
    }
    Some(Cycle::new(xs.iter().zip(ys).flat_map(|(&x, &y)| [x, y]).collect()))
}

/// The two parts of `D^M[C']`, the one holding `C'`'s first vertex first.
fn parts(v: &View) -> Step<(VertexSet, VertexSet)> {
    let cps = v.cps();
    if !is_f_isomorphic(v.g(), cps, FMode::CompleteBipartite) {
        return Err(Dead::new("case B", "C' is not complete bipartite"));
    }
    let y = v.g().out_set(v.cp.vertices()[0]) & cps;
    Ok((cps & !y, y))
}

pub(crate) fn run(ctx: &mut Ctx, d: &RegularBipartiteTournament, c1: &Cycle, c2: &Cycle, _depth: usize) -> Step {
    let p = c1.len() / 2;
    if !p.is_multiple_of(2) {
        return Err(Dead::new("case B", "C2 is F but p is odd"));
    }
    let mut chosen = None;
    for dir in [Direction::Up, Direction::Down] {
        let v = View::new(d, c1, c2, dir)?;
        if v.comps_c().initial().len() == 1 {
            chosen = Some(v);
            break;
        }
    }
    let Some(v) = chosen else {
        return Err(Dead::new("case B", "complement of C has several initial components in both directions"));
    };
    ctx.note(format!("case B dir={}", v.dir().tag()));
    let (xs, ys) = parts(&v)?;
    if let Some(g) = claim_three_cycle(ctx, d, &v, xs, ys) {
        return Ok(g);
    }
    if v.comps_c().len() != 1 {
        return Err(Dead::new("case B.2", "no anti-arc pair around an arc of C: alternation contradiction"));
    }
    if p >= 6 {
        induced(ctx, d, &v, c1, c2)
    } else {
        four(ctx, d, &v, xs, ys)
    }
}

/// Arc `ab` of `C` with an anti-path from `b` to `a`, `a -/-> a'` and
/// `b' -/-> b` for distinct `a', b'` in one part. Switching yields the
/// 3-cycle `a' b c` and a complete bipartite remainder that is split.
fn claim_three_cycle(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View, xs: VertexSet, ys: VertexSet) -> Option<super::Good> {
    let cs = v.cs();
    let p = v.p();
    for (a, b) in v.c.arcs() {
        let Some(path) = v.anti_path(cs, b, a) else { continue };
        for (side, other) in [(xs, ys), (ys, xs)] {
            for a2 in members(v.anti_out_cp(a) & side) {
                for b2 in members(v.anti_in_cp(b) & side & !bit(a2)) {
                    let c = members(other).next()?;
                    let rest_side: Vec<usize> = members(side & !bit(a2) & !bit(b2)).collect();
                    let rest_other: Vec<usize> = members(other & !bit(c)).collect();
                    let mut seq = vec![b2, c, a2];
                    for (i, &o) in rest_other.iter().enumerate() {
                        seq.push(o);
                        if i < rest_side.len() {
                            seq.push(rest_side[i]);
                        }
                    }
                    let Ok(v2) = v.with_cp(Cycle::from_rotation(seq)) else { continue };
                    let mut h = path.clone();
                    h.extend([a2, b2]);
                    let Ok(ac) = AntiCycle::new(&v2.cd, h) else { continue };
                    let f = CycleFactor::new(vec![v2.c.clone(), v2.cp.clone()]);
                    let Ok((cd2, f2)) = switch_factor(&v2.cd, &f, &ac) else { continue };
                    let c3 = f2.cycles.iter().find(|x| x.contains(a2))?.clone();
                    let cs_cycle = f2.cycles.iter().find(|x| x.contains(b2))?.clone();
                    if c3.vertex_set() != bit(a2) | bit(b) | bit(c) || cs_cycle.vertex_set() != v.cps() & !bit(a2) & !bit(c) {
                        ctx.note("claim three-cycle: unexpected switched cycles");
                        continue;
                    }
                    let half = (p - 2) / 2;
                    let sx: Vec<usize> = members(cs_cycle.vertex_set() & side).collect();
                    let sy: Vec<usize> = members(cs_cycle.vertex_set() & other).collect();
                    let (Some(small), Some(big)) = (alternate(&sx[..half], &sy[..half]), alternate(&sx[half..], &sy[half..])) else {
                        continue;
                    };
                    ctx.note(format!("claim three-cycle a={a} b={b} a'={a2} b'={b2} c={c}"));
                    ctx.note(switch_log_line(&v2.cd, &ac));
                    let mut rest: Vec<Cycle> = f2.cycles.iter().filter(|x| **x != c3 && **x != cs_cycle).cloned().collect();
                    rest.push(big);
                    if let Ok(g) = somme_cf(ctx, d, &cd2, &[c3, small], &rest) {
                        return Some(g);
                    }
                }
            }
        }
    }
    None
}

/// `p >= 6`: a 6-cycle factor of the `p/2`-regular `D[C_1]`, contracted
/// with a new matching, joined to a `(p - 2)`-cycle of `C'`.
fn induced(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View, c1: &Cycle, c2: &Cycle) -> Step {
    let p = v.p();
    let Some((sub, order)) = d.sub_tournament(c1.vertex_set()) else {
        return Err(Dead::new("case B.1", "D[C1] is not regular"));
    };
    let Some((s1, s2)) = base_case(&sub, 3) else {
        return Err(Dead::new("case B.1", format!("D[C1] ({}-regular) has no (6, {}) factor", sub.k(), 2 * p - 6)));
    };
    let back = |c: &Cycle| Cycle::new(c.vertices().iter().map(|&i| order[i]).collect());
    let (ci, ci2) = (back(&s1), back(&s2));
    ctx.note(format!("case B.1 induced 6-cycle {:?}", ci.vertices()));
    let f = CycleFactor::new(vec![ci.clone(), ci2.clone(), c2.clone()]);
    let m = factor_matching(d, &f, v.dir()).map_err(|e| Dead::new("case B.1", format!("{e:?}")))?;
    let cd = contract(d, &m).map_err(|e| Dead::new("case B.1", format!("{e:?}")))?;
    let (Some(fi), Some(fi2), Some(cp)) = (cd.contract_cycle(&ci), cd.contract_cycle(&ci2), cd.contract_cycle(c2)) else {
        return Err(Dead::new("case B.1", "new factor does not contract"));
    };
    let g = cd.digraph();
    let cps = cp.vertex_set();
    let y = g.out_set(cp.vertices()[0]) & cps;
    let (xs, ys) = (cps & !y, y);
    let half = (p - 2) / 2;
    for (x, yv) in fi.arcs() {
        for x2 in members(g.out_set(x) & cps) {
            for y2 in members(g.in_set(yv) & cps) {
                let forced = bit(x2) | bit(y2);
                if count(forced & xs) > half || count(forced & ys) > half {
                    continue;
                }
                let pick = |part: VertexSet| -> Vec<usize> {
                    let mut out: Vec<usize> = members(forced & part).collect();
                    out.extend(members(part & !forced).take(half - out.len()));
                    out
                };
                let (px, py) = (pick(xs), pick(ys));
                let chosen = px.iter().chain(&py).fold(0, |m, &u| m | bit(u));
                let rx: Vec<usize> = members(xs & !chosen).collect();
                let ry: Vec<usize> = members(ys & !chosen).collect();
                let (Some(small), Some(big)) = (alternate(&px, &py), alternate(&rx, &ry)) else { continue };
                ctx.note(format!("case B.1 join x={x} y={yv} via {x2},{y2} C_s={}", ids(small.vertex_set())));
                return somme_cf(ctx, d, &cd, &[fi.clone(), small], &[fi2, big]);
            }
        }
    }
    Err(Dead::new("case B.1", "no arc of the induced 3-cycle reaches C'"))
}

/// `p = 4`: a 5-cycle through one `C` vertex, or two 5-cycles through arcs of `C`.
fn four(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View, xs: VertexSet, ys: VertexSet) -> Step {
    let g = v.g();
    let cs = v.cs();
    let cps = v.cps();
    for (side, other) in [(xs, ys), (ys, xs)] {
        for x in v.c.vertices().to_vec() {
            let (Some(x2), Some(y2)) = (members(g.in_set(x) & side).next(), members(g.out_set(x) & other).next()) else {
                continue;
            };
            let tri: Vec<usize> = members(cs & !bit(x)).collect();
            let three = [vec![tri[0], tri[1], tri[2]], vec![tri[0], tri[2], tri[1]]]
                .into_iter()
                .map(Cycle::new)
                .find(|c| c.validate(g, 3).is_ok());
            let Some(three) = three else { continue };
            let (Some(x3), Some(y3)) = (members(side & !bit(x2)).next(), members(other & !bit(y2)).next()) else {
                continue;
            };
            let five = Cycle::new(vec![x2, x, y2, x3, y3]);
            let used = five.vertex_set();
            let rest: Vec<usize> = members(cps & !used & side).collect();
            let rest_o: Vec<usize> = members(cps & !used & other).collect();
            let mut others = vec![three];
            others.extend(alternate(&rest, &rest_o));
            ctx.note(format!("case B.1 p=4 five-cycle {:?}", five.vertices()));
            if let Ok(good) = somme_cf(ctx, d, &v.cd, &[five], &others) {
                return Ok(good);
            }
        }
    }
    // no vertex of C sees both parts: use two arcs aa' and bb' of D^M[C]
    let cv: Vec<usize> = members(cs).collect();
    for (side, other) in [(xs, ys), (ys, xs)] {
        for &a in &cv {
            for &a2 in &cv {
                if a == a2 || !g.has_arc(a, a2) {
                    continue;
                }
                let bb: Vec<usize> = members(cs & !bit(a) & !bit(a2)).collect();
                for (b, b2) in [(bb[0], bb[1]), (bb[1], bb[0])] {
                    if !g.has_arc(b, b2) {
                        continue;
                    }
                    if let Some(g2) = two_fives(ctx, d, v, [a, a2, b, b2], side, other) {
                        return Ok(g2);
                    }
                }
            }
        }
    }
    Err(Dead::new("case B.1", "p=4 constructions unavailable"))
}

fn two_fives(
    ctx: &mut Ctx,
    d: &RegularBipartiteTournament,
    v: &View,
    [a, a2, b, b2]: [usize; 4],
    side: VertexSet,
    other: VertexSet,
) -> Option<super::Good> {
    let g = v.g();
    for a1 in members(g.out_set(a2) & side) {
        for a3 in members(g.in_set(a) & side & !bit(a1)) {
            for b1 in members(g.out_set(b2) & other) {
                for b3 in members(g.in_set(b) & other & !bit(b1)) {
                    let Some(mid_b) = members(other & !bit(b1) & !bit(b3)).next() else { continue };
                    let Some(mid_a) = members(side & !bit(a1) & !bit(a3)).next() else { continue };
                    let f1 = Cycle::new(vec![a, a2, a1, mid_b, a3]);
                    let f2 = Cycle::new(vec![b, b2, b1, mid_a, b3]);
                    if f1.validate(g, 5).is_err() || f2.validate(g, 5).is_err() {
                        continue;
                    }
                    let used = f1.vertex_set() | f2.vertex_set();
                    let rx: Vec<usize> = members(v.cps() & !used & side).collect();
                    let ry: Vec<usize> = members(v.cps() & !used & other).collect();
                    let mut others = vec![f2];
                    others.extend(alternate(&rx, &ry));
                    ctx.note(format!("case B.1 p=4 two five-cycles {:?}", f1.vertices()));
                    if let Ok(good) = somme_cf(ctx, d, &v.cd, &[f1], &others) {
                        return Some(good);
                    }
                }
            }
        }
    }
    None
}
