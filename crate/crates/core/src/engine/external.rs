//! An arc of `C'` joining two strong components of the complement of
//! `D^M[C']`, with an anti-path back, always yields a good factor.

use super::finish::{extending_c, good_anti_cycle};
use super::view::View;
use super::{ids, mirrored, Ctx, Dead, Good, Step};
use crate::cycle::Cycle;
use crate::graph::{bit, count, members, VertexSet};
use crate::tournament::RegularBipartiteTournament;

const MAX_HOPS: usize = 4;

/// Arcs `ab` of `C'` in different components with an anti-path from `b` to `a`.
pub(crate) fn crossing_arcs(v: &View) -> Vec<(usize, usize)> {
    let comps = v.comps_cp();
    let cps = v.cps();
    v.cp
        .arcs()
        .filter(|&(a, b)| comps.component_of(a) != comps.component_of(b) && v.g().anti_reach(b, cps) & bit(a) != 0)
        .collect()
}

pub(crate) fn external_arc(
    ctx: &mut Ctx,
    d: &RegularBipartiteTournament,
    v: &View,
    a: usize,
    b: usize,
    allow_mirror: bool,
    hops: usize,
) -> Step {
    let g = v.g();
    let (cs, cps) = (v.cs(), v.cps());
    if v.cp.succ(a) != b {
        return Err(Dead::new("external-arc", format!("{a}{b} is not an arc of C'")));
    }
    let comps = v.comps_cp();
    if comps.component_of(a) == comps.component_of(b) {
        return Err(Dead::new("external-arc", format!("{a} and {b} share a component")));
    }
    let Some(back) = v.anti_path(cps, b, a) else {
        return Err(Dead::new("external-arc", format!("no anti-path from {b} to {a}")));
    };
    ctx.note(format!("external-arc a={a} b={b} dir={}", v.dir().tag()));

    let common = v.anti_out_c(a) & v.anti_in_c(b);
    if let Some(c) = members(common).next() {
        let mut h = back;
        h.push(c);
        return good_anti_cycle(ctx, d, v, &h);
    }

    let aset = g.anti_reach(a, cps);
    let bset = cps & !aset;
    // the degree chain 2k - 2 <= p + |A| - 1 + |B| - 1 forces equality
    let p = v.p();
    let k = d.k();
    let total = count(g.anti_out_set(a, v.cd.vertices())) + count(g.anti_in_set(b, v.cd.vertices()));
    let on_c = count(v.anti_out_c(a)) + count(v.anti_in_c(b));
    if total != 2 * k - 2
        || on_c != p
        || v.anti_out_cp(a) != aset & !bit(a)
        || v.anti_in_cp(b) != bset & !bit(b)
        || v.anti_out_c(a) | v.anti_in_c(b) != cs
    {
        return Err(Dead::new(
            "external-arc",
            format!("degree chain not tight: total={total} on_c={on_c} A={} B={}", ids(aset), ids(bset)),
        ));
    }

    let b2 = v.cp.succ(b);
    if bset & bit(b2) != 0 {
        for x in members(v.anti_out_c(a)) {
            if g.has_arc(b, v.c.succ(x)) {
                return extending_c(ctx, d, v, b, x);
            }
        }
        return match members(v.anti_out_c(b) & v.anti_in_c(b2)).next() {
            Some(c) => good_anti_cycle(ctx, d, v, &[b2, b, c]),
            None => Err(Dead::new("external-arc", format!("no c with {b}c and c{b2} anti-arcs"))),
        };
    }

    // redirect to the first arc of a path of C'[B]
    if hops < MAX_HOPS {
        if let Some((u, w)) = v.cp.arcs().find(|&(w1, w2)| bset & bit(w1) != 0 && bset & bit(w2) != 0 && bset & bit(v.cp.pred(w1)) == 0) {
            let u0 = v.cp.pred(u);
            ctx.note(format!("external-arc: redirect to B path {u}{w}"));
            return external_arc(ctx, d, v, u0, u, allow_mirror, hops + 1);
        }
        let two_in_a = v.cp.arcs().any(|(w1, w2)| aset & bit(w1) != 0 && aset & bit(w2) != 0);
        if two_in_a && allow_mirror {
            let m = v.cd.matching();
            let (ra, rb) = (m.partner(b), m.partner(a));
            let (h1, h2) = lift_pair(v)?;
            let dir = v.dir().other();
            return mirrored(ctx, d, &h1, &h2, |ctx, dr, r1, r2| {
                let rv = View::new(dr, r1, r2, dir)?;
                external_arc(ctx, dr, &rv, ra, rb, false, hops + 1)
            });
        }
    }
    alternating(ctx, d, v, aset, bset)
}

fn lift_pair(v: &View) -> Step<(Cycle, Cycle)> {
    let lift = |c: &Cycle| v.cd.lift(c).map_err(|e| Dead::new("external-arc", e.to_string()));
    Ok((lift(&v.c)?, lift(&v.cp)?))
}

/// `C' = a_1 b_1 ... a_m b_m` with `A`, `B` independent.
fn alternating(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View, aset: VertexSet, bset: VertexSet) -> Step {
    let g = v.g();
    let cps = v.cps();
    let Some(a1) = members(aset).next() else {
        return Err(Dead::new("external-arc", "A is empty"));
    };
    let seq = v.cp.rotated_to(a1);
    let m = seq.len() / 2;
    let alternates = seq.len().is_multiple_of(2)
        && seq.iter().enumerate().all(|(i, &x)| (if i % 2 == 0 { aset } else { bset }) & bit(x) != 0);
    if !alternates || m < 3 {
        return Err(Dead::new("external-arc", "C' does not alternate between A and B"));
    }
    let an: Vec<usize> = (0..m).map(|i| seq[2 * i]).collect();
    let bn: Vec<usize> = (0..m).map(|i| seq[2 * i + 1]).collect();
    ctx.note(format!("external-arc alternating m={m}"));
    let mut last = Dead::new("external-arc", "no anti-arc from B to A");
    // every a_i b_i is itself an external arc
    for i in 0..m {
        if let Some(c) = members(v.anti_out_c(an[i]) & v.anti_in_c(bn[i])).next() {
            let Some(mut h) = v.anti_path(cps, bn[i], an[i]) else { continue };
            h.push(c);
            match good_anti_cycle(ctx, d, v, &h) {
                Ok(good) => return Ok(good),
                Err(e) => last = e,
            }
        }
    }
    if members(aset).any(|x| g.out_set(x) & aset != 0) || members(bset).any(|x| g.out_set(x) & bset != 0) {
        ctx.note("external-arc: A or B is not independent");
    }
    // a_i x and x b_{i+1} anti-arcs: rewire C' so that a_i b_{i+1} is an arc
    for i in 0..m {
        let next = (i + 1) % m;
        let prev = (i + m - 1) % m;
        for x in members(v.anti_out_c(an[i]) & v.anti_in_c(bn[next])) {
            let mut cyc = vec![an[prev], bn[i], an[next], bn[prev], an[i], bn[next]];
            let mut j = (next + 1) % m;
            while j != prev {
                cyc.push(an[j]);
                cyc.push(bn[j]);
                j = (j + 1) % m;
            }
            let Ok(v2) = v.with_cp(Cycle::new(cyc.clone())) else { continue };
            let Some(mut h) = v2.anti_path(cps, bn[next], an[i]) else { continue };
            ctx.note(format!("external-arc rewire C' around a_{i}: {cyc:?}"));
            h.push(x);
            match good_anti_cycle(ctx, d, &v2, &h) {
                Ok(good) => return Ok(good),
                Err(e) => last = e,
            }
        }
    }
    for s in 0..m {
        for t in 0..m {
            if g.has_arc(bn[s], an[t]) {
                continue;
            }
            let (at, bt) = (v.anti_out_c(an[t]), v.anti_in_c(bn[t]));
            for xa in members(at) {
                for xb in members(g.anti_out_set(xa, bt)) {
                    let mut h = vec![xa, xb, bn[t]];
                    if s != t {
                        h.push(bn[s]);
                    }
                    h.push(an[t]);
                    match good_anti_cycle(ctx, d, v, &h) {
                        Ok(good) => return Ok(good),
                        Err(e) => last = e,
                    }
                }
            }
        }
    }
    Err(last)
}

/// Some crossing arc handed to [`external_arc`].
pub(crate) fn any_external(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View) -> Step<Good> {
    let mut last = Dead::new("external-arc", "no crossing arc with a return anti-path");
    for (a, b) in crossing_arcs(v) {
        match external_arc(ctx, d, v, a, b, true, 0) {
            Ok(g) => return Ok(g),
            Err(e) => last = e,
        }
    }
    Err(last)
}
