//! Neither `Q` nor `F` holds for the chosen direction, `Q` holds for the
//! other one and `P` does not. Every `C'` vertex then has no arc into `C`
//! or none out of it.

use super::external::{any_external, external_arc};
use super::finish::{good_anti_cycle, good_from, somme_cf};
use super::view::View;
use super::{dispatch, mirrored, Ctx, Dead, Good, Step};
use crate::contraction::Direction;
use crate::cycle::{Cycle, CycleFactor};
use crate::graph::{bit, members};
use crate::rewiring::{switch_factor, switch_log_line, AntiCycle};
use crate::tournament::{is_f_witness, RegularBipartiteTournament};

pub(crate) fn run(
    ctx: &mut Ctx,
    d: &RegularBipartiteTournament,
    c1: &Cycle,
    c2: &Cycle,
    dir: Direction,
    depth: usize,
) -> Step {
    let v = View::new(d, c1, c2, dir)?;
    ctx.note(format!("case C dir={}", dir.tag()));
    let g = v.g();
    let cs = v.cs();
    let mut last = Dead::new("case C", "no claim applies");
    for x in v.cp.vertices().to_vec() {
        if g.out_set(x) & cs == 0 && g.in_set(x) & cs == 0 {
            match no_arc_vertex(ctx, d, &v, x, true) {
                Ok(good) => return Ok(good),
                Err(e) => last = e,
            }
        }
    }
    if v.cp.arcs().any(|(x, y)| !g.has_arc(y, x)) {
        return digoned(ctx, d, &v, depth, true);
    }
    match digon_chain(ctx, d, &v, false) {
        Ok(good) => Ok(good),
        Err(e) if last.detail != "no claim applies" => Err(Dead::new(&e.stage, format!("{}; earlier: {}", e.detail, last.detail))),
        Err(e) => Err(e),
    }
}

/// Successive switches along anti-digons; the result must be a 2-factor.
fn digon_exchange(
    ctx: &mut Ctx,
    d: &RegularBipartiteTournament,
    v: &View,
    digons: [(usize, usize); 2],
    witness: impl Fn(&crate::contraction::ContractedDigraph) -> [usize; 4],
) -> Step {
    let mut cd = v.cd.clone();
    let mut f = CycleFactor::new(vec![v.c.clone(), v.cp.clone()]);
    let m0 = v.cd.clone();
    for (a, b) in digons {
        let ac = AntiCycle::new(&cd, vec![a, b]).map_err(|e| Dead::new("exchange", e.to_string()))?;
        ctx.note(switch_log_line(&cd, &ac));
        let (cd2, f2) = switch_factor(&cd, &f, &ac).map_err(|e| Dead::new("exchange", e.to_string()))?;
        cd = cd2;
        f = f2;
    }
    let p1 = v.p() + 1;
    let (Some(first), Some(second)) = (
        f.cycles.iter().find(|c| c.len() == p1),
        f.cycles.iter().find(|c| c.len() != p1),
    ) else {
        return Err(Dead::new("exchange", format!("exchange gave cycle lengths {:?}", f.cycles.iter().map(Cycle::len).collect::<Vec<_>>())));
    };
    if f.len() != 2 {
        return Err(Dead::new("exchange", "exchange did not give two cycles"));
    }
    let lift = |c: &Cycle| cd.lift(c).map_err(|e| Dead::new("exchange", e.to_string()));
    let mut good: Good = good_from(d, lift(first)?, lift(second)?);
    let w = witness(&m0);
    if p1.is_multiple_of(2) && is_f_witness(d.digraph(), good.first.vertex_set(), w) {
        good.witness = Some(w);
    }
    Ok(good)
}

/// `x` has no arc to or from `C`; `x, y, z, t` consecutive on `C'`.
fn no_arc_vertex(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View, x: usize, allow_mirror: bool) -> Step {
    let g = v.g();
    let cs = v.cs();
    let y = v.cp.succ(x);
    let z = v.cp.succ(y);
    let t = v.cp.succ(z);
    ctx.note(format!("no-arc vertex x={x} y={y} z={z} t={t}"));
    if v.cp.len() < 4 {
        return Err(Dead::new("no-arc", "C' too short"));
    }
    // c in C with {c, t} independent: exchange b, c for y, z, t
    if let Some(c) = members(cs).find(|&c| !g.has_arc(c, t) && !g.has_arc(t, c)) {
        if v.p() <= 3 {
            return Err(Dead::new("no-arc", "independent {c, t} with p <= 3"));
        }
        let b = v.c.pred(c);
        let a = v.c.pred(b);
        let u = v.c.pred(a);
        let dd = v.c.pred(u);
        return digon_exchange(ctx, d, v, [(a, x), (c, t)], |cd| {
            let m = cd.matching();
            [dd, m.partner(dd), a, m.partner(x)]
        });
    }
    if g.dominates(cs, bit(t)) {
        if g.dominates(cs, bit(z)) {
            ctx.note("no-arc: C dominates z and t");
            return any_external(ctx, d, v);
        }
        for b2 in members(cs) {
            if !g.has_arc(b2, z) && !g.has_arc(z, b2) {
                let a2 = v.c.pred(b2);
                let c2 = v.c.pred(a2);
                return digon_exchange(ctx, d, v, [(a2, x), (b2, z)], |cd| {
                    let m = cd.matching();
                    [c2, m.partner(c2), a2, m.partner(x)]
                });
            }
        }
        return Err(Dead::new("no-arc", format!("no C vertex independent from z={z}")));
    }
    // t dominates C: the arc-reversed host
    if !allow_mirror {
        return Err(Dead::new("no-arc", "t dominates C in both orientations"));
    }
    let (h1, h2) = lift_pair(v)?;
    let rx = v.cd.matching().partner(x);
    let dir = v.dir().other();
    mirrored(ctx, d, &h1, &h2, |ctx, dr, r1, r2| {
        let rv = View::new(dr, r1, r2, dir)?;
        no_arc_vertex(ctx, dr, &rv, rx, false)
    })
}

fn lift_pair(v: &View) -> Step<(Cycle, Cycle)> {
    let lift = |c: &Cycle| v.cd.lift(c).map_err(|e| Dead::new("case C", e.to_string()));
    Ok((lift(&v.c)?, lift(&v.cp)?))
}

/// An arc `xy` of `C'` with `y -/-> x`.
fn digoned(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View, depth: usize, allow_mirror: bool) -> Step {
    let g = v.g();
    let (cs, cps) = (v.cs(), v.cps());
    let comps = v.comps_cp();
    let arcs: Vec<(usize, usize)> = v.cp.arcs().filter(|&(x, y)| !g.has_arc(y, x)).collect();
    let mut last = Dead::new("digoned", "every arc of C' is in a digon");
    for &(x, y) in &arcs {
        ctx.note(format!("digoned x={x} y={y}"));
        if comps.component_of(x) != comps.component_of(y) {
            match external_arc(ctx, d, v, x, y, true, 0) {
                Ok(good) => return Ok(good),
                Err(e) => {
                    last = e;
                    continue;
                }
            }
        }
        if let Some(u) = members(v.anti_out_c(x) & v.anti_in_c(y)).next() {
            match good_anti_cycle(ctx, d, v, &[y, x, u]) {
                Ok(good) => return Ok(good),
                Err(e) => {
                    last = e;
                    continue;
                }
            }
        }
        let zs: Vec<usize> = members(cps & !bit(x) & !bit(y))
            .filter(|&z| !g.has_arc(x, z) && !g.has_arc(z, y))
            .collect();
        if zs.is_empty() {
            match any_external(ctx, d, v) {
                Ok(good) => return Ok(good),
                Err(e) => {
                    last = e;
                    continue;
                }
            }
        }
        if let Some(&z) = zs.iter().find(|&&z| g.out_set(z) & cs != 0) {
            let ac = AntiCycle::new(&v.cd, vec![y, x, z]).map_err(|e| Dead::new("digoned", e.to_string()))?;
            ctx.note(switch_log_line(&v.cd, &ac));
            let f = CycleFactor::new(vec![v.c.clone(), v.cp.clone()]);
            let (cd2, f2) = switch_factor(&v.cd, &f, &ac).map_err(|e| Dead::new("digoned", e.to_string()))?;
            if f2.len() != 2 {
                return Err(Dead::new("digoned", "switch along yxz split C'"));
            }
            let host = cd2.lift_factor(&f2).map_err(|e| Dead::new("digoned", e.to_string()))?;
            let c1 = host.cycles.iter().find(|c| c.len() == 2 * v.p()).cloned();
            let c2 = host.cycles.iter().find(|c| c.len() != 2 * v.p()).cloned();
            let (Some(c1), Some(c2)) = (c1, c2) else {
                return Err(Dead::new("digoned", "switched factor lost the first cycle"));
            };
            ctx.note("digoned: re-dispatch after switch");
            match dispatch(ctx, d, &c1, &c2, depth + 1) {
                Ok(good) => return Ok(good),
                Err(e) => {
                    last = e;
                    continue;
                }
            }
        }
        if allow_mirror && zs.iter().any(|&z| g.in_set(z) & cs != 0) {
            let (h1, h2) = lift_pair(v)?;
            let dir = v.dir().other();
            match mirrored(ctx, d, &h1, &h2, |ctx, dr, r1, r2| {
                let rv = View::new(dr, r1, r2, dir)?;
                digoned(ctx, dr, &rv, depth + 1, false)
            }) {
                Ok(good) => return Ok(good),
                Err(e) => last = e,
            }
        }
    }
    Err(last)
}

/// Every arc of `C' = u_1 ... u_l` is in a digon.
fn digon_chain(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View, rewired: bool) -> Step {
    let g = v.g();
    let l = v.cp.len();
    let p = v.p();
    let base = v.cp.vertices().to_vec();
    // rotate so that u_l -> u_{l-2}; a forward chord is a backward one of the reversed cycle
    let back = (0..l).find(|&i| g.has_arc(base[i], base[(i + l - 2) % l]));
    let fwd = (0..l).find(|&i| g.has_arc(base[i], base[(i + 2) % l]));
    let u: Vec<usize> = match (back, fwd) {
        (Some(i), _) => {
            let mut u = base.clone();
            u.rotate_left((i + 1) % l);
            u
        }
        (None, Some(i)) => {
            let mut u = base.clone();
            u.reverse();
            let j = u.iter().position(|&w| w == base[i]).expect("on cycle");
            u.rotate_left((j + 1) % l);
            let v2 = v.with_cp(Cycle::from_rotation(u.clone()))?;
            ctx.note("digon chain: reversed C'");
            return chain_groups(ctx, d, &v2, &u);
        }
        (None, None) => {
            if p % 2 == 1 || rewired {
                return Err(Dead::new("digon chain", "no chord at distance 2"));
            }
            // odd positions u_1, u_3, ... are independent; swap u_3 with an odd neighbour of u_1
            let Some(i) = (4..l).step_by(2).find(|&i| g.has_arc(base[0], base[i]) || g.has_arc(base[i], base[0])) else {
                return Err(Dead::new("digon chain", "u_1 has no neighbour among odd positions"));
            };
            let mut w = base.clone();
            w.swap(2, i);
            ctx.note(format!("digon chain: rewire C' swapping u_3 and u_{}", i + 1));
            let v2 = v.with_cp(Cycle::from_rotation(w))?;
            return digon_chain(ctx, d, &v2, true);
        }
    };
    chain_groups(ctx, d, v, &u)
}

/// Cycle on `u[i..=j]` (1-based) along digons, closed by a chord between the ends.
fn segment_cycle(g: &crate::graph::Digraph, u: &[usize], i: usize, j: usize) -> Option<Cycle> {
    let seg: Vec<usize> = u[i - 1..j].to_vec();
    if seg.len() == 2 {
        return Some(Cycle::from_rotation(seg));
    }
    let (first, last) = (seg[0], seg[seg.len() - 1]);
    if g.has_arc(last, first) {
        Some(Cycle::new(seg))
    } else if g.has_arc(first, last) {
        let mut r = vec![first];
        r.extend(seg[1..].iter().rev());
        Some(Cycle::new(r))
    } else {
        None
    }
}

/// Pairs `u[i..=j]`; when the count is odd the last three form a triple.
fn pairs(g: &crate::graph::Digraph, u: &[usize], i: usize, j: usize) -> Option<Vec<Cycle>> {
    if j < i {
        return Some(Vec::new());
    }
    let n = j - i + 1;
    if n < 2 {
        return None;
    }
    let mut out = Vec::new();
    let mut s = i;
    let pair_end = if n % 2 == 1 { j - 3 } else { j };
    while s < pair_end {
        out.push(Cycle::from_rotation(vec![u[s - 1], u[s]]));
        s += 2;
    }
    if n % 2 == 1 {
        out.push(segment_cycle(g, u, j - 2, j)?);
    }
    Some(out)
}

/// `u` holds `u_1 .. u_l` with `u_l -> u_{l-2}`.
fn chain_groups(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View, u: &[usize]) -> Step {
    let g = v.g();
    let l = u.len();
    let p = v.p();
    if l < p + 4 {
        return Err(Dead::new("digon chain", format!("l={l} too short for p={p}")));
    }
    let lp = l - p;
    let mut xs = vec![1];
    xs.extend((5..=lp + 1).step_by(2));
    let u3 = u[2];
    let mut last = Dead::new("digon chain", "no arc between u_3 and X");
    for &i in &xs {
        let ui = u[i - 1];
        if !g.has_arc(u3, ui) && !g.has_arc(ui, u3) {
            continue;
        }
        let built = if i == lp + 1 {
            let mut group = pairs(g, u, lp + 2, l);
            if let Some(gr) = group.as_mut() {
                gr.push(Cycle::from_rotation(vec![u[0], u[1]]));
            }
            let rest = segment_cycle(g, u, 3, lp + 1).map(|c| vec![c]);
            group.zip(rest)
        } else if i == 1 {
            let group = pairs(g, u, lp, l);
            let rest = segment_cycle(g, u, 1, 3).and_then(|t| {
                let mut r = vec![t];
                r.extend(pairs(g, u, 4, lp - 1)?);
                Some(r)
            });
            group.zip(rest)
        } else {
            let group = pairs(g, u, lp, l);
            let rest = segment_cycle(g, u, 3, i).and_then(|s| {
                let mut r = vec![Cycle::from_rotation(vec![u[0], u[1]]), s];
                r.extend(pairs(g, u, i + 1, lp - 1)?);
                Some(r)
            });
            group.zip(rest)
        };
        let Some((group, mut rest)) = built else { continue };
        ctx.note(format!("digon chain i={i} l={l}"));
        rest.push(v.c.clone());
        match somme_cf(ctx, d, &v.cd, &group, &rest) {
            Ok(good) => return Ok(good),
            Err(e) => last = e,
        }
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{base_case, check_good, Ctx};
    use crate::tournament::{make_f4k, perturb, random_regular, shuffle_sides};
    use rand::SeedableRng;

    // The moves check their own patterns, so they may be tried on any good
    // factor; whatever they return must be a good factor one size up.
    #[test]
    fn forced_runs_only_return_good_factors() {
        let mut produced = 0;
        for seed in 0..60u64 {
            let k = 5 + (seed as usize % 3);
            let d0 = if seed % 2 == 0 {
                random_regular(k, seed)
            } else {
                perturb(&make_f4k(k).unwrap(), 8 * k, seed)
            };
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let d = shuffle_sides(&d0, &mut rng);
            for p in 3..k {
                let Some((c1, c2)) = base_case(&d, p) else { continue };
                for dir in [Direction::Up, Direction::Down] {
                    let mut ctx = Ctx::new(false);
                    if let Ok(g) = run(&mut ctx, &d, &c1, &c2, dir, 0) {
                        check_good(&d, &g, p + 1).unwrap();
                        produced += 1;
                    }
                }
            }
        }
        assert!(produced > 0);
    }
}
