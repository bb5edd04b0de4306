//! Generic search used when the case analysis dead-ends.
//!
//! Tries the finishing moves in every orientation, then short anti-cycle
//! switches with a free choice of group, then a direct search.

use super::base::base_case;
use super::external::any_external;
use super::finish::{any_t1, any_t2, good_from, select_group, somme_cf};
use super::view::View;
use super::{check_good, Ctx, Good};
use crate::contraction::Direction;
use crate::cycle::{Cycle, CycleFactor};
use crate::graph::members;
use crate::rewiring::{switch_factor, switch_log_line, AntiCycle};
use crate::tournament::RegularBipartiteTournament;

type Move = fn(&mut Ctx, &RegularBipartiteTournament, &View) -> super::Step;

const T1_LIMIT: usize = 64;
const SWITCH_LIMIT: usize = 4000;

pub(crate) fn search(ctx: &mut Ctx, d: &RegularBipartiteTournament, c1: &Cycle, c2: &Cycle) -> Option<Good> {
    let p1 = c1.len() / 2 + 1;
    let accept = |g: &Good| check_good(d, g, p1).is_ok();
    for dir in [Direction::Up, Direction::Down] {
        let Ok(v) = View::new(d, c1, c2, dir) else { continue };
        let tries: [(&str, Move); 3] = [
            ("insert", |ctx, d, v| any_t2(ctx, d, v)),
            ("anti-cycle", |ctx, d, v| any_t1(ctx, d, v, T1_LIMIT)),
            ("external", |ctx, d, v| any_external(ctx, d, v)),
        ];
        for (name, f) in tries {
            if let Ok(g) = f(ctx, d, &v) {
                if accept(&g) {
                    ctx.note(format!("fallback: {name} dir={}", dir.tag()));
                    return Some(g);
                }
            }
        }
    }
    for dir in [Direction::Up, Direction::Down] {
        let Ok(v) = View::new(d, c1, c2, dir) else { continue };
        if let Some(g) = short_switches(ctx, d, &v, p1).filter(|g| accept(g)) {
            ctx.note(format!("fallback: short switch dir={}", dir.tag()));
            return Some(g);
        }
    }
    let (first, second) = base_case(d, p1)?;
    let g = good_from(d, first, second);
    if accept(&g) {
        ctx.note("fallback: direct search");
        return Some(g);
    }
    None
}

/// Anti-digons and anti-triangles of `D^M`, each switched and regrouped.
fn short_switches(ctx: &mut Ctx, d: &RegularBipartiteTournament, v: &View, p1: usize) -> Option<Good> {
    let g = v.g();
    let all = v.cd.vertices();
    let f = CycleFactor::new(vec![v.c.clone(), v.cp.clone()]);
    let mut tried = 0usize;
    for a in members(all) {
        for b in members(g.anti_out_set(a, all)) {
            if b == a {
                continue;
            }
            let mut cands = Vec::new();
            if b > a && !g.has_arc(b, a) {
                cands.push(vec![a, b]);
            }
            for c in members(g.anti_out_set(b, all)) {
                if c > a && c != b && !g.has_arc(c, a) && b > a {
                    cands.push(vec![a, b, c]);
                }
            }
            for h in cands {
                tried += 1;
                if tried > SWITCH_LIMIT {
                    return None;
                }
                let Ok(ac) = AntiCycle::new(&v.cd, h) else { continue };
                let Ok((cd2, f2)) = switch_factor(&v.cd, &f, &ac) else { continue };
                let Some((group, rest)) = select_group(d, &cd2, &f2, p1) else { continue };
                if rest.is_empty() {
                    continue;
                }
                let line = switch_log_line(&v.cd, &ac);
                let mark = ctx.log.len();
                ctx.note(line);
                match somme_cf(ctx, d, &cd2, &group, &rest) {
                    Ok(good) => return Some(good),
                    Err(_) => ctx.log.truncate(mark),
                }
            }
        }
    }
    None
}
