//! Constructive search for a 2-cycle-factor with one cycle of length `2p`.
//!
//! `p = 2, 3` come from exhaustive search. Larger `p` are reached one step at
//! a time: a good factor at `p` is turned into one at `p + 1` by switching the
//! matching of a contracted digraph and merging the resulting cycles.

mod base;
mod case_a;
mod case_b;
mod case_c;
mod external;
mod fallback;
mod finish;
mod view;

pub use base::base_case;
pub use view::{detect_properties, FactorProperties};

use crate::certificate::{designated_half, Certificate};
use crate::cycle::Cycle;
use crate::error::{Error, Falsification, Result};
use crate::graph::members;
use crate::tournament::{find_f_witness, is_f_isomorphic, is_f_witness, FMode, RegularBipartiteTournament};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solved(Certificate),
    /// The instance is `F_{4k}`, which the theorem excludes.
    Excluded,
}

impl Outcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Outcome::Solved(c) => Some(c),
            Outcome::Excluded => None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Re-verify every intermediate factor of the induction chain.
    pub trace: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Extension steps performed.
    pub steps: usize,
    /// Steps where the case analysis dead-ended and the generic search finished.
    pub fallbacks: usize,
    /// Case taken at each step, e.g. `A`, `B`, `C`, `fallback`.
    pub routes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub outcome: Outcome,
    pub stats: SolveStats,
}

pub fn solve(d: &RegularBipartiteTournament, p: usize) -> Result<Outcome> {
    solve_with(d, p, &SolveOptions::default()).map(|r| r.outcome)
}

pub fn solve_with(d: &RegularBipartiteTournament, p: usize, opts: &SolveOptions) -> Result<Report> {
    let k = d.k();
    let max = (2 * k).saturating_sub(2);
    if p < 2 || p > max {
        return Err(Error::POutOfRange { p, k, max });
    }
    if is_f_isomorphic(d.digraph(), d.digraph().vertices(), FMode::F) {
        return Ok(Report {
            outcome: Outcome::Excluded,
            stats: SolveStats::default(),
        });
    }
    let q = designated_half(k, p);
    let mut ctx = Ctx::new(opts.trace);
    if q != p {
        ctx.note(format!("normalise p={p} -> {q}"));
    }
    let good = run(&mut ctx, d, q)?;
    let cert = Certificate::from_cycles(d, p, &good.first, &good.second, good.witness, ctx.log);
    Ok(Report {
        outcome: Outcome::Solved(cert),
        stats: ctx.stats,
    })
}

/// Result of [`extend_factor`].
#[derive(Clone, Debug)]
pub struct Extension {
    /// Cycle of length `2p + 2`.
    pub first: Cycle,
    pub second: Cycle,
    pub witness: Option<[usize; 4]>,
    pub stats: SolveStats,
    pub log: Vec<String>,
}

/// One extension step from a good factor `(c1, c2)` with `|c1| = 2p`,
/// `3 <= p < k`, to one with a `2p + 2` cycle.
pub fn extend_factor(d: &RegularBipartiteTournament, c1: &Cycle, c2: &Cycle) -> Result<Extension> {
    let p = c1.len() / 2;
    let k = d.k();
    if p < 3 || p >= k {
        return Err(Error::POutOfRange { p, k, max: k - 1 });
    }
    let mut ctx = Ctx::new(true);
    let cur = Good {
        first: c1.clone(),
        second: c2.clone(),
        witness: None,
    };
    check_good(d, &cur, p).map_err(|dead| falsified(&ctx, d, dead))?;
    let g = extend(&mut ctx, d, &cur, p)?;
    Ok(Extension {
        first: g.first,
        second: g.second,
        witness: g.witness,
        stats: ctx.stats,
        log: ctx.log,
    })
}

/// Good factor for `q`, by base search then repeated extension.
fn run(ctx: &mut Ctx, d: &RegularBipartiteTournament, q: usize) -> Result<Good> {
    if q <= 3 {
        return base_step(ctx, d, q);
    }
    let mut cur = base_step(ctx, d, 3)?;
    for p in 3..q {
        cur = extend(ctx, d, &cur, p)?;
        if ctx.trace {
            check_good(d, &cur, p + 1).map_err(|dead| falsified(ctx, d, dead))?;
            ctx.note(format!("trace p={} verified", p + 1));
        }
    }
    Ok(cur)
}

fn base_step(ctx: &mut Ctx, d: &RegularBipartiteTournament, q: usize) -> Result<Good> {
    match base_case(d, q) {
        Some((first, second)) => {
            ctx.note(format!("base p={q} cycle={:?}", first.vertices()));
            let witness = if q.is_multiple_of(2) && q >= 4 {
                find_f_witness(d.digraph(), first.vertex_set())
            } else {
                None
            };
            Ok(Good { first, second, witness })
        }
        None => Err(falsified(
            ctx,
            d,
            Dead::new("base", format!("no ({}, {}) factor found", 2 * q, d.vertex_count() - 2 * q)),
        )),
    }
}

/// Good factor at `p + 1` from one at `p`, for `3 <= p < k`.
fn extend(ctx: &mut Ctx, d: &RegularBipartiteTournament, cur: &Good, p: usize) -> Result<Good> {
    ctx.stats.steps += 1;
    ctx.note(format!("extend p={p}->{}", p + 1));
    let routes_before = ctx.stats.routes.len();
    let attempt = dispatch(ctx, d, &cur.first, &cur.second, 0).and_then(|g| check_good(d, &g, p + 1).map(|_| g));
    match attempt {
        Ok(g) => Ok(g),
        Err(dead) => {
            ctx.stats.routes.truncate(routes_before);
            ctx.note(format!("dead end at {}: {}", dead.stage, dead.detail));
            ctx.stats.fallbacks += 1;
            ctx.stats.routes.push("fallback".into());
            match fallback::search(ctx, d, &cur.first, &cur.second) {
                Some(g) if check_good(d, &g, p + 1).is_ok() => Ok(g),
                _ => Err(falsified(ctx, d, dead)),
            }
        }
    }
}

/// Routes a good factor `(c1, c2)` to the case that extends it.
pub(crate) fn dispatch(ctx: &mut Ctx, d: &RegularBipartiteTournament, c1: &Cycle, c2: &Cycle, depth: usize) -> Step {
    if depth > MAX_DEPTH {
        return Err(Dead::new("dispatch", "re-dispatch depth exceeded"));
    }
    let props = detect_properties(d, c1, c2).map_err(|e| Dead::new("properties", e))?;
    ctx.note(props.log_line());
    use crate::contraction::Direction::{Down, Up};
    let up = if props.p_up { Up } else { Down };
    let (q_up, q_down, p_down) = if props.p_up {
        (props.q_up, props.q_down, props.p_down)
    } else {
        (props.q_down, props.q_up, props.p_up)
    };
    if q_up {
        ctx.route("A");
        case_a::run(ctx, d, c1, c2, up, depth)
    } else if props.c2_is_f {
        ctx.route("B");
        case_b::run(ctx, d, c1, c2, depth)
    } else if !q_down {
        Err(Dead::new("dispatch", "no case applies: Q fails in both directions and C2 is not F"))
    } else if p_down {
        ctx.route("A");
        case_a::run(ctx, d, c1, c2, up.other(), depth)
    } else {
        ctx.route("C");
        case_c::run(ctx, d, c1, c2, up, depth)
    }
}

const MAX_DEPTH: usize = 6;

/// Mutable state of one solver run.
pub(crate) struct Ctx {
    pub log: Vec<String>,
    pub stats: SolveStats,
    pub trace: bool,
}

impl Ctx {
    pub(crate) fn new(trace: bool) -> Self {
        Ctx {
            log: Vec::new(),
            stats: SolveStats::default(),
            trace,
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.log.push(line.into());
    }

    fn route(&mut self, tag: &str) {
        self.note(format!("case {tag}"));
        self.stats.routes.push(tag.into());
    }
}

/// A branch of the case analysis that found nothing to do.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Dead {
    pub stage: String,
    pub detail: String,
}

impl Dead {
    pub fn new(stage: &str, detail: impl Into<String>) -> Self {
        Dead {
            stage: stage.into(),
            detail: detail.into(),
        }
    }
}

pub(crate) type Step<T = Good> = std::result::Result<T, Dead>;

/// A host 2-cycle-factor, `first` being the designated cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Good {
    pub first: Cycle,
    pub second: Cycle,
    pub witness: Option<[usize; 4]>,
}

impl Good {
    /// The same factor read in the arc-reversed host.
    pub fn reversed(self) -> Good {
        Good {
            first: reverse_cycle(&self.first),
            second: reverse_cycle(&self.second),
            witness: self.witness.map(|[a, b, c, d]| [d, c, b, a]),
        }
    }
}

pub(crate) fn reverse_cycle(c: &Cycle) -> Cycle {
    let mut v = c.vertices().to_vec();
    v.reverse();
    Cycle::new(v)
}

/// Checks lengths, validity and, for even `p1 >= 4`, `F`-avoidance.
pub(crate) fn check_good(d: &RegularBipartiteTournament, g: &Good, p1: usize) -> Step<()> {
    let host = d.digraph();
    let n = d.vertex_count();
    if g.first.len() != 2 * p1 || g.first.len() + g.second.len() != n {
        return Err(Dead::new(
            "check",
            format!("lengths {} + {} for p={p1}", g.first.len(), g.second.len()),
        ));
    }
    for c in [&g.first, &g.second] {
        c.validate(host, 4).map_err(|e| Dead::new("check", e.to_string()))?;
    }
    let (a, b) = (g.first.vertex_set(), g.second.vertex_set());
    if a & b != 0 || a | b != host.vertices() {
        return Err(Dead::new("check", "cycles overlap or miss vertices"));
    }
    if p1.is_multiple_of(2) && p1 >= 4 {
        if is_f_isomorphic(host, a, FMode::F) {
            return Err(Dead::new("check", format!("{}-cycle induces F", 2 * p1)));
        }
        if let Some(w) = g.witness {
            if !is_f_witness(host, a, w) {
                return Err(Dead::new("check", format!("witness {w:?} fails")));
            }
        }
    }
    Ok(())
}

fn falsified(ctx: &Ctx, d: &RegularBipartiteTournament, dead: Dead) -> Error {
    Error::Falsified(Box::new(Falsification {
        stage: dead.stage,
        detail: dead.detail,
        instance: d.to_text(),
        provenance: ctx.log.clone(),
    }))
}

/// Runs `f` on the arc-reversed host and maps its factor back.
pub(crate) fn mirrored(
    ctx: &mut Ctx,
    d: &RegularBipartiteTournament,
    c1: &Cycle,
    c2: &Cycle,
    f: impl FnOnce(&mut Ctx, &RegularBipartiteTournament, &Cycle, &Cycle) -> Step,
) -> Step {
    ctx.note("mirror: reverse all arcs");
    let dr = d.reversed();
    let g = f(ctx, &dr, &reverse_cycle(c1), &reverse_cycle(c2))?;
    ctx.note("mirror: back");
    Ok(g.reversed())
}

/// Vertex ids of a set, ascending, as a log-friendly string.
pub(crate) fn ids(set: u64) -> String {
    members(set).map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}
