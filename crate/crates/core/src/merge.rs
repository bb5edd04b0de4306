//! Collapsing a cycle-factor that contains a `2p`-cycle into a
//! `(2p, n - 2p)`-factor.
//!
//! The trailing cycles are first put in dominance order `C_1, ..., C_l`.
//! In `D^M` the long cycle `C` is then cut at a pair `y1, z1`: the path
//! `P = succ(y1)..z1` is closed through a monotone path `Q` that starts in
//! `C_1` and ends in `C_l`, and `P' = succ(z1)..y1` through the complementary
//! monotone path `Q'`. Every cycle `C_j` gives a contiguous arc to `Q` and
//! the rest to `Q'`, so only the four splice arcs need checking.

use std::fmt;

use crate::contraction::{contract, factor_matching, ContractedDigraph, Direction};
use crate::cycle::{Cycle, CycleFactor};
use crate::engine::base_case;
use crate::factor::{hm_normalize, HmOutcome};
use crate::graph::{count, Digraph, VertexSet};
use crate::tournament::{find_f_witness, is_f_isomorphic, is_f_witness, FMode, RegularBipartiteTournament, Side};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MergeError {
    Precondition(String),
    Construction(String),
}

impl fmt::Display for MergeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MergeError::Precondition(s) => write!(f, "merge precondition: {s}"),
            MergeError::Construction(s) => write!(f, "merge construction failed: {s}"),
        }
    }
}

impl std::error::Error for MergeError {}

/// White pairs (well connected to `C_1`) and red pairs (well connected from
/// `C_l`) of the contracted long cycle, each stored as `(min, max)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrAnalysis {
    pub white: Vec<(usize, usize)>,
    pub red: Vec<(usize, usize)>,
}

impl WrAnalysis {
    pub fn w(&self) -> usize {
        self.white.len()
    }

    pub fn r(&self) -> usize {
        self.red.len()
    }

    pub fn is_white(&self, a: usize, b: usize) -> bool {
        self.white.contains(&(a.min(b), a.max(b)))
    }

    pub fn is_red(&self, a: usize, b: usize) -> bool {
        self.red.contains(&(a.min(b), a.max(b)))
    }
}

pub fn compute_wr(cd: &Digraph, c: &Cycle, c1: &Cycle, cl: &Cycle) -> WrAnalysis {
    let (s1, sl) = (c1.vertex_set(), cl.vertex_set());
    let to1 = |x: usize| count(cd.out_set(x) & s1);
    let from_l = |x: usize| count(cd.in_set(x) & sl);
    let mut vs = c.vertices().to_vec();
    vs.sort_unstable();
    let mut white = Vec::new();
    let mut red = Vec::new();
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            if to1(a) + to1(b) > c1.len() {
                white.push((a, b));
            }
            if from_l(a) + from_l(b) > cl.len() {
                red.push((a, b));
            }
        }
    }
    WrAnalysis { white, red }
}

/// Every pair that is white and whose pair of successors on `c` is red.
pub fn bicolored_pairs(wr: &WrAnalysis, c: &Cycle) -> Vec<(usize, usize)> {
    wr.white
        .iter()
        .copied()
        .filter(|&(a, b)| wr.is_red(c.succ(a), c.succ(b)))
        .collect()
}

pub fn find_bicolored_pair(wr: &WrAnalysis, c: &Cycle) -> Option<(usize, usize)> {
    bicolored_pairs(wr, c).into_iter().next()
}

/// Checks `e(C, C_1) = c_1(2k - c_1)` and `e(C_l, C) = c_l(2k - c_l)` in the
/// host, where `c_i` counts the `S`-vertices of `C_i`.
pub fn arc_count_identity_check(d: &RegularBipartiteTournament, c: &Cycle, ordered: &[Cycle]) -> Result<(), String> {
    let (Some(first), Some(last)) = (ordered.first(), ordered.last()) else {
        return Err("no trailing cycles".into());
    };
    let k = d.k();
    let g = d.digraph();
    let half = |x: &Cycle| x.len() / 2;
    let e1 = g.arcs_between(c.vertex_set(), first.vertex_set());
    let el = g.arcs_between(last.vertex_set(), c.vertex_set());
    let (c1, cl) = (half(first), half(last));
    if c1 >= 2 * k || cl >= 2 * k {
        return Err("trailing cycle covers a whole side".into());
    }
    if e1 != c1 * (2 * k - c1) {
        return Err(format!("e(C,C_1)={e1}, expected {}", c1 * (2 * k - c1)));
    }
    if el != cl * (2 * k - cl) {
        return Err(format!("e(C_l,C)={el}, expected {}", cl * (2 * k - cl)));
    }
    Ok(())
}

/// Compares the two weighted sums and returns the matching direction whose
/// contraction carries the larger one (ties give `Up`), with both sums scaled
/// by `c_1 * c_l`.
pub fn choose_direction(d: &RegularBipartiteTournament, c: &Cycle, c1: &Cycle, cl: &Cycle) -> (Direction, usize, usize) {
    let g = d.digraph();
    let (n1, nl) = (c1.len() / 2, cl.len() / 2);
    let score = |side: VertexSet| {
        let from_l = g.arcs_between(cl.vertex_set() & side, c.vertex_set());
        let to_1 = g.arcs_between(c.vertex_set() & side, c1.vertex_set());
        from_l * n1 + to_1 * nl
    };
    // arcs leaving T-vertices land on S, the side `D^M` lives on for `Up`
    let up = score(d.side_set(Side::T));
    let down = score(d.side_set(Side::S));
    (if up >= down { Direction::Up } else { Direction::Down }, up, down)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// The pair is white and red and the split follows the index `i0`.
    Bicolored,
    /// Found by scanning every pair and every split.
    Scan,
}

/// The choices fixing one merge, all in contracted ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergePlan {
    pub direction: Direction,
    pub route: Route,
    pub y1: usize,
    pub z1: usize,
    pub yl: usize,
    pub zl: usize,
    /// Vertices on `succ(y1)..z1`.
    pub s: usize,
    /// Smallest `j` with `s + c_1 + ... + c_j > p`, one-based.
    pub i0: usize,
    pub y: usize,
    pub z: usize,
    pub y_last: usize,
    pub z_last: usize,
    /// Vertices each trailing cycle gives to `Q`.
    pub parts: Vec<usize>,
}

impl MergePlan {
    pub fn log_line(&self) -> String {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        format!(
            "merge dir={} route={} y1={} z1={} s={} i0={} y={} z={} y'={} z'={} parts={}",
            self.direction.tag(),
            match self.route {
                Route::Bicolored => "bicolored",
                Route::Scan => "scan",
            },
            self.y1,
            self.z1,
            self.s,
            self.i0,
            self.y,
            self.z,
            self.y_last,
            self.z_last,
            parts.join(",")
        )
    }
}

/// `(2p, n - 2p)` factor with the first cycle's witness against `F_{2p}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeOutcome {
    pub first: Cycle,
    pub second: Cycle,
    pub witness: Option<[usize; 4]>,
    pub plan: Option<MergePlan>,
    pub log: Vec<String>,
}

/// `y, z` on `c1` with `z1 -> y`, `y1 -> z` and `z` exactly `a1` steps after `y`.
pub fn select_first_splice(cd: &Digraph, c1: &Cycle, y1: usize, z1: usize, a1: usize) -> Option<(usize, usize)> {
    c1.vertices().iter().copied().find_map(|y| {
        let z = c1.walk(y, a1)[a1];
        (z != y && cd.has_arc(z1, y) && cd.has_arc(y1, z)).then_some((y, z))
    })
}

/// `y', z'` on `cl` with `y' -> yl`, `z' -> zl` and `y'` exactly `al` steps
/// after `z'`.
pub fn select_last_splice(cd: &Digraph, cl: &Cycle, yl: usize, zl: usize, al: usize) -> Option<(usize, usize)> {
    cl.vertices().iter().copied().find_map(|zp| {
        let yp = cl.walk(zp, al)[al];
        (yp != zp && cd.has_arc(yp, yl) && cd.has_arc(zp, zl)).then_some((yp, zp))
    })
}

/// Smallest one-based `j` with `s + c_1 + ... + c_j > p`.
fn first_index(s: usize, p: usize, lens: &[usize]) -> usize {
    let mut acc = s;
    for (j, &c) in lens.iter().enumerate() {
        acc += c;
        if acc > p {
            return j + 1;
        }
    }
    lens.len()
}

/// Candidate `(a1, al)` for `Q`, the split along `i0` first.
fn splits(s: usize, p: usize, lens: &[usize]) -> Vec<(usize, usize)> {
    let l = lens.len();
    let (c1, cl) = (lens[0], lens[l - 1]);
    let mid: usize = lens[1..l - 1].iter().sum();
    let need = p.saturating_sub(s);
    let i0 = first_index(s, p, lens);
    let preferred = if i0 == 1 {
        (need.saturating_sub(1), 1)
    } else if i0 < l {
        (c1 - 1, 1)
    } else {
        (c1 - 1, need.saturating_sub(c1 - 1 + mid))
    };
    let ok = |(a1, al): (usize, usize)| {
        (1..c1).contains(&a1) && (1..cl).contains(&al) && a1 + al <= need && need - a1 - al <= mid
    };
    let mut out = Vec::new();
    if ok(preferred) {
        out.push(preferred);
    }
    for a1 in 1..c1 {
        for al in 1..cl {
            if ok((a1, al)) && (a1, al) != preferred {
                out.push((a1, al));
            }
        }
    }
    out
}

/// Builds `gamma, gamma'` for the cut at `(y1, z1)`, if some split works.
fn try_pair(
    cd: &Digraph,
    c: &Cycle,
    cs: &[Cycle],
    y1: usize,
    z1: usize,
    direction: Direction,
    route: Route,
) -> Option<(MergePlan, Vec<usize>, Vec<usize>)> {
    let p = c.len();
    let l = cs.len();
    let lens: Vec<usize> = cs.iter().map(Cycle::len).collect();
    let (yl, zl) = (c.succ(y1), c.succ(z1));
    let path = c.segment(yl, z1);
    let path2 = c.segment(zl, y1);
    let s = path.len();
    debug_assert_eq!(s + path2.len(), p);
    for (a1, al) in splits(s, p, &lens) {
        let Some((y, z)) = select_first_splice(cd, &cs[0], y1, z1, a1) else {
            continue;
        };
        let Some((yp, zp)) = select_last_splice(cd, &cs[l - 1], yl, zl, al) else {
            continue;
        };
        let mut rest = p - s - a1 - al;
        let mut parts = vec![a1];
        let mut q = c1_part(&cs[0], y, a1);
        let mut q2 = c1_part(&cs[0], z, lens[0] - a1);
        for cyc in &cs[1..l - 1] {
            let t = rest.min(cyc.len());
            rest -= t;
            parts.push(t);
            q.extend_from_slice(&cyc.vertices()[..t]);
            q2.extend_from_slice(&cyc.vertices()[t..]);
        }
        parts.push(al);
        let start = cs[l - 1].walk(zp, 1)[1];
        q.extend(cs[l - 1].segment(start, yp));
        q2.extend(cs[l - 1].segment(cs[l - 1].succ(yp), zp));
        assert_eq!(rest, 0);
        assert_eq!(s + parts.iter().sum::<usize>(), p, "gamma must have p vertices");
        let mut gamma = path.clone();
        gamma.extend(q);
        let mut gamma2 = path2.clone();
        gamma2.extend(q2);
        let plan = MergePlan {
            direction,
            route,
            y1,
            z1,
            yl,
            zl,
            s,
            i0: first_index(s, p, &lens),
            y,
            z,
            y_last: yp,
            z_last: zp,
            parts,
        };
        return Some((plan, gamma, gamma2));
    }
    None
}

fn c1_part(c: &Cycle, from: usize, len: usize) -> Vec<usize> {
    if len == 0 {
        return Vec::new();
    }
    c.walk(from, len - 1)
}

fn merge_in_direction(
    d: &RegularBipartiteTournament,
    c: &Cycle,
    ordered: &[Cycle],
    direction: Direction,
    scan: bool,
) -> Result<Option<(MergePlan, Cycle, Cycle, ContractedDigraph)>, MergeError> {
    let mut all = vec![c.clone()];
    all.extend(ordered.iter().cloned());
    let f = CycleFactor::new(all);
    let m = factor_matching(d, &f, direction).map_err(|e| MergeError::Construction(e.to_string()))?;
    let cd = contract(d, &m).map_err(|e| MergeError::Construction(e.to_string()))?;
    let contracted = |x: &Cycle| {
        cd.contract_cycle(x)
            .ok_or_else(|| MergeError::Construction(format!("{x:?} does not alternate with the matching")))
    };
    let cm = contracted(c)?;
    let cs: Vec<Cycle> = ordered.iter().map(contracted).collect::<Result<_, _>>()?;
    let g = cd.digraph();
    let candidates: Vec<(usize, usize, Route)> = if scan {
        let vs = cm.vertices();
        vs.iter()
            .flat_map(|&a| vs.iter().map(move |&b| (a, b, Route::Scan)))
            .filter(|&(a, b, _)| a != b)
            .collect()
    } else {
        let wr = compute_wr(g, &cm, &cs[0], &cs[cs.len() - 1]);
        let mut v = Vec::new();
        for (a, b) in bicolored_pairs(&wr, &cm) {
            // orient so that succ(y1)..z1 is the shorter side
            let s = cm.segment(cm.succ(a), b).len();
            if 2 * s <= cm.len() {
                v.push((a, b, Route::Bicolored));
                v.push((b, a, Route::Bicolored));
            } else {
                v.push((b, a, Route::Bicolored));
                v.push((a, b, Route::Bicolored));
            }
        }
        v
    };
    for (y1, z1, route) in candidates {
        if let Some((plan, gamma, gamma2)) = try_pair(g, &cm, &cs, y1, z1, direction, route) {
            let lift = |v: Vec<usize>| {
                cd.lift(&Cycle::from_rotation(v))
                    .map_err(|e| MergeError::Construction(format!("spliced cycle invalid: {e}")))
            };
            let first = lift(gamma)?;
            let second = lift(gamma2)?;
            return Ok(Some((plan, first, second, cd)));
        }
    }
    Ok(None)
}

/// Turns a spanning factor `f` containing the `2p`-cycle `c` into a
/// `(2p, n - 2p)` factor whose first cycle is not `F_{2p}` when `p >= 4` is
/// even.
pub fn merge_to_two_factor(d: &RegularBipartiteTournament, f: &CycleFactor, c: &Cycle) -> Result<MergeOutcome, MergeError> {
    let g = d.digraph();
    let n = d.vertex_count();
    f.validate(g, g.vertices(), 4)
        .map_err(|e| MergeError::Precondition(format!("factor invalid: {e}")))?;
    let Some(ci) = f.cycles.iter().position(|x| x == c) else {
        return Err(MergeError::Precondition("cycle not in factor".into()));
    };
    let p = c.len() / 2;
    if p < 2 || n - 2 * p < 4 {
        return Err(MergeError::Precondition(format!("cycle length {} leaves no room", c.len())));
    }
    let cset = c.vertex_set();
    let even = p.is_multiple_of(2) && p >= 4;
    if even && is_f_isomorphic(g, cset, FMode::F) {
        return Err(MergeError::Precondition("long cycle induces F".into()));
    }
    let rest: Vec<Cycle> = f.cycles.iter().enumerate().filter(|&(i, _)| i != ci).map(|(_, x)| x.clone()).collect();
    let ground = g.vertices() & !cset;
    let mut log = Vec::new();
    let ordered = match hm_normalize(g, ground, &CycleFactor::new(rest)).map_err(|e| MergeError::Construction(e.to_string()))? {
        HmOutcome::Hamiltonian(h) => {
            log.push(format!("merge trailing cycles joined into one of length {}", h.len()));
            let witness = if even { find_f_witness(g, cset) } else { None };
            return Ok(MergeOutcome { first: c.clone(), second: h, witness, plan: None, log });
        }
        HmOutcome::Ordered(o) => o.cycles,
    };
    arc_count_identity_check(d, c, &ordered).map_err(MergeError::Construction)?;
    let (preferred, up, down) = choose_direction(d, c, &ordered[0], &ordered[ordered.len() - 1]);
    log.push(format!("merge ordered l={} sums up={up} down={down}", ordered.len()));
    for (direction, scan) in [
        (preferred, false),
        (preferred, true),
        (preferred.other(), false),
        (preferred.other(), true),
    ] {
        let Some((plan, first, second, cd)) = merge_in_direction(d, c, &ordered, direction, scan)? else {
            continue;
        };
        log.push(plan.log_line());
        let fset = first.vertex_set();
        let m = cd.matching();
        let witness = [plan.y, m.partner(plan.y), plan.y_last, m.partner(plan.y_last)];
        if !is_f_witness(g, fset, witness) {
            return Err(MergeError::Construction(format!("splice witness {witness:?} fails")));
        }
        if first.len() != 2 * p || first.len() + second.len() != n || fset & second.vertex_set() != 0 {
            return Err(MergeError::Construction("wrong cycle lengths".into()));
        }
        if even && is_f_isomorphic(g, fset, FMode::F) {
            return Err(MergeError::Construction("merged cycle induces F".into()));
        }
        return Ok(MergeOutcome {
            first: Cycle::new(first.into_vertices()),
            second: Cycle::new(second.into_vertices()),
            witness: if even { Some(witness) } else { None },
            plan: Some(plan),
            log,
        });
    }
    // p = 2 always has s = 1 and leaves no vertex for a split; small p goes
    // through the base-case search instead
    if p <= 3 {
        if let Some((first, second)) = base_case(d, p) {
            log.push(format!("merge base case p={p}"));
            return Ok(MergeOutcome { first, second, witness: None, plan: None, log });
        }
    }
    Err(MergeError::Construction(format!(
        "no splice found for p={p} with {} trailing cycles",
        ordered.len()
    )))
}
