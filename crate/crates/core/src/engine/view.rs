//! A good factor seen through the contraction of one of its matchings.

use super::{Dead, Step};
use crate::contraction::{contract, factor_matching, ContractedDigraph, Direction};
use crate::cycle::{Cycle, CycleFactor};
use crate::graph::{bit, find_anti_path, members, strong_components, Components, Digraph, VertexSet};
use crate::tournament::{is_f_isomorphic, FMode, RegularBipartiteTournament, Side};

/// `C = C_1^M` and `C' = C_2^M` inside `D^M`.
#[derive(Clone, Debug)]
pub(crate) struct View {
    pub cd: ContractedDigraph,
    pub c: Cycle,
    pub cp: Cycle,
}

impl View {
    pub fn new(d: &RegularBipartiteTournament, c1: &Cycle, c2: &Cycle, dir: Direction) -> Step<Self> {
        let f = CycleFactor::new(vec![c1.clone(), c2.clone()]);
        let m = factor_matching(d, &f, dir).map_err(|e| Dead::new("view", format!("{e:?}")))?;
        let cd = contract(d, &m).map_err(|e| Dead::new("view", format!("{e:?}")))?;
        let c = cd.contract_cycle(c1).ok_or_else(|| Dead::new("view", "first cycle does not contract"))?;
        let cp = cd.contract_cycle(c2).ok_or_else(|| Dead::new("view", "second cycle does not contract"))?;
        Ok(View { cd, c, cp })
    }

    pub fn dir(&self) -> Direction {
        self.cd.direction()
    }

    pub fn g(&self) -> &Digraph {
        self.cd.digraph()
    }

    pub fn cs(&self) -> VertexSet {
        self.c.vertex_set()
    }

    pub fn cps(&self) -> VertexSet {
        self.cp.vertex_set()
    }

    pub fn p(&self) -> usize {
        self.c.len()
    }

    pub fn anti_out_c(&self, u: usize) -> VertexSet {
        self.g().anti_out_set(u, self.cs())
    }

    pub fn anti_in_c(&self, u: usize) -> VertexSet {
        self.g().anti_in_set(u, self.cs())
    }

    pub fn anti_out_cp(&self, u: usize) -> VertexSet {
        self.g().anti_out_set(u, self.cps())
    }

    pub fn anti_in_cp(&self, u: usize) -> VertexSet {
        self.g().anti_in_set(u, self.cps())
    }

    /// Strong components of the complement of `D^M[C']`.
    pub fn comps_cp(&self) -> Components {
        strong_components(self.g(), self.cps(), true)
    }

    pub fn comps_c(&self) -> Components {
        strong_components(self.g(), self.cs(), true)
    }

    pub fn anti_path(&self, within: VertexSet, from: usize, to: usize) -> Option<Vec<usize>> {
        find_anti_path(self.g(), within, from, to)
    }

    /// Same matching, with `C'` replaced by another cycle on the same vertices.
    pub fn with_cp(&self, cp: Cycle) -> Step<Self> {
        if cp.vertex_set() != self.cps() {
            return Err(Dead::new("view", "replacement cycle spans other vertices"));
        }
        cp.validate(self.g(), 2).map_err(|e| Dead::new("view", e.to_string()))?;
        Ok(View {
            cd: self.cd.clone(),
            c: self.c.clone(),
            cp,
        })
    }

    /// Consecutive `u, succ(u)` on `C'` with an anti-arc from `u` into `C` and
    /// one from `C` into `succ(u)`.
    pub fn p_pairs(&self) -> Vec<(usize, usize)> {
        self.cp
            .vertices()
            .iter()
            .map(|&u| (u, self.cp.succ(u)))
            .filter(|&(u, v)| self.anti_out_c(u) != 0 && self.anti_in_c(v) != 0)
            .collect()
    }

    pub fn has_p(&self) -> bool {
        !self.p_pairs().is_empty()
    }

    /// Exactly one initial strong component in the complement of `D^M[C']`.
    pub fn has_q(&self) -> bool {
        self.comps_cp().initial().len() == 1
    }
}

/// The flags steering one extension step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorProperties {
    pub p_up: bool,
    pub p_down: bool,
    pub q_up: bool,
    pub q_down: bool,
    pub c2_is_f: bool,
}

impl FactorProperties {
    pub fn log_line(&self) -> String {
        let f = |b: bool| u8::from(b);
        format!(
            "props p_up={} p_down={} q_up={} q_down={} c2_f={}",
            f(self.p_up),
            f(self.p_down),
            f(self.q_up),
            f(self.q_down),
            f(self.c2_is_f)
        )
    }
}

/// Host form of `P`: an arc `uv` of `c2` leaving the non-source side with an
/// in-neighbour of `u` and an out-neighbour of `v` on `c1`.
fn p_host(d: &RegularBipartiteTournament, c1: &Cycle, c2: &Cycle, dir: Direction) -> bool {
    let g = d.digraph();
    let tail_side = d.side_set(match dir.source() {
        Side::S => Side::T,
        Side::T => Side::S,
    });
    let on1 = c1.vertex_set();
    c2.arcs()
        .any(|(u, v)| tail_side & bit(u) != 0 && g.in_set(u) & on1 != 0 && g.out_set(v) & on1 != 0)
}

/// Computes `P` and `Q` in both directions and checks the facts the case
/// analysis relies on. `Err` names the first fact that fails.
pub fn detect_properties(d: &RegularBipartiteTournament, c1: &Cycle, c2: &Cycle) -> Result<FactorProperties, String> {
    let up = View::new(d, c1, c2, Direction::Up).map_err(|e| e.detail)?;
    let down = View::new(d, c1, c2, Direction::Down).map_err(|e| e.detail)?;
    let props = FactorProperties {
        p_up: up.has_p(),
        p_down: down.has_p(),
        q_up: up.has_q(),
        q_down: down.has_q(),
        c2_is_f: is_f_isomorphic(d.digraph(), c2.vertex_set(), FMode::F),
    };
    for (v, flag) in [(&up, props.p_up), (&down, props.p_down)] {
        if p_host(d, c1, c2, v.dir()) != flag {
            return Err(format!("host and contracted forms of P disagree ({})", v.dir().tag()));
        }
    }
    if !(props.p_up || props.p_down) {
        return Err("neither P_up nor P_down holds".into());
    }
    if !(props.q_up || props.q_down || props.c2_is_f) {
        return Err("trichotomy fails: no Q and C2 is not F".into());
    }
    // without P in one direction, each C' vertex of the other contraction has
    // no arc into C or none out of C
    for (v, flag) in [(&up, props.p_down), (&down, props.p_up)] {
        if !flag {
            let g = v.g();
            let cs = v.cs();
            if let Some(x) = members(v.cps()).find(|&x| g.out_set(x) & cs != 0 && g.in_set(x) & cs != 0) {
                return Err(format!("vertex {x} has arcs both to and from C without P"));
            }
        }
    }
    Ok(props)
}
