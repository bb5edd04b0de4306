//! Switching a perfect matching along an anti-cycle of its contracted digraph.
//!
//! For an anti-cycle `u_1, ..., u_t` of `D^M` (no arc `u_i -> u_{i+1}`), the
//! host has the arcs `u_{i+1} -> M(u_i)`, so `M'(u_{i+1}) = M(u_i)` is again a
//! perfect matching and `N+(u_i)` moves to `u_{i+1}` in `D^{M'}`.

use std::fmt;

use crate::contraction::{ContractedDigraph, PerfectMatching};
use crate::cycle::{CycleError, CycleFactor};
use crate::graph::bit;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SwitchError {
    TooShort,
    NotInContraction { v: usize },
    Repeated { v: usize },
    Arc { from: usize, to: usize },
    Factor(CycleError),
}

impl fmt::Display for SwitchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SwitchError::TooShort => write!(f, "anti-cycle needs at least two vertices"),
            SwitchError::NotInContraction { v } => write!(f, "vertex {v} is not a contracted vertex"),
            SwitchError::Repeated { v } => write!(f, "vertex {v} repeated on anti-cycle"),
            SwitchError::Arc { from, to } => write!(f, "{from}->{to} is an arc, not an anti-arc"),
            SwitchError::Factor(e) => write!(f, "switched factor invalid: {e}"),
        }
    }
}

impl std::error::Error for SwitchError {}

/// Vertices `u_1, ..., u_t` with no arc `u_i -> u_{i+1}` (cyclically).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntiCycle(Vec<usize>);

impl AntiCycle {
    pub fn new(cd: &ContractedDigraph, vertices: Vec<usize>) -> Result<Self, SwitchError> {
        if vertices.len() < 2 {
            return Err(SwitchError::TooShort);
        }
        let mut seen = 0u64;
        for &v in &vertices {
            if cd.vertices() & bit(v) == 0 {
                return Err(SwitchError::NotInContraction { v });
            }
            if seen & bit(v) != 0 {
                return Err(SwitchError::Repeated { v });
            }
            seen |= bit(v);
        }
        let t = vertices.len();
        for i in 0..t {
            let (a, b) = (vertices[i], vertices[(i + 1) % t]);
            if cd.has_arc(a, b) {
                return Err(SwitchError::Arc { from: a, to: b });
            }
        }
        Ok(AntiCycle(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The vertex before `u_i`, cyclically.
    fn prev(&self, i: usize) -> usize {
        self.0[(i + self.0.len() - 1) % self.0.len()]
    }
}

/// `M'` with `M'(u_{i+1}) = M(u_i)`.
pub fn switch(cd: &ContractedDigraph, ac: &AntiCycle) -> PerfectMatching {
    let m = cd.matching();
    let updates: Vec<(usize, usize)> = (0..ac.len()).map(|i| (ac.0[i], m.partner(ac.prev(i)))).collect();
    m.with_partners(&updates)
}

/// `D^{M'}` obtained by moving each `N+(u_{i-1})` onto `u_i`.
pub fn switch_contracted(cd: &ContractedDigraph, ac: &AntiCycle) -> ContractedDigraph {
    let m = cd.matching();
    let partners: Vec<(usize, usize)> = (0..ac.len()).map(|i| (ac.0[i], m.partner(ac.prev(i)))).collect();
    let outs: Vec<(usize, u64)> = (0..ac.len())
        .map(|i| (ac.0[i], cd.digraph().out_set(ac.prev(i))))
        .collect();
    cd.with_updates(&partners, &outs)
}

/// Image of a factor of `D^M`: `succ'(u_i) = succ(u_{i-1})`, others unchanged.
pub fn switch_factor(
    cd: &ContractedDigraph,
    f: &CycleFactor,
    ac: &AntiCycle,
) -> Result<(ContractedDigraph, CycleFactor), SwitchError> {
    let next = switch_contracted(cd, ac);
    let n = cd.digraph().vertex_count();
    let mut succ = vec![usize::MAX; n];
    for c in &f.cycles {
        for (u, v) in c.arcs() {
            succ[u] = v;
        }
    }
    let old = succ.clone();
    for i in 0..ac.len() {
        succ[ac.0[i]] = old[ac.prev(i)];
    }
    let nf = CycleFactor::from_successors(&succ, f.vertex_set());
    nf.validate(next.digraph(), cd.vertices(), 1).map_err(SwitchError::Factor)?;
    Ok((next, nf))
}

/// Provenance line for a switch, written before the matching changes.
pub fn switch_log_line(cd: &ContractedDigraph, ac: &AntiCycle) -> String {
    let verts: Vec<String> = ac.0.iter().map(|v| v.to_string()).collect();
    let old: Vec<String> = ac.0.iter().map(|&u| format!("{u}>{}", cd.matching().partner(u))).collect();
    format!("switch t={} verts={} old={}", ac.len(), verts.join(","), old.join(","))
}
