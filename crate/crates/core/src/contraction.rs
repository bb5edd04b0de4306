//! Perfect matchings between the sides and the contracted digraph `D^M`.
//!
//! For a matching `M` oriented from side `X` to side `Y`, `D^M` lives on `X`
//! and has an arc `u -> v` iff `M(u) -> v` in the host. A cycle
//! `u_1, ..., u_t` of `D^M` is exactly the host cycle
//! `u_1, M(u_1), ..., u_t, M(u_t)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cycle::{Cycle, CycleError, CycleFactor};
use crate::graph::{bit, members, Digraph, VertexSet};
use crate::tournament::{RegularBipartiteTournament, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Matching arcs go from `S` to `T`.
    Up,
    /// Matching arcs go from `T` to `S`.
    Down,
}

impl Direction {
    pub fn source(self) -> Side {
        match self {
            Direction::Up => Side::S,
            Direction::Down => Side::T,
        }
    }

    pub fn other(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
        }
    }
}

const UNMATCHED: usize = usize::MAX;

/// A perfect matching using host arcs of one direction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PerfectMatching {
    direction: Direction,
    partner: Vec<usize>,
    source: VertexSet,
}

impl fmt::Debug for PerfectMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.direction.tag(), self.pairs_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchingError {
    NotAnArc { from: usize, to: usize },
    WrongSide { v: usize },
    NotBijective { v: usize },
    Mismatch,
}

impl fmt::Display for MatchingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingError::NotAnArc { from, to } => write!(f, "matched pair {from}>{to} is not a host arc"),
            MatchingError::WrongSide { v } => write!(f, "vertex {v} is on the wrong side"),
            MatchingError::NotBijective { v } => write!(f, "vertex {v} matched twice or not at all"),
            MatchingError::Mismatch => write!(f, "matching does not belong to this tournament"),
        }
    }
}

impl std::error::Error for MatchingError {}

impl PerfectMatching {
    /// Builds and validates a matching from `(source, target)` pairs.
    pub fn from_pairs(
        d: &RegularBipartiteTournament,
        direction: Direction,
        pairs: &[(usize, usize)],
    ) -> Result<Self, MatchingError> {
        let n = d.vertex_count();
        let source = d.side_set(direction.source());
        let mut partner = vec![UNMATCHED; n];
        let mut hit = 0u64;
        for &(u, v) in pairs {
            if u >= n || v >= n || source & bit(u) == 0 || source & bit(v) != 0 {
                return Err(MatchingError::WrongSide { v: if u < n && source & bit(u) != 0 { v } else { u } });
            }
            if partner[u] != UNMATCHED || hit & bit(v) != 0 {
                return Err(MatchingError::NotBijective { v: u });
            }
            if !d.has_arc(u, v) {
                return Err(MatchingError::NotAnArc { from: u, to: v });
            }
            partner[u] = v;
            hit |= bit(v);
        }
        if let Some(u) = members(source).find(|&u| partner[u] == UNMATCHED) {
            return Err(MatchingError::NotBijective { v: u });
        }
        Ok(PerfectMatching { direction, partner, source })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn source(&self) -> VertexSet {
        self.source
    }

    /// `M(u)` for a source vertex `u`.
    pub fn partner(&self, u: usize) -> usize {
        let v = self.partner[u];
        assert!(v != UNMATCHED, "{u} is not a source vertex of this matching");
        v
    }

    /// The source vertex matched to target `v`.
    pub fn inverse(&self, v: usize) -> usize {
        self.partner
            .iter()
            .position(|&w| w == v)
            .expect("target vertex not matched")
    }

    /// Ascending `(u, M(u))` pairs.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        members(self.source).map(|u| (u, self.partner[u])).collect()
    }

    /// `"u>v"` pairs in ascending `u`, space separated.
    pub fn pairs_string(&self) -> String {
        self.pairs()
            .iter()
            .map(|(u, v)| format!("{u}>{v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn validate(&self, d: &RegularBipartiteTournament) -> Result<(), MatchingError> {
        Self::from_pairs(d, self.direction, &self.pairs()).map(|_| ())
    }

    pub(crate) fn with_partners(&self, updates: &[(usize, usize)]) -> Self {
        let mut m = self.clone();
        for &(u, v) in updates {
            m.partner[u] = v;
        }
        m
    }
}

/// Perfect matching by augmenting paths after a greedy pass, ascending ids.
pub fn find_matching(d: &RegularBipartiteTournament, direction: Direction) -> PerfectMatching {
    let n = d.vertex_count();
    let source = d.side_set(direction.source());
    let g = d.digraph();
    let mut partner = vec![UNMATCHED; n];
    let mut owner = vec![UNMATCHED; n];
    for u in members(source) {
        if let Some(v) = members(g.out_set(u)).find(|&v| owner[v] == UNMATCHED) {
            partner[u] = v;
            owner[v] = u;
        }
    }
    fn augment(g: &Digraph, u: usize, seen: &mut u64, partner: &mut [usize], owner: &mut [usize]) -> bool {
        for v in members(g.out_set(u)) {
            if *seen & bit(v) != 0 {
                continue;
            }
            *seen |= bit(v);
            if owner[v] == UNMATCHED || augment(g, owner[v], seen, partner, owner) {
                partner[u] = v;
                owner[v] = u;
                return true;
            }
        }
        false
    }
    for u in members(source) {
        if partner[u] == UNMATCHED {
            let mut seen = 0;
            let ok = augment(g, u, &mut seen, &mut partner, &mut owner);
            assert!(ok, "Hall's condition failed on a regular bipartite tournament: invariant bug");
        }
    }
    let m = PerfectMatching { direction, partner, source };
    debug_assert!(m.validate(d).is_ok());
    m
}

/// `D^M`: the contracted digraph on the matching's source side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractedDigraph {
    matching: PerfectMatching,
    digraph: Digraph,
    /// Source vertex matched to each target vertex.
    inverse: Vec<usize>,
}

impl ContractedDigraph {
    pub fn matching(&self) -> &PerfectMatching {
        &self.matching
    }

    /// Arcs only among source vertices, in host ids.
    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn vertices(&self) -> VertexSet {
        self.matching.source
    }

    pub fn direction(&self) -> Direction {
        self.matching.direction
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.digraph.has_arc(u, v)
    }

    pub fn has_anti_arc(&self, u: usize, v: usize) -> bool {
        self.digraph.has_anti_arc(u, v)
    }

    /// Source vertex matched to host target `t`.
    pub fn matched_source(&self, t: usize) -> usize {
        self.inverse[t]
    }

    /// Same contraction with the listed out-neighbourhoods and partners replaced.
    pub(crate) fn with_updates(&self, partners: &[(usize, usize)], outs: &[(usize, VertexSet)]) -> Self {
        let matching = self.matching.with_partners(partners);
        let mut digraph = self.digraph.clone();
        for &(u, out) in outs {
            for v in members(digraph.out_set(u)) {
                digraph.remove_arc(u, v);
            }
            for v in members(out) {
                digraph.add_arc(u, v);
            }
        }
        let mut inverse = self.inverse.clone();
        for &(u, t) in partners {
            inverse[t] = u;
        }
        ContractedDigraph { matching, digraph, inverse }
    }

    /// Host cycle `u_1, M(u_1), ..., u_t, M(u_t)`.
    pub fn lift(&self, c: &Cycle) -> Result<Cycle, CycleError> {
        c.validate(&self.digraph, 2)?;
        let host: Vec<usize> = c
            .vertices()
            .iter()
            .flat_map(|&u| [u, self.matching.partner(u)])
            .collect();
        Ok(Cycle::new(host))
    }

    pub fn lift_factor(&self, f: &CycleFactor) -> Result<CycleFactor, CycleError> {
        f.cycles.iter().map(|c| self.lift(c)).collect::<Result<Vec<_>, _>>().map(CycleFactor::new)
    }

    /// Contracts a host cycle alternating source vertices and their partners.
    pub fn contract_cycle(&self, host: &Cycle) -> Option<Cycle> {
        let vs = host.vertices();
        let start = vs.iter().position(|&v| self.matching.source & bit(v) != 0)?;
        let rot: Vec<usize> = host.rotated_to(vs[start]);
        let mut out = Vec::with_capacity(rot.len() / 2);
        for pair in rot.chunks(2) {
            if pair.len() != 2 || self.matching.source & bit(pair[0]) == 0 || self.matching.partner(pair[0]) != pair[1] {
                return None;
            }
            out.push(pair[0]);
        }
        Some(Cycle::new(out))
    }

    pub fn contract_factor(&self, host: &CycleFactor) -> Option<CycleFactor> {
        host.cycles
            .iter()
            .map(|c| self.contract_cycle(c))
            .collect::<Option<Vec<_>>>()
            .map(CycleFactor::new)
    }
}

pub fn contract(d: &RegularBipartiteTournament, m: &PerfectMatching) -> Result<ContractedDigraph, MatchingError> {
    m.validate(d).map_err(|_| MatchingError::Mismatch)?;
    let g = d.digraph();
    let mut cd = Digraph::new(d.vertex_count());
    let mut inverse = vec![UNMATCHED; d.vertex_count()];
    for u in members(m.source) {
        let t = m.partner(u);
        inverse[t] = u;
        for v in members(g.out_set(t)) {
            cd.add_arc(u, v);
        }
    }
    Ok(ContractedDigraph {
        matching: m.clone(),
        digraph: cd,
        inverse,
    })
}

/// The matching formed by the factor arcs leaving `direction`'s source side.
pub fn factor_matching(
    d: &RegularBipartiteTournament,
    f: &CycleFactor,
    direction: Direction,
) -> Result<PerfectMatching, MatchingError> {
    let source = d.side_set(direction.source());
    let pairs: Vec<(usize, usize)> = f
        .cycles
        .iter()
        .flat_map(|c| c.arcs().collect::<Vec<_>>())
        .filter(|&(u, _)| source & bit(u) != 0)
        .collect();
    PerfectMatching::from_pairs(d, direction, &pairs)
}

/// `(M_u, M_d)` of a spanning host factor.
pub fn factor_matchings(
    d: &RegularBipartiteTournament,
    f: &CycleFactor,
) -> Result<(PerfectMatching, PerfectMatching), CycleError> {
    f.validate(d.digraph(), d.digraph().vertices(), 4)?;
    let up = factor_matching(d, f, Direction::Up).expect("spanning factor yields a matching");
    let down = factor_matching(d, f, Direction::Down).expect("spanning factor yields a matching");
    Ok((up, down))
}
