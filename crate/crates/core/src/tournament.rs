//! Regular bipartite tournaments: validation, the extremal family `F_{4k}`,
//! seeded generators and the text instance format.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

use crate::graph::{bit, count, full, members, Digraph, VertexSet};
use crate::error::ParseError;

/// First violated invariant of a candidate regular bipartite tournament.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Sides must both have `2k` vertices for some `k >= 1`.
    SideSizes { s: usize, t: usize },
    /// The vertex count does not match the side lists.
    VertexCount { expected: usize, found: usize },
    SelfLoop { v: usize },
    ArcWithinSide { u: usize, v: usize },
    /// Cross pair with no arc, or arcs both ways.
    NotOriented { u: usize, v: usize },
    OutDegree { v: usize, found: usize, expected: usize },
    InDegree { v: usize, found: usize, expected: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SideSizes { s, t } => write!(f, "side sizes: |S|={s}, |T|={t}"),
            Violation::VertexCount { expected, found } => {
                write!(f, "vertex count: expected {expected}, found {found}")
            }
            Violation::SelfLoop { v } => write!(f, "self-loop at {v}"),
            Violation::ArcWithinSide { u, v } => write!(f, "arc within a side: {u}->{v}"),
            Violation::NotOriented { u, v } => {
                write!(f, "pair {u},{v} is not oriented exactly once")
            }
            Violation::OutDegree { v, found, expected } => {
                write!(f, "out-degree \u{2260} k at {v}: {found} (k={expected})")
            }
            Violation::InDegree { v, found, expected } => {
                write!(f, "in-degree \u{2260} k at {v}: {found} (k={expected})")
            }
        }
    }
}

impl std::error::Error for Violation {}

/// Checks every invariant of a `k`-regular bipartite tournament with the given sides.
pub fn validate(side_s: &[usize], side_t: &[usize], d: &Digraph) -> Result<(), Violation> {
    let (s, t) = (side_s.len(), side_t.len());
    if s != t || s == 0 || s % 2 != 0 {
        return Err(Violation::SideSizes { s, t });
    }
    if d.vertex_count() != s + t {
        return Err(Violation::VertexCount {
            expected: s + t,
            found: d.vertex_count(),
        });
    }
    let k = s / 2;
    for v in 0..d.vertex_count() {
        if d.has_arc(v, v) {
            return Err(Violation::SelfLoop { v });
        }
    }
    for side in [side_s, side_t] {
        for &u in side {
            for &v in side {
                if u != v && d.has_arc(u, v) {
                    return Err(Violation::ArcWithinSide { u, v });
                }
            }
        }
    }
    for &u in side_s {
        for &v in side_t {
            if d.has_arc(u, v) == d.has_arc(v, u) {
                return Err(Violation::NotOriented { u, v });
            }
        }
    }
    for v in 0..d.vertex_count() {
        let found = d.out_degree(v);
        if found != k {
            return Err(Violation::OutDegree { v, found, expected: k });
        }
        let found = d.in_degree(v);
        if found != k {
            return Err(Violation::InDegree { v, found, expected: k });
        }
    }
    Ok(())
}

/// A `k`-regular orientation of `K_{2k,2k}`.
///
/// Vertices `0..2k` form side `S`, vertices `2k..4k` form side `T`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RegularBipartiteTournament {
    k: usize,
    digraph: Digraph,
}

impl fmt::Debug for RegularBipartiteTournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    S,
    T,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::S => Side::T,
            Side::T => Side::S,
        }
    }
}

impl RegularBipartiteTournament {
    pub fn new(k: usize, digraph: Digraph) -> Result<Self, Violation> {
        let s: Vec<usize> = (0..2 * k).collect();
        let t: Vec<usize> = (2 * k..4 * k).collect();
        validate(&s, &t, &digraph)?;
        Ok(RegularBipartiteTournament { k, digraph })
    }

    /// `rows[i][j]` is true iff `s_i -> t_j`.
    pub fn from_matrix(k: usize, rows: &[Vec<bool>]) -> Result<Self, Violation> {
        let n = 2 * k;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Violation::SideSizes {
                s: rows.len(),
                t: rows.first().map_or(0, Vec::len),
            });
        }
        let mut d = Digraph::new(2 * n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                if b {
                    d.add_arc(i, n + j);
                } else {
                    d.add_arc(n + j, i);
                }
            }
        }
        Self::new(k, d)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        4 * self.k
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn side_set(&self, side: Side) -> VertexSet {
        let n = 2 * self.k;
        match side {
            Side::S => full(n),
            Side::T => full(2 * n) & !full(n),
        }
    }

    pub fn side_of(&self, v: usize) -> Side {
        if v < 2 * self.k {
            Side::S
        } else {
            Side::T
        }
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.digraph.has_arc(u, v)
    }

    pub fn matrix(&self) -> Vec<Vec<bool>> {
        let n = 2 * self.k;
        (0..n)
            .map(|i| (0..n).map(|j| self.digraph.has_arc(i, n + j)).collect())
            .collect()
    }

    /// The tournament with every arc reversed.
    pub fn reversed(&self) -> Self {
        RegularBipartiteTournament {
            k: self.k,
            digraph: self.digraph.reversed(),
        }
    }

    /// Induced sub-tournament on `subset` when it is itself regular.
    ///
    /// Returns the sub-tournament and the map from its ids to ids of `self`.
    pub fn sub_tournament(&self, subset: VertexSet) -> Option<(Self, Vec<usize>)> {
        let s: Vec<usize> = members(subset & self.side_set(Side::S)).collect();
        let t: Vec<usize> = members(subset & self.side_set(Side::T)).collect();
        if s.len() != t.len() || !s.len().is_multiple_of(2) || s.is_empty() {
            return None;
        }
        let order: Vec<usize> = s.iter().chain(t.iter()).copied().collect();
        let d = self.digraph.relabeled(&order);
        let sub = Self::new(s.len() / 2, d).ok()?;
        Some((sub, order))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("k {}\n", self.k);
        for row in self.matrix() {
            out.extend(row.iter().map(|&b| if b { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        if !text.ends_with('\n') {
            return Err(ParseError::MissingTrailingNewline);
        }
        let mut lines = text[..text.len() - 1].split('\n');
        let header = lines.next().unwrap_or("");
        let k: usize = header
            .strip_prefix("k ")
            .and_then(|s| s.parse().ok())
            .filter(|&k| k >= 1)
            .ok_or_else(|| ParseError::Header(header.to_string()))?;
        let n = 2 * k;
        if n > 32 {
            return Err(ParseError::TooLarge { k });
        }
        let mut rows = Vec::with_capacity(n);
        for (i, line) in lines.enumerate() {
            if i >= n {
                return Err(ParseError::RowCount { expected: n, found: i + 1 });
            }
            if line.len() != n {
                return Err(ParseError::RowLength { row: i, expected: n, found: line.len() });
            }
            let row = line
                .chars()
                .enumerate()
                .map(|(j, c)| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(ParseError::Character { row: i, col: j, found: other }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if rows.len() != n {
            return Err(ParseError::RowCount { expected: n, found: rows.len() });
        }
        Ok(Self::from_matrix(k, &rows)?)
    }
}

/// `F_{4k}`: classes `K = 0..k`, `M = k..2k` (side `S`), `L = 2k..3k`,
/// `N = 3k..4k` (side `T`), with `K -> L -> M -> N -> K`.
pub fn make_f4k(k: usize) -> Result<RegularBipartiteTournament, crate::error::Error> {
    if k == 0 {
        return Err(crate::error::Error::InvalidK(k));
    }
    let class = |c: usize| c * k..(c + 1) * k;
    // K, M, L, N in id order
    let (kk, mm, ll, nn) = (class(0), class(1), class(2), class(3));
    let mut d = Digraph::new(4 * k);
    for (from, to) in [(kk.clone(), ll.clone()), (ll, mm.clone()), (mm, nn.clone()), (nn, kk)] {
        for u in from.clone() {
            for v in to.clone() {
                d.add_arc(u, v);
            }
        }
    }
    Ok(RegularBipartiteTournament::new(k, d).expect("F_4k is regular"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FMode {
    /// Isomorphic to `F_{|V|}`.
    F,
    /// Isomorphic to the balanced complete bipartite digraph on `|V|` vertices.
    CompleteBipartite,
}

/// Out-neighbourhood classes of `d[subset]`, as (class, common out-set).
fn out_classes(d: &Digraph, subset: VertexSet) -> Vec<(VertexSet, VertexSet)> {
    let mut classes: Vec<(VertexSet, VertexSet)> = Vec::new();
    for v in members(subset) {
        let out = d.out_set(v) & subset;
        match classes.iter_mut().find(|(_, o)| *o == out) {
            Some((c, _)) => *c |= bit(v),
            None => classes.push((bit(v), out)),
        }
    }
    classes
}

/// Recognises `F_{|V|}` or a balanced complete bipartite digraph on `d[subset]`.
pub fn is_f_isomorphic(d: &Digraph, subset: VertexSet, mode: FMode) -> bool {
    let n = count(subset);
    let classes = out_classes(d, subset);
    match mode {
        FMode::F => {
            if n == 0 || !n.is_multiple_of(4) || classes.len() != 4 {
                return false;
            }
            let m = n / 4;
            if classes.iter().any(|(c, _)| count(*c) != m) {
                return false;
            }
            // each class's out-set is exactly another class, and following
            // out-sets from one class visits all four before returning
            let next = |set: VertexSet| classes.iter().position(|(c, _)| *c == set);
            let mut cur = 0;
            let mut seen = 0u8;
            for _ in 0..4 {
                seen |= 1 << cur;
                match next(classes[cur].1) {
                    Some(j) => cur = j,
                    None => return false,
                }
            }
            cur == 0 && seen == 0b1111
        }
        FMode::CompleteBipartite => {
            if n == 0 || !n.is_multiple_of(2) || classes.len() != 2 {
                return false;
            }
            let (a, oa) = classes[0];
            let (b, ob) = classes[1];
            count(a) == n / 2 && oa == b && ob == a
        }
    }
}

/// Whether `w0 -> w1 -> w2 -> w3` and `w0 -> w3` are all arcs inside `subset`.
///
/// In `F` every arc goes one class forward, so a 3-path ends three classes
/// ahead and can never be short-cut by an arc.
pub fn is_f_witness(d: &Digraph, subset: VertexSet, w: [usize; 4]) -> bool {
    w.iter().all(|&v| v < d.vertex_count() && subset & bit(v) != 0)
        && d.has_arc(w[0], w[1])
        && d.has_arc(w[1], w[2])
        && d.has_arc(w[2], w[3])
        && d.has_arc(w[0], w[3])
}

/// Some witness accepted by [`is_f_witness`], smallest first vertex first.
pub fn find_f_witness(d: &Digraph, subset: VertexSet) -> Option<[usize; 4]> {
    for w0 in members(subset) {
        let out0 = d.out_set(w0) & subset;
        for w1 in members(out0) {
            for w3 in members(out0) {
                if let Some(w2) = members(d.out_set(w1) & d.in_set(w3) & subset).next() {
                    return Some([w0, w1, w2, w3]);
                }
            }
        }
    }
    None
}

/// Seeded `k`-regular bipartite tournament.
///
/// Starts from the circulant orientation `s_i -> t_j` iff `(j - i) mod 2k < k`
/// and applies swap rectangles (`10/01 -> 01/10`), which keep every degree.
pub fn random_regular(k: usize, seed: u64) -> RegularBipartiteTournament {
    assert!(k >= 1, "k must be positive");
    let n = 2 * k;
    let rows: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| (j + n - i) % n < k).collect())
        .collect();
    let d = RegularBipartiteTournament::from_matrix(k, &rows).expect("circulant is regular");
    perturb(&d, 20 * n * n, seed)
}

/// Attempts `attempts` random swap rectangles on `d`; degrees are kept.
/// Few attempts leave an instance close to `d`.
pub fn perturb(d: &RegularBipartiteTournament, attempts: usize, seed: u64) -> RegularBipartiteTournament {
    let n = 2 * d.k();
    let mut rows = d.matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let (i1, i2) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let (j1, j2) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i1 == i2 || j1 == j2 {
            continue;
        }
        if rows[i1][j1] && rows[i2][j2] && !rows[i1][j2] && !rows[i2][j1] {
            rows[i1][j1] = false;
            rows[i2][j2] = false;
            rows[i1][j2] = true;
            rows[i2][j1] = true;
        }
    }
    RegularBipartiteTournament::from_matrix(d.k(), &rows).expect("swaps preserve regularity")
}

/// Applies a vertex relabelling that keeps `S` and `T` as sets of ids
/// (`perm_s` permutes `0..2k`, `perm_t` permutes `0..2k` within `T`).
pub fn relabel_within_sides(
    d: &RegularBipartiteTournament,
    perm_s: &[usize],
    perm_t: &[usize],
) -> RegularBipartiteTournament {
    let m = d.matrix();
    let n = 2 * d.k();
    let mut rows = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            rows[perm_s[i]][perm_t[j]] = m[i][j];
        }
    }
    RegularBipartiteTournament::from_matrix(d.k(), &rows).expect("relabelling keeps regularity")
}

/// Uniformly random relabelling inside each side.
pub fn shuffle_sides(d: &RegularBipartiteTournament, rng: &mut impl Rng) -> RegularBipartiteTournament {
    use rand::seq::SliceRandom;
    let n = 2 * d.k();
    let mut ps: Vec<usize> = (0..n).collect();
    let mut pt: Vec<usize> = (0..n).collect();
    ps.shuffle(rng);
    pt.shuffle(rng);
    relabel_within_sides(d, &ps, &pt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_is_the_four_cycle() {
        let f = make_f4k(1).unwrap();
        // k1=0, m1=1, l1=2, n1=3
        let arcs: Vec<_> = f.digraph().arcs().collect();
        assert_eq!(arcs.len(), 4);
        for (u, v) in [(0, 2), (2, 1), (1, 3), (3, 0)] {
            assert!(f.has_arc(u, v));
        }
    }

    #[test]
    fn k_zero_rejected() {
        assert!(make_f4k(0).is_err());
    }

    #[test]
    fn reversing_one_arc_breaks_out_degree_at_tail() {
        let f = make_f4k(2).unwrap();
        let mut d = f.digraph().clone();
        // 0 in K -> 4 in L
        d.remove_arc(0, 4);
        d.add_arc(4, 0);
        let s: Vec<usize> = (0..4).collect();
        let t: Vec<usize> = (4..8).collect();
        assert_eq!(
            validate(&s, &t, &d),
            Err(Violation::OutDegree { v: 0, found: 1, expected: 2 })
        );
    }

    #[test]
    fn near_regular_family_fails_on_side_sizes() {
        // |K|=|N|=2, |L|=|M|=3: K,M on one side (5), L,N on the other (5)
        let (kk, ll, mm, nn) = (0..2, 2..5, 5..8, 8..10);
        let mut d = Digraph::new(10);
        for (a, b) in [(kk.clone(), ll.clone()), (ll.clone(), mm.clone()), (mm.clone(), nn.clone()), (nn.clone(), kk.clone())] {
            for u in a.clone() {
                for v in b.clone() {
                    d.add_arc(u, v);
                }
            }
        }
        let s: Vec<usize> = kk.chain(mm).collect();
        let t: Vec<usize> = ll.chain(nn).collect();
        assert_eq!(validate(&s, &t, &d), Err(Violation::SideSizes { s: 5, t: 5 }));
    }

    #[test]
    fn f_recognition_on_builder_output() {
        for k in 1..=6 {
            let f = make_f4k(k).unwrap();
            assert!(is_f_isomorphic(f.digraph(), f.digraph().vertices(), FMode::F));
            assert!(!is_f_isomorphic(f.digraph(), f.digraph().vertices(), FMode::CompleteBipartite));
        }
    }

    #[test]
    fn f_has_no_shortcut_witness() {
        for k in 1..=5 {
            let f = make_f4k(k).unwrap();
            assert_eq!(find_f_witness(f.digraph(), f.digraph().vertices()), None);
        }
        let d = random_regular(3, 11);
        if !is_f_isomorphic(d.digraph(), d.digraph().vertices(), FMode::F) {
            let w = find_f_witness(d.digraph(), d.digraph().vertices()).unwrap();
            assert!(is_f_witness(d.digraph(), d.digraph().vertices(), w));
        }
    }

    #[test]
    fn odd_or_non_multiple_of_four_is_not_f() {
        let f = make_f4k(2).unwrap();
        assert!(!is_f_isomorphic(f.digraph(), 0b111, FMode::F));
        assert!(!is_f_isomorphic(f.digraph(), 0b11_1111, FMode::F));
    }

    #[test]
    fn random_regular_is_deterministic_and_valid() {
        let a = random_regular(2, 99);
        let b = random_regular(2, 99);
        assert_eq!(a, b);
        let c = random_regular(1, 5);
        assert_eq!(c.digraph().arc_count(), 4);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let f = make_f4k(2).unwrap();
        let text = f.to_text();
        assert_eq!(RegularBipartiteTournament::parse(&text).unwrap(), f);
        assert!(RegularBipartiteTournament::parse(text.trim_end()).is_err());
        let bad = text.replacen('1', "x", 1);
        assert!(matches!(
            RegularBipartiteTournament::parse(&bad),
            Err(ParseError::Character { .. })
        ));
        assert!(matches!(
            RegularBipartiteTournament::parse("k 1\n10\n11\n"),
            Err(ParseError::Invalid(_))
        ));
    }
}
