//! Directed cycles and cycle-factors as ordered vertex lists.

use std::fmt;

use crate::graph::{bit, count, Digraph, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleError {
    TooShort { len: usize },
    Repeated { v: usize },
    BrokenArc { from: usize, to: usize },
    NotDisjoint { v: usize },
    NotSpanning { missing: VertexSet, extra: VertexSet },
}

impl fmt::Display for CycleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleError::TooShort { len } => write!(f, "cycle of length {len} is too short"),
            CycleError::Repeated { v } => write!(f, "vertex {v} repeated"),
            CycleError::BrokenArc { from, to } => write!(f, "missing arc {from}->{to}"),
            CycleError::NotDisjoint { v } => write!(f, "vertex {v} on two cycles"),
            CycleError::NotSpanning { missing, extra } => {
                write!(f, "not spanning: missing {missing:#x}, extra {extra:#x}")
            }
        }
    }
}

impl std::error::Error for CycleError {}

/// A directed cycle; consecutive vertices (and last -> first) are arcs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cycle(Vec<usize>);

impl fmt::Debug for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cycle{:?}", self.0)
    }
}

impl Cycle {
    /// Wraps a vertex list, rotated so the smallest id comes first.
    pub fn new(mut vertices: Vec<usize>) -> Self {
        if let Some(pos) = vertices.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i) {
            vertices.rotate_left(pos);
        }
        Cycle(vertices)
    }

    /// Wraps a vertex list keeping the given starting vertex.
    pub fn from_rotation(vertices: Vec<usize>) -> Self {
        Cycle(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.0.iter().fold(0, |m, &v| m | bit(v))
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.0.iter().position(|&x| x == v)
    }

    /// The vertex after `v`; panics if `v` is not on the cycle.
    pub fn succ(&self, v: usize) -> usize {
        let i = self.position(v).expect("vertex not on cycle");
        self.0[(i + 1) % self.0.len()]
    }

    pub fn pred(&self, v: usize) -> usize {
        let i = self.position(v).expect("vertex not on cycle");
        self.0[(i + self.0.len() - 1) % self.0.len()]
    }

    /// `v` followed by the next `steps` successors, `steps + 1` vertices total.
    pub fn walk(&self, v: usize, steps: usize) -> Vec<usize> {
        let i = self.position(v).expect("vertex not on cycle");
        (0..=steps).map(|j| self.0[(i + j) % self.0.len()]).collect()
    }

    /// Vertices from `from` to `to` along the cycle, both inclusive.
    pub fn segment(&self, from: usize, to: usize) -> Vec<usize> {
        let i = self.position(from).expect("vertex not on cycle");
        let j = self.position(to).expect("vertex not on cycle");
        let steps = (j + self.0.len() - i) % self.0.len();
        self.walk(from, steps)
    }

    /// Every vertex, starting from `v`.
    pub fn rotated_to(&self, v: usize) -> Vec<usize> {
        self.walk(v, self.0.len() - 1)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| (self.0[i], self.0[(i + 1) % n]))
    }

    pub fn validate(&self, d: &Digraph, min_len: usize) -> Result<(), CycleError> {
        if self.0.len() < min_len.max(2) {
            return Err(CycleError::TooShort { len: self.0.len() });
        }
        let mut seen = 0u64;
        for &v in &self.0 {
            if seen & bit(v) != 0 {
                return Err(CycleError::Repeated { v });
            }
            seen |= bit(v);
        }
        for (u, v) in self.arcs() {
            if !d.has_arc(u, v) {
                return Err(CycleError::BrokenArc { from: u, to: v });
            }
        }
        Ok(())
    }
}

/// Vertex-disjoint cycles covering a ground set.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CycleFactor {
    pub cycles: Vec<Cycle>,
}

impl CycleFactor {
    pub fn new(cycles: Vec<Cycle>) -> Self {
        CycleFactor { cycles }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.cycles.iter().fold(0, |m, c| m | c.vertex_set())
    }

    pub fn vertex_count(&self) -> usize {
        self.cycles.iter().map(Cycle::len).sum()
    }

    pub fn cycle_of(&self, v: usize) -> Option<usize> {
        self.cycles.iter().position(|c| c.contains(v))
    }

    /// Factor successor of `v`.
    pub fn succ(&self, v: usize) -> usize {
        self.cycles[self.cycle_of(v).expect("vertex not covered")].succ(v)
    }

    pub fn validate(&self, d: &Digraph, ground: VertexSet, min_len: usize) -> Result<(), CycleError> {
        let mut seen = 0u64;
        for c in &self.cycles {
            c.validate(d, min_len)?;
            let vs = c.vertex_set();
            if seen & vs != 0 {
                return Err(CycleError::NotDisjoint {
                    v: (seen & vs).trailing_zeros() as usize,
                });
            }
            seen |= vs;
        }
        if seen != ground {
            return Err(CycleError::NotSpanning {
                missing: ground & !seen,
                extra: seen & !ground,
            });
        }
        debug_assert_eq!(count(seen), self.vertex_count());
        Ok(())
    }

    /// Builds the factor from a successor table over `ground`.
    pub fn from_successors(succ: &[usize], ground: VertexSet) -> Self {
        let mut left = ground;
        let mut cycles = Vec::new();
        while left != 0 {
            let start = left.trailing_zeros() as usize;
            let mut cyc = vec![start];
            left &= !bit(start);
            let mut v = succ[start];
            while v != start {
                assert!(left & bit(v) != 0, "successor table is not a permutation of the ground set");
                cyc.push(v);
                left &= !bit(v);
                v = succ[v];
            }
            cycles.push(Cycle::new(cyc));
        }
        CycleFactor { cycles }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalisation_and_navigation() {
        let c = Cycle::new(vec![5, 2, 7]);
        assert_eq!(c.vertices(), &[2, 7, 5]);
        assert_eq!(c.succ(5), 2);
        assert_eq!(c.pred(2), 5);
        assert_eq!(c.segment(7, 2), vec![7, 5, 2]);
        assert_eq!(c.rotated_to(5), vec![5, 2, 7]);
    }

    #[test]
    fn validation_catches_broken_arcs() {
        let d = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]);
        assert!(Cycle::new(vec![0, 1, 2]).validate(&d, 2).is_ok());
        assert_eq!(
            Cycle::new(vec![0, 2, 1]).validate(&d, 2),
            Err(CycleError::BrokenArc { from: 0, to: 2 })
        );
    }

    #[test]
    fn factor_from_successors() {
        let f = CycleFactor::from_successors(&[1, 0, 3, 2], 0b1111);
        assert_eq!(f.cycles, vec![Cycle::new(vec![0, 1]), Cycle::new(vec![2, 3])]);
    }
}
