//! The solver's output: two complementary host cycles plus a step log.

use serde::{Deserialize, Serialize};

use crate::cycle::Cycle;
use crate::tournament::{find_f_witness, is_f_isomorphic, FMode, RegularBipartiteTournament};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub k: usize,
    pub p: usize,
    /// Cycle of length `2p`.
    pub cycle_2p: Vec<usize>,
    /// Cycle of length `4k - 2p` on the remaining vertices.
    pub cycle_rest: Vec<usize>,
    /// The designated cycle (length `2 min(p, 2k - p)`) does not induce `F`.
    pub f_avoided: bool,
    /// Arcs `w0 -> w1 -> w2 -> w3` and `w0 -> w3` inside the designated cycle.
    pub witness: Option<[usize; 4]>,
    pub provenance: Vec<String>,
}

/// Half-length of the cycle that carries the `F`-avoidance guarantee.
pub fn designated_half(k: usize, p: usize) -> usize {
    p.min(2 * k - p)
}

/// Whether the guarantee applies at all: an even designated half of at least 4.
pub fn needs_f_avoidance(k: usize, p: usize) -> bool {
    let q = designated_half(k, p);
    q.is_multiple_of(2) && q >= 4
}

impl Certificate {
    /// Builds a certificate from the `2q`-cycle and its complement, `q <= k`.
    pub fn from_cycles(
        d: &RegularBipartiteTournament,
        p: usize,
        short: &Cycle,
        long: &Cycle,
        witness: Option<[usize; 4]>,
        provenance: Vec<String>,
    ) -> Self {
        let k = d.k();
        let (first, second) = if short.len() == 2 * p { (short, long) } else { (long, short) };
        let set = short.vertex_set();
        let f_avoided = !is_f_isomorphic(d.digraph(), set, FMode::F);
        let witness = if needs_f_avoidance(k, p) && f_avoided {
            witness.or_else(|| find_f_witness(d.digraph(), set))
        } else {
            None
        };
        Certificate {
            k,
            p,
            cycle_2p: first.vertices().to_vec(),
            cycle_rest: second.vertices().to_vec(),
            f_avoided,
            witness,
            provenance,
        }
    }

    /// The cycle of length `2 min(p, 2k - p)`.
    pub fn designated(&self) -> &[usize] {
        if self.cycle_2p.len() <= self.cycle_rest.len() {
            &self.cycle_2p
        } else {
            &self.cycle_rest
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
