use std::fmt;

use crate::certificate::{designated_half, Certificate};
use crate::tournament::{is_f_isomorphic, is_f_witness, FMode, RegularBipartiteTournament};

/// Why a certificate is rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongK { expected: usize, found: usize },
    PRange { p: usize, k: usize },
    Length { which: &'static str, expected: usize, found: usize },
    VertexOutOfRange { vertex: usize },
    Repeated { vertex: usize },
    Missing { vertex: usize },
    /// `from -> to` is consecutive on a cycle but not an arc.
    BrokenArc { which: &'static str, from: usize, to: usize },
    /// The designated cycle induces `F`, or the claim about it is wrong.
    FAvoidance(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongK { expected, found } => write!(f, "certificate k={found}, instance k={expected}"),
            Violation::PRange { p, k } => write!(f, "p={p} out of range for k={k}"),
            Violation::Length { which, expected, found } => {
                write!(f, "{which} has length {found}, expected {expected}")
            }
            Violation::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} out of range"),
            Violation::Repeated { vertex } => write!(f, "vertex {vertex} used twice"),
            Violation::Missing { vertex } => write!(f, "vertex {vertex} not covered"),
            Violation::BrokenArc { which, from, to } => write!(f, "{which}: {from} -> {to} is not an arc"),
            Violation::FAvoidance(s) => write!(f, "F-avoidance: {s}"),
        }
    }
}

impl std::error::Error for Violation {}

/// Checks the certificate against the instance from scratch: partition,
/// arcs, lengths and, when the designated half is even and at least 4,
/// that the designated cycle does not induce `F`.
pub fn verify_two_factor(d: &RegularBipartiteTournament, cert: &Certificate) -> Result<(), Violation> {
    let k = d.k();
    let n = 4 * k;
    if cert.k != k {
        return Err(Violation::WrongK { expected: k, found: cert.k });
    }
    if cert.p < 2 || cert.p + 2 > 2 * k {
        return Err(Violation::PRange { p: cert.p, k });
    }
    for (which, cyc, len) in [
        ("cycle_2p", &cert.cycle_2p, 2 * cert.p),
        ("cycle_rest", &cert.cycle_rest, n - 2 * cert.p),
    ] {
        if cyc.len() != len {
            return Err(Violation::Length { which, expected: len, found: cyc.len() });
        }
    }
    let mut seen = vec![false; n];
    for &v in cert.cycle_2p.iter().chain(&cert.cycle_rest) {
        if v >= n {
            return Err(Violation::VertexOutOfRange { vertex: v });
        }
        if seen[v] {
            return Err(Violation::Repeated { vertex: v });
        }
        seen[v] = true;
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Violation::Missing { vertex: v });
    }
    for (which, cyc) in [("cycle_2p", &cert.cycle_2p), ("cycle_rest", &cert.cycle_rest)] {
        for i in 0..cyc.len() {
            let (a, b) = (cyc[i], cyc[(i + 1) % cyc.len()]);
            if !d.has_arc(a, b) {
                return Err(Violation::BrokenArc { which, from: a, to: b });
            }
        }
    }
    let q = designated_half(k, cert.p);
    let designated = if cert.cycle_2p.len() == 2 * q { &cert.cycle_2p } else { &cert.cycle_rest };
    let set = designated.iter().fold(0u64, |m, &v| m | 1 << v);
    let induces_f = is_f_isomorphic(d.digraph(), set, FMode::F);
    if cert.f_avoided == induces_f {
        return Err(Violation::FAvoidance(format!("f_avoided={} but the cycle {} F", cert.f_avoided, if induces_f { "induces" } else { "does not induce" })));
    }
    if q.is_multiple_of(2) && q >= 4 {
        if induces_f {
            return Err(Violation::FAvoidance(format!("the {}-cycle induces F", 2 * q)));
        }
        match cert.witness {
            Some(w) if w.iter().all(|&v| v < n) && is_f_witness(d.digraph(), set, w) => {}
            Some(w) => return Err(Violation::FAvoidance(format!("witness {w:?} does not certify"))),
            None => return Err(Violation::FAvoidance("witness missing".into())),
        }
    }
    Ok(())
}
