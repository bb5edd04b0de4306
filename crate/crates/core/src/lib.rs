//! Cycle-factors with one cycle of prescribed length in regular bipartite
//! tournaments.

pub mod certificate;
pub mod contraction;
pub mod cycle;
pub mod engine;
pub mod error;
pub mod factor;
pub mod graph;
pub mod merge;
pub mod oracle;
pub mod rewiring;
pub mod tournament;

pub use error::{Error, Falsification, ParseError, Result};
