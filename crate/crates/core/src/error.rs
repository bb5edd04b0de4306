use thiserror::Error;

use crate::tournament::Violation;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("instance text must end with a newline")]
    MissingTrailingNewline,
    #[error("bad header line {0:?}, expected \"k <k>\"")]
    Header(String),
    #[error("k={k} exceeds the 64-vertex limit")]
    TooLarge { k: usize },
    #[error("expected {expected} matrix rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row}: expected {expected} characters, found {found}")]
    RowLength { row: usize, expected: usize, found: usize },
    #[error("row {row} column {col}: unexpected character {found:?}")]
    Character { row: usize, col: usize, found: char },
    #[error("not a regular bipartite tournament: {0}")]
    Invalid(#[from] Violation),
}

/// A solver abort on an input satisfying the theorem's hypotheses.
///
/// Carries the instance text and the step log so the run can be replayed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Falsification {
    pub stage: String,
    pub detail: String,
    pub instance: String,
    pub provenance: Vec<String>,
}

impl std::fmt::Display for Falsification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "falsification event in {}: {}", self.stage, self.detail)?;
        write!(f, "{}", self.instance)?;
        for line in &self.provenance {
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("k must be positive, got {0}")]
    InvalidK(usize),
    #[error("p={p} out of range 2..={max} for k={k}")]
    POutOfRange { p: usize, k: usize, max: usize },
    #[error(transparent)]
    Invalid(#[from] Violation),
    #[error("instance too large for exact mode: {0} vertices")]
    TooLarge(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0}")]
    Falsified(Box<Falsification>),
}

impl Error {
    pub fn is_falsification(&self) -> bool {
        matches!(self, Error::Falsified(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
