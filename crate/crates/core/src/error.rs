use std::fmt;

use crate::diffpoly::DerivativeVar;

/// A set of rows whose finite entries reach too few columns to be matched.
///
/// Indices are stored 0-based and printed 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallViolation {
    pub rows: Vec<usize>,
    pub columns: Vec<usize>,
}

fn write_index_set(f: &mut fmt::Formatter<'_>, items: &[usize]) -> fmt::Result {
    f.write_str("{")?;
    for (k, i) in items.iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{}", i + 1)?;
    }
    f.write_str("}")
}

impl fmt::Display for HallViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("rows ")?;
        write_index_set(f, &self.rows)?;
        f.write_str(" match only columns ")?;
        write_index_set(f, &self.columns)
    }
}

/// Location of a syntax error, 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} is limited to n <= {max}, got n = {n}")]
    SizeGuard {
        what: &'static str,
        n: usize,
        max: usize,
    },

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("no finite transversal: {0}")]
    NoFiniteTransversal(HallViolation),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("no canon with multipliers in [0, {bound}]^n")]
    NoCanonInBox { bound: u64 },

    #[error("attachment process stalled: rows {rows:?} cannot be attached")]
    ResolventStalled { rows: Vec<usize> },

    #[error("syntax error at {position}: {message}")]
    Syntax { position: Position, message: String },

    #[error("unknown variable `{name}` at {position}")]
    UnknownVariable { name: String, position: Position },

    #[error("no value assigned to {0:?}")]
    MissingAssignment(DerivativeVar),

    #[error("system is not linear with constant coefficients: {0}")]
    NotLinear(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Structural degeneracy of the input (as opposed to malformed input).
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::NoFiniteTransversal(_) | Error::Degenerate(_) | Error::ResolventStalled { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
