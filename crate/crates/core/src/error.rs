use std::fmt;

use thiserror::Error;

use crate::learner::LearnReport;

/// A syntax error with its source position and the tokens that would have
/// been accepted there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match self.expected.as_slice() {
            [] => write!(f, "unexpected {}", self.found),
            [one] => write!(f, "expected {one}, found {}", self.found),
            many => write!(f, "expected one of {}, found {}", many.join(", "), self.found),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("bad target arity {target} for an automaton of arity {arity}")]
    BadArity { arity: usize, target: usize },
    #[error("{traces} traces do not fit into arity {arity}")]
    TooManyTraces { traces: usize, arity: usize },
    #[error("traces have different lengths")]
    RaggedTraces,
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("unbound trace variable `{0}`")]
    UnboundVariable(String),
    #[error("formula is not syntactically safe")]
    NotSafe,
    #[error("formula is not universally-safe")]
    NotUniversallySafe,
    #[error("trace index {index} out of range for a map over {len} traces")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("conjecture arity {conjecture} exceeds the formula's {quantifiers} quantifiers")]
    ArityTooLarge { conjecture: usize, quantifiers: usize },
    #[error("word is not in the observation table")]
    UnknownWord,
    #[error("observation table is not closed and consistent")]
    TableNotReady,
    #[error("learning budget exceeded: {reason}")]
    BudgetExceeded {
        reason: String,
        report: Box<LearnReport>,
    },
    #[error("{0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
