use std::fmt;

/// Position of a syntax error in an input string (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable sets differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("polynomial of degree {degree} exceeds the quantizable bound {bound}")]
    DegreeExceeded { degree: u32, bound: u32 },
    #[error("map has no assignment for bracket {{{f}, {g}}} (missing monomial {missing})")]
    MissingAssignment { f: String, g: String, missing: String },
    #[error("index error: {0}")]
    Index(String),
    #[error("derivative prefix uses the curved connection: {0}")]
    WrongConnection(String),
    #[error("invalid rewrite location: {0}")]
    InvalidLocation(String),
    #[error("expression already contains curved-side objects: {0}")]
    CurvedInput(String),
    #[error("expression mixes flat and curved objects: {0}")]
    MixedSides(String),
    #[error("constraint rule rejected: {0}")]
    InvalidRule(String),
    #[error("constraint application did not terminate after {iterations} rounds; last: {last}")]
    NonTerminating { iterations: usize, last: String },
    #[error("unbound tensor symbol `{0}`")]
    UnboundSymbol(String),
    #[error("metric is singular")]
    SingularMetric,
    #[error("metric is not symmetric at ({0}, {1})")]
    NonSymmetricMetric(usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("syntax error at {span}: {message}")]
    Syntax { span: Span, message: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("canonicalization exceeded its search budget on term {0}")]
    SearchBudget(String),
    #[error("{0}")]
    Format(String),
    #[error("trace replay diverged at step {step}: expected {expected}, got {actual}")]
    ReplayMismatch { step: usize, expected: String, actual: String },
}

pub type Result<T> = std::result::Result<T, Error>;
