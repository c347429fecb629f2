use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^62")]
    InvalidPrime(u64),
    #[error("elimination degenerated modulo {prime}; retry with a fresh prime")]
    DegeneratePrime { prime: u64 },
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("letter {letter} out of range for {generators} generators")]
    LetterOutOfRange { letter: usize, generators: usize },
    #[error("shift {shift} with relation degree {relation_degree} does not fit in degree {degree}")]
    DegreeUnderflow {
        shift: usize,
        relation_degree: usize,
        degree: usize,
    },
    #[error("degree {degree} exceeds the resource bound (ambient {ambient} > {limit})")]
    CutoffExceeded { degree: usize, ambient: u128, limit: u128 },
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid contraction (m = {m}, q = {q}) for relation degree {degree}")]
    InvalidContraction { m: usize, q: usize, degree: usize },
    #[error("series is not an enveloping-algebra series: N_{index} = {value}")]
    NonEnveloping { index: usize, value: String },
    #[error("series must start with constant term 1")]
    BadConstantTerm,
    #[error("denominator has zero constant term")]
    ZeroConstantTerm,
    #[error("division by zero")]
    DivisionByZero,
    #[error("argument must be positive")]
    NonPositive,
    #[error("representation size mismatch: {0}")]
    SizeMismatch(String),
    #[error("complex property violated: {0}")]
    NotAComplex(String),
    #[error("I/O error: {0}")]
    Io(String),
}
