use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a digraph needs at least one vertex")]
    Empty,
    #[error("loop at vertex {vertex}")]
    Loop { vertex: usize },
    #[error("duplicate arc {from} -> {to}")]
    DuplicateArc { from: usize, to: usize },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("digraph is not strongly connected")]
    NotStronglyConnected,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("pre-distance polynomial {degree} has zero norm before the minimal polynomial degree")]
    DegenerateBasis { degree: usize },
    #[error("spectrum: {0}")]
    Spectrum(String),
    #[error("spectrum is not closed under conjugation")]
    NotConjugateClosed,
    #[error("imaginary residual {residual:e} exceeds tolerance {tolerance:e}")]
    ImaginaryResidual { residual: f64, tolerance: f64 },
    #[error("eigenvalues coincide after clustering")]
    CoincidentEigenvalues,
    #[error("lambda0 is not a root of the minimal polynomial (remainder {0:e})")]
    NotARoot(f64),
    #[error("S(lambda0) vanishes to working precision")]
    VanishingHoffmanDenominator,
    #[error("weighted delta_d vanished; precision failure")]
    VanishingWeightedDelta,
    #[error("subset S_{index} is empty")]
    EmptySubset { index: usize },
    #[error("subset S_{index} must contain {index}")]
    SubsetMissingIndex { index: usize },
    #[error("subset S_{index} mentions distance {value} beyond the diameter")]
    SubsetOutOfRange { index: usize, value: usize },
    #[error("wrong number of subsets: expected {expected}, got {got}")]
    SubsetCount { expected: usize, got: usize },
    #[error("digraph is not normal")]
    NotNormal,
    #[error("counterexample alarm: {0}")]
    Counterexample(String),
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("enumeration of n = {n} exceeds the exhaustive cap {cap}; pass a sample limit")]
    EnumerationCap { n: usize, cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Input-file problems, each tied to a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header: {reason}")]
    Header { line: usize, reason: String },
    #[error("line {line}: expected {expected}, found {found:?}")]
    Token { line: usize, expected: &'static str, found: String },
    #[error("line {line}: adjacency entry {found:?} is not 0 or 1")]
    Entry { line: usize, found: String },
    #[error("line {line}: loop at vertex {vertex}")]
    Loop { line: usize, vertex: usize },
    #[error("line {line}: duplicate arc {from} -> {to}")]
    DuplicateArc { line: usize, from: usize, to: usize },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: trailing content {found:?}")]
    Trailing { line: usize, found: String },
    #[error("line {line}: expected {expected} more line(s)")]
    Truncated { line: usize, expected: usize },
    #[error("empty input")]
    Empty,
}
