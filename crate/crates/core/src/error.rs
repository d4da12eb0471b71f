use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("shape {shape:?} needs {expected} entries, got {actual}")]
    DataLength { shape: Vec<usize>, expected: usize, actual: usize },

    #[error("tensor dimensions must be at least 1, got shape {0:?}")]
    ZeroDimension(Vec<usize>),

    #[error("non-finite scalar at flat index {0}")]
    NonFinite(usize),

    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch(Vec<usize>, Vec<usize>),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("index {index} out of range for a tensor with {order} indices")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("index {0} is paired more than once")]
    RepeatedIndex(usize),

    #[error("expected a matrix (2 indices), got shape {0:?}")]
    NotAMatrix(Vec<usize>),

    #[error("matrix is singular within tolerance (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),

    #[error("unknown matrix box `{0}`")]
    UnknownBox(String),

    #[error("composition mismatch: {left:?} outputs cannot feed {right:?} inputs")]
    PortMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("wire {0} is used more than once or does not exist")]
    WireReuse(usize),

    #[error("wire {0} is left dangling")]
    DanglingWire(usize),

    #[error("ket digit {digit} out of range for local dimension {dim}")]
    DigitOutOfRange { digit: usize, dim: usize },

    #[error("inconsistent party counts in ket expression: {0} vs {1}")]
    InconsistentParties(usize, usize),

    #[error("malformed coefficient `{0}`")]
    MalformedCoefficient(String),

    #[error("state amplitudes are all zero")]
    ZeroState,

    #[error("node {0} is not a generator of algebra `{1}`")]
    ForeignNode(usize, String),

    #[error("algebra `{0}` has not passed the axiom check")]
    UnverifiedAlgebra(String),

    #[error("algebra `{name}` fails the CFA axioms (worst residual {residual:e})")]
    AxiomsFailed { name: String, residual: f64 },

    #[error("no witness: contraction with the effect is singular (|det| = {det:e})")]
    NotStronglyMaximal { det: f64 },

    #[error("vector must be nonzero")]
    ZeroVector,

    #[error("input {0} has zero overlap with |2>")]
    ZeroOverlap(usize),

    #[error("synthesis check failed: residual {residual:e} exceeds {limit:e}")]
    SynthesisResidualExceeded { residual: f64, limit: f64 },

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),

    #[error("catalog entry `{name}` needs {expected} parameter vectors, got {actual}")]
    MissingParameters { name: String, expected: usize, actual: usize },

    #[error("expected {expected} local operators, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    #[error("operation needs a {expected}-partite state of local dimension {dim}, got {parties} parties of dimension {actual_dim}")]
    UnsupportedState { expected: usize, dim: usize, parties: usize, actual_dim: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
