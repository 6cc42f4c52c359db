use thiserror::Error;

/// Errors raised by the engine. Every variant is an input error: the engine
/// never reports a mathematical violation through `Err`, those go into reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("unknown generator {0}")]
    UnknownGenerator(String),

    #[error("operands live on different charts")]
    ChartMismatch,

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("form rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: String },

    #[error("element is not homogeneous")]
    Inhomogeneous,

    #[error("element is not a section: {0}")]
    NotASection(String),

    #[error("hamiltonian is not in normal form: {0}")]
    NotNormalForm(String),

    #[error("wrong chart kind: {0}")]
    WrongChartKind(String),

    #[error("adjoint series did not terminate within {0} iterations")]
    GaugeBudgetExceeded(usize),

    #[error("form is not closed")]
    NotClosed,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not in O(d,d)")]
    NotInOdd,

    #[error("matrix is not a generalised metric: {0}")]
    NotGeneralisedMetric(String),

    #[error("module degree {n} exceeds symplectic degree {p}")]
    ModuleDegree { n: u32, p: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
