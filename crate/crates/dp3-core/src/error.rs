use thiserror::Error;

/// Errors raised by the numerical engine.
///
/// Values are carried as `f64` regardless of the scalar type in use.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("domain error: discriminant {0} is not positive")]
    Domain(f64),
    #[error("point {re}+{im}i is within tolerance of a branch point")]
    BranchPoint { re: f64, im: f64 },
    #[error("square-root hint is ambiguous at {re}+{im}i")]
    AmbiguousHint { re: f64, im: f64 },
    #[error("point {re}+{im}i lies inside the end-truncation radius")]
    EndSingularity { re: f64, im: f64 },
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),
    #[error("degenerate geometry: {0}")]
    Geometry(String),
    #[error("quadrature did not converge: estimate {estimate}, error {error}")]
    NoConvergence { estimate: f64, error: f64 },
    #[error("sheet tracking failed near parameter {0}")]
    SheetJump(f64),
    #[error("expected a positive value, got {0}")]
    NonPositive(f64),
    #[error("no sign change of xi2 for lambda2 up to {0}")]
    BracketFailure(f64),
    #[error("no sign change of xi1 along c2 ({} samples scanned)", .0.len())]
    NoSignChange(Vec<(f64, f64)>),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("cycle residual {residual:e} exceeds {tol:e} at quad {quad}")]
    CycleResidual { quad: usize, residual: f64, tol: f64 },
    #[error("weld mismatch {0:e} exceeds tolerance")]
    WeldFailure(f64),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
