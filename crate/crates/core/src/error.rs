use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("weight exponent must satisfy alpha > -1, got {0}")]
    AlphaOutOfRange(String),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("Jacobi parameters must exceed -1, got ({a}, {b})")]
    JacobiParameters { a: String, b: String },
    #[error("candidate {index} is linearly dependent on its predecessors")]
    LinearDependence { index: usize },
    #[error("polynomial is not in the orthogonal space V({alpha})_{degree}: {reason}")]
    NotInSpace {
        degree: usize,
        alpha: String,
        reason: String,
    },
    #[error("singular system in {0}")]
    Singular(&'static str),
    #[error("unsupported dimension {0} for the floating-point path (need 1..=3)")]
    UnsupportedDimension(usize),
    #[error("quadrature exact to degree {have} but degree {need} is required")]
    QuadratureTooCoarse { have: usize, need: usize },
    #[error("gradient callback inconsistent with values at {point:?}: {detail}")]
    InconsistentGradient { point: Vec<f64>, detail: String },
    #[error("missing gradient callback, required by the Sobolev projector")]
    MissingGradient,
    #[error("unknown function id {0:?}")]
    UnknownFunction(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("need at least {need} usable points for a slope fit, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
