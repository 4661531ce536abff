use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ellipse semi-axes must be positive (a = {a}, b = {b})")]
    NonPositiveAxis { a: f64, b: f64 },

    #[error("zermelo metric h is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("direction vector is zero")]
    ZeroVector,

    #[error("direction lies outside the admissible cone of the conic metric")]
    OutsideCone,

    #[error("direction too close to the cone boundary for a stable evaluation")]
    DegenerateDirection,

    #[error("tangent vector is degenerate or parallel to the outward hint")]
    DegenerateTangent,

    #[error("finite-difference stencil leaves the domain at ({t}, {x:?})")]
    DomainEdge { t: f64, x: Vec<f64> },

    #[error("velocity reached the boundary of the admissible cone")]
    ConeBoundary,

    #[error("spacetime metric is singular")]
    SingularMetric,

    #[error("initial velocity is not F-unit (F = {0})")]
    BadInitialSpeed(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Richards stepping requires mild wind; h(W,W) = {0} at a marker")]
    StrongWindUnsupported(f64),

    #[error("consecutive markers coincide; front spacing is degenerate")]
    DegenerateSpacing,

    #[error("iso-contour at level {0} is empty")]
    EmptyContour(f64),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("validation error in field `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation { field: field.into(), message: message.into() }
    }

    /// Short machine-readable tag used in error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPositiveAxis { .. } => "NonPositiveAxis",
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::ZeroVector => "ZeroVector",
            Error::OutsideCone => "OutsideCone",
            Error::DegenerateDirection => "DegenerateDirection",
            Error::DegenerateTangent => "DegenerateTangent",
            Error::DomainEdge { .. } => "DomainEdge",
            Error::ConeBoundary => "ConeBoundary",
            Error::SingularMetric => "SingularMetric",
            Error::BadInitialSpeed(_) => "BadInitialSpeed",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::StrongWindUnsupported(_) => "StrongWindUnsupported",
            Error::DegenerateSpacing => "DegenerateSpacing",
            Error::EmptyContour(_) => "EmptyContour",
            Error::Parse { .. } => "ParseError",
            Error::Validation { .. } => "ValidationError",
            Error::Numerical(_) => "NumericalFailure",
            Error::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
