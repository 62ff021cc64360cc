use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("point {point:?} lies outside the chart domain")]
    OutsideDomain { point: Vec<f64> },

    #[error("singular matrix encountered ({context})")]
    Singular { context: &'static str },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("evaluation domain error: {message} at {point:?}")]
    EvalDomain { message: String, point: Vec<f64> },

    #[error("differentiation depth {required} exceeds backend maximum {max}")]
    Capability { required: usize, max: usize },

    #[error("invalid box domain: {0}")]
    InvalidDomain(String),

    #[error("unknown identifier `{0}`")]
    UnknownId(String),

    #[error("wrong number of parameters for `{id}`: expected {expected}, got {got}")]
    Arity { id: String, expected: String, got: usize },

    #[error("syntax error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T, E = GeomError> = std::result::Result<T, E>;
