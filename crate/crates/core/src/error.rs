use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("invalid curve obstacle: {0}")]
    InvalidCurve(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The intersection root could not be polished onto the boundary. This
    /// only happens for rays that are numerically tangent to a body.
    #[error("root finder did not converge for ray origin {origin:?} direction {direction:?}")]
    RootNotConverged {
        origin: Vec<f64>,
        direction: Vec<f64>,
    },

    #[error("trajectory did not escape")]
    NotEscaped,

    #[error("time reversal produced {reversed} events, forward trajectory had {forward}")]
    ReversibilityFailure { forward: usize, reversed: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("spectrum grids differ: {0}")]
    GridMismatch(String),
}
