use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Evaluation point outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed call arguments (reversed interval, empty rule, ...).
    #[error("argument error: {0}")]
    Argument(String),

    /// Model parameters violate their invariants.
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    /// The finite-difference stencil does not fit inside `(0, 1]` around the point.
    #[error("stencil error at t = {t}: need 1 - t >= {required_margin:.3e}")]
    Stencil { t: f64, required_margin: f64 },

    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Picard iterates left the divergence bracket.
    #[error(
        "fixed-point iteration diverged after {iterations} iterates (sup-norm {sup_norm:.3e})"
    )]
    Divergence { iterations: usize, sup_norm: f64 },

    #[error("configuration error: {0}")]
    Configuration(String),
}
