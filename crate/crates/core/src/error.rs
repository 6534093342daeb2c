use thiserror::Error;

use crate::construction::SolveTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coordinate is NaN or infinite")]
    NonFinite,

    #[error("degenerate input: point set has affine dimension {dimension}, need 3")]
    DegenerateInput { dimension: usize },

    #[error("direction vector is zero")]
    ZeroDirection,

    #[error("face {0:?} is not a vertex of the polytope")]
    NotAVertex(Vec<usize>),

    #[error("face {0:?} is not a facet of the polytope")]
    NotAFacet(Vec<usize>),

    #[error("bad alignment: {0}")]
    BadAlignment(String),

    #[error("polytope is not convex: {0}")]
    NotConvex(String),

    #[error("invalid face lattice: {0}")]
    InvalidLattice(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("residual prefactor is singular: {0}")]
    PrefactorSingular(String),

    #[error("singular Jacobian at iteration {iteration} (pivot {pivot:e})")]
    SingularJacobian { iteration: usize, pivot: f64 },

    #[error("Newton iteration did not converge after {} iterations", trace.iterations())]
    NoConvergence { trace: Box<SolveTrace> },

    #[error("Newton converged to a root outside the admissible region: {reason}")]
    InfeasibleRoot {
        reason: String,
        trace: Box<SolveTrace>,
    },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
