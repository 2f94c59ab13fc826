use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: String, actual: String },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {deviation:.3e} > {tol:.1e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("local dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state has no antisymmetric component (Tr(P_A rho) = {0:.3e})")]
    NoAntisymmetricComponent(f64),

    #[error("input state is not supported on the antisymmetric subspace (deviation {0:.3e})")]
    NotAntisymmetric(f64),

    #[error("product factors are parallel (|<a|b>| = {0})")]
    ParallelFactors(f64),

    #[error("problem too large: {0}")]
    ProblemTooLarge(String),

    #[error("malformed problem: {0}")]
    MalformedProblem(String),

    #[error("solver did not converge after {iterations} iterations (primal {primal:.3e}, dual {dual:.3e}, gap {gap:.3e})")]
    SolverNotConverged {
        iterations: usize,
        primal: f64,
        dual: f64,
        gap: f64,
    },

    #[error("solver detected an infeasible problem")]
    Infeasible,

    #[error("tolerance violation: {0}")]
    Tolerance(String),
}
