use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must have at least one row and column")]
    Empty,
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("{routine} did not converge within {iterations} iterations (order {order}, matrix fingerprint {fingerprint:016x})")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
        order: usize,
        fingerprint: u64,
    },
    #[error("operation is undefined for the zero matrix")]
    ZeroMatrix,
    #[error("exponent p = {0} must lie strictly between 1 and infinity")]
    InvalidExponent(f64),
    #[error("expected a unit vector, got norm {norm}")]
    NotUnit { norm: f64 },
    #[error("zero vector is not admissible here")]
    ZeroVector,
    #[error("vector lies in (or numerically next to) the kernel of A")]
    NearKernel,
    #[error("A vanishes on the requested domain subspace")]
    VanishesOnDomain,
    #[error("gap requires M not contained in N, but every direction of M lies in N")]
    SubspaceContained,
    #[error("hypothesis R(A)\u{2229}N(A)={{0}} violated: rank(A) = {rank}, rank(A^2) = {rank_of_square}")]
    RangeKernelOverlap { rank: usize, rank_of_square: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("matrix order {0} outside the supported range [2, 12]")]
    OrderOutOfRange(usize),
    #[error("{family} predicate still failing after {attempts} regenerations (seed {seed})")]
    GenerationFailed {
        family: &'static str,
        attempts: usize,
        seed: u64,
    },
}
