use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("constraint normal is identically zero")]
    ZeroNormal,
    #[error("point does not satisfy the span equalities")]
    OutsideSpan,
    #[error("point lies on hyperplane #{0}")]
    DegeneratePoint(usize),
    #[error("ray does not cross any hyperplane")]
    NoCrossing,
    #[error("cost image lies on a chamber wall (basis {0:?} has a zero coefficient)")]
    BoundaryCost(Vec<usize>),
    #[error("row space of the lattice basis contains no strictly positive vector")]
    NoPositiveVector,
    #[error("lattice basis ideal could not be certified saturated")]
    NotSaturated,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("neither orientation of circuit {0:?} has t_+(Z) inside the triangulation")]
    OrientationFailure(Vec<usize>),
    #[error("circuit with support {0:?} not found among the supplied circuits")]
    MissingCircuit(Vec<usize>),
    #[error("term order does not refine the cost vector")]
    OrderMismatch,
    #[error("start point is infeasible: {0}")]
    InfeasibleStart(String),
    #[error("symmetry reduction unavailable: {0}")]
    SymmetryUnavailable(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
