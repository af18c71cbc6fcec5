use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is not square")]
    NotSquare,
    #[error("bilinear form is degenerate")]
    Degenerate,
    #[error("lattice is not even")]
    NotEven,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("monodromy does not preserve the form")]
    NotIsometry,
    #[error("monodromy is not quasi-unipotent with (T^e - 1)^3 = 0")]
    NotQuasiUnipotent,
    #[error("N^3 is nonzero")]
    NotNilpotentOrder3,
    #[error("invariant identity failed: {0}")]
    InvariantInconsistency(String),
    #[error("sublattice is not isotropic")]
    NotIsotropic,
    #[error("W2 is not the orthogonal complement of W1")]
    NotPerp,
    #[error("expected a degeneration of type {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("lattice is not positive definite")]
    NotPositiveDefinite,
    #[error("negative argument {0}")]
    NegativeArgument(f64),
    #[error("expected rank {expected}, found {found}")]
    WrongRank { expected: usize, found: usize },
    #[error("input expansion has non-holomorphic coefficients")]
    NotHolomorphicInput,
    #[error("path integral did not reach tolerance {0:e}")]
    PathTruncationFailure(f64),
    #[error("truncation tail bound {bound:e} exceeds tolerance {tol:e}")]
    TruncationBudgetExceeded { bound: f64, tol: f64 },
    #[error("weight mismatch: expected {expected}, found {found}")]
    WeightMismatch { expected: String, found: String },
    #[error("class index or exponent mismatch: {0}")]
    ClassIndexMismatch(String),
    #[error("rank {0} too small for the q d/dq replacement")]
    RankTooSmall(usize),
    #[error("vector is not in W2")]
    NotInW2,
    #[error("invalid orbit model: {0}")]
    InvalidModel(String),
    #[error("cutoff too small: tail bound {bound:e} exceeds {tol:e}")]
    CutoffTooSmall { bound: f64, tol: f64 },
    #[error("signature ({0}, {1}) is not of the form (n, 2)")]
    BadSignature(usize, usize),
    #[error("slope fit unstable: residual {0:e}")]
    FitUnstable(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
