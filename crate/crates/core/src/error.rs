use std::path::PathBuf;

/// Errors raised by grid construction, the Hartree-Fock model, the manifold
/// geometry and the solvers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("fields are sampled on different grids")]
    GridMismatch,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("non-finite sample {value} at lattice index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("atom {index} ({symbol}) is closer than {margin} bohr to the box boundary")]
    AtomOutsideBox {
        index: usize,
        symbol: String,
        margin: f64,
    },

    #[error("atoms {0} and {1} coincide")]
    CoincidentAtoms(usize, usize),

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not {kind} (relative asymmetry {defect:e})")]
    WrongSymmetry { kind: &'static str, defect: f64 },

    #[error("overlap matrix is numerically singular (smallest eigenvalue {min_eigenvalue:e})")]
    SingularOverlap { min_eigenvalue: f64 },

    #[error(
        "initial guess is linearly dependent (smallest overlap eigenvalue {min_eigenvalue:e}); \
         try a different seed"
    )]
    DegenerateGuess { min_eigenvalue: f64 },

    #[error("search direction is not a descent direction (slope {slope:e})")]
    NotDescent { slope: f64 },

    #[error("line search found no acceptable step after {reductions} reductions")]
    LineSearchFailed { reductions: usize },

    #[error("SCF diverged: energy rose for {0} consecutive iterations")]
    ScfDiverged(usize),

    #[error("orbital dump {path}: {message}")]
    Dump { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
