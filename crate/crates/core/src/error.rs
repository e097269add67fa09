use thiserror::Error;

use crate::check::Violation;
use crate::field::ScalarField;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(ScalarField, ScalarField),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("linear system has no solution")]
    NoSolution,

    #[error("interpolation nodes are not distinct")]
    DuplicateNode,

    #[error("interpolation node must be nonzero")]
    ZeroNode,

    #[error("characteristic {characteristic} must exceed {required}")]
    CharacteristicTooSmall {
        characteristic: u64,
        required: usize,
    },

    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),

    #[error("value {0} has no image in {1}")]
    NotRepresentable(String, ScalarField),

    #[error("fixed-point iteration did not stabilize after {0} steps")]
    ConvergenceFailure(usize),

    #[error("algebra is not nilpotent")]
    NotNilpotent,

    #[error("not a pre-Lie algebra: {0}")]
    NotPreLie(Violation),

    #[error("not a valid brace: {0}")]
    InvalidBrace(Violation),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("unbound symbol '{0}'")]
    UnboundSymbol(char),

    #[error("left operand coefficient {0} is not an integer")]
    NonIntegralCoefficient(String),

    #[error("degree {0} component is not a Lie element")]
    NotLieElement(usize),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
