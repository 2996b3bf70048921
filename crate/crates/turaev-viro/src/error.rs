//! Error type shared across the crate.

use crate::scalar::Backend;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TvError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("cannot open {0}: {1}")]
    Io(String, std::io::Error),

    #[error("scalar backends {0} and {1} cannot mix exactly")]
    BackendMismatch(Backend, Backend),

    #[error("division by zero")]
    DivisionByZero,

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("unit fusion violated: {0}")]
    UnitFusion(String),

    #[error("pentagon identity violated at sextet (a={a}, b={b}, c={c}, d={d}; e={e}, f={f})")]
    Pentagon { a: usize, b: usize, c: usize, d: usize, e: usize, f: usize },

    #[error("dimension inconsistency: {0}")]
    DimensionInconsistency(String),

    #[error("missing or inconsistent square roots: {0}")]
    SquareRoot(String),

    #[error("invalid category data: {0}")]
    Category(String),

    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),

    #[error("incompatible words: {0}")]
    WordMismatch(String),

    #[error("invalid diagram: {0}")]
    Diagram(String),

    #[error("rotation system not spherical: {0}")]
    NotSpherical(String),

    #[error("invalid complex: {0}")]
    Complex(String),

    #[error("move not applicable: {0}")]
    MoveInapplicable(String),

    #[error("non-manifold gluing: {0}")]
    NonManifold(String),

    #[error("complex is not orientable")]
    NonOrientable,

    #[error("unknown canned object `{0}`")]
    UnknownCanned(String),

    #[error("invalid center object: {0}")]
    Center(String),

    #[error("invalid extended structure: {0}")]
    Extended(String),

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, TvError>;
