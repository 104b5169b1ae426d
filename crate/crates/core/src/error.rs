use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid Dynkin type: {0}")]
    InvalidType(String),
    #[error("unsupported type {0} for this operation")]
    UnsupportedType(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("modules live over different quivers")]
    SignatureMismatch,
    #[error("leaf with End/rad of dimension {0}: ground field does not split this module")]
    NonSplit(usize),
    #[error("module is not in the catalog: {0}")]
    NotInCatalog(String),
    #[error("{0} has a projective direct summand")]
    ProjectiveSummand(String),
    #[error("summand {0} is projective; mutation is undefined there")]
    ProjectiveDirection(usize),
    #[error("module is not rigid (dim Ext^1 = {0})")]
    NotRigid(usize),
    #[error("module is not basic")]
    NotBasic,
    #[error("module is not complete rigid: {0} summands, expected {1}")]
    NotComplete(usize, usize),
    #[error("index {0} out of range (limit {1})")]
    OutOfRange(usize, usize),
    #[error("radical has codimension {0}, expected {1}")]
    RadicalCodimension(usize, usize),
    #[error("point count is not polynomial in q: {0}")]
    NonPolynomialCount(String),
    #[error("module too large: {0}")]
    TooLarge(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
