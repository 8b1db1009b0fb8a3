use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("coordinate ({row}, {col}) outside a {k}x{k} matrix")]
    CoordinateOutOfRange { row: usize, col: usize, k: usize },

    #[error("duplicate coordinate ({row}, {col})")]
    DuplicateCoordinate { row: usize, col: usize },

    #[error("entry {index} is {value}, expected 0 or 1")]
    NonBinary { index: usize, value: f64 },

    #[error("entry {index} is not finite")]
    NonFinite { index: usize },

    #[error("intractable size: k = {k} exceeds the exhaustive-search cap of {cap}")]
    IntractableSize { k: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite state in simulated bifurcation at step {step}")]
    NonFiniteState { step: usize },

    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: Vec<usize>,
        right: Vec<usize>,
    },

    #[error("backward already ran on this tape; reset it first")]
    BackwardTwice,

    #[error("backward needs a scalar loss, got shape {0:?}")]
    NotScalar(Vec<usize>),

    #[error("undefined reference objective: |f_o| = {0:e} is too close to zero")]
    UndefinedReference(f64),

    #[error("graph has no edges")]
    EdgelessGraph,

    #[error("training split is empty")]
    EmptyTrainingSplit,

    #[error("parameter `{0}` is missing")]
    MissingParameter(String),

    #[error("unexpected parameter `{0}`")]
    UnexpectedParameter(String),

    #[error("parameter `{name}` has shape {found:?}, expected {expected:?}")]
    ParameterShape {
        name: String,
        expected: Vec<usize>,
        found: Vec<usize>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
