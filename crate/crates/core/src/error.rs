use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Reasons a node list does not describe an admissible time partition.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshError {
    /// Fewer than two nodes.
    TooFewNodes,
    /// The first node is not exactly zero.
    NonZeroStart(f64),
    /// `nodes[index] <= nodes[index - 1]`, or a node is not finite.
    NotIncreasing { index: usize },
    /// Element `element` (0-based) and its mirror image differ in length.
    NotPalindromic {
        element: usize,
        length: f64,
        mirror: f64,
    },
}

impl fmt::Display for MeshError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshError::TooFewNodes => write!(f, "a mesh needs at least two nodes"),
            MeshError::NonZeroStart(s) => write!(f, "first node must be 0, got {s}"),
            MeshError::NotIncreasing { index } => {
                write!(f, "nodes are not strictly increasing at index {index}")
            }
            MeshError::NotPalindromic { element, length, mirror } => write!(
                f,
                "element lengths are not symmetric: element {element} has length {length}, its mirror {mirror}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidArgument(&'static str),
    InvalidMesh(MeshError),
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// Elimination met a pivot below the relative threshold in `row`.
    SingularSystem {
        row: usize,
    },
    /// The forcing term has no closed-form exact solution.
    NoClosedForm,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InvalidMesh(e) => write!(f, "invalid mesh: {e}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::SingularSystem { row } => {
                write!(f, "linear system is numerically singular (row {row})")
            }
            Error::NoClosedForm => write!(f, "no closed-form solution for this forcing"),
        }
    }
}

impl core::error::Error for Error {}

impl From<MeshError> for Error {
    fn from(e: MeshError) -> Self {
        Error::InvalidMesh(e)
    }
}
