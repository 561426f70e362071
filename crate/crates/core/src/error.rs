use std::fmt;

use crate::activation::ActivationKind;

/// Matrix dimensions as `(rows, cols)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims(pub usize, pub usize);

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {left} vs {right}")]
    Shape {
        op: &'static str,
        left: Dims,
        right: Dims,
    },

    #[error("matrix is singular: pivot {pivot} below tolerance")]
    Singular { pivot: usize },

    #[error("activation {0} is not invertible")]
    NotInvertible(ActivationKind),

    #[error("value {value} outside the domain of the {kind} inverse")]
    Domain { kind: ActivationKind, value: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed model file (line {line}): {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn shape(op: &'static str, left: (usize, usize), right: (usize, usize)) -> Self {
        Error::Shape {
            op,
            left: Dims(left.0, left.1),
            right: Dims(right.0, right.1),
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
