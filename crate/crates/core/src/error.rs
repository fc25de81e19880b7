use thiserror::Error;

use crate::partition::Partition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("partition {partition} has no part equal to {part}")]
    MissingPart { partition: Partition, part: usize },

    #[error("box ({row}, {col}) lies outside partition {partition}")]
    BoxOutside {
        partition: Partition,
        row: usize,
        col: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("input is not homogeneous (found degrees {0:?})")]
    Inhomogeneous(Vec<usize>),

    #[error("degree window too small: {0}")]
    WindowTooSmall(String),

    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("mismatched symmetric group sizes: {0} vs {1}")]
    MismatchedDegree(usize, usize),

    #[error("singular parameters: {0}")]
    Singular(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
