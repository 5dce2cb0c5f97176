use std::path::PathBuf;

use thiserror::Error;

use crate::fitting::StretchedExponentialParams;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("input is not valid UTF-8: invalid sequence at byte offset {offset}")]
    Decode { offset: usize },

    #[error("empty input: a zero-length document is not analyzable")]
    EmptyDocument,

    #[error("unbalanced markers: {0}")]
    UnbalancedMarkers(String),

    #[error("invalid pattern `{pattern}`: {source}")]
    Pattern {
        pattern: String,
        #[source]
        source: regex::Error,
    },

    #[error("no segments for class {0}")]
    NoSegments(&'static str),

    #[error("empty token sequence")]
    NoTokens,

    #[error("token `{0}` is absent from the frequency table")]
    UnknownToken(String),

    #[error("cannot rank an empty series")]
    EmptySeries,

    #[error("non-positive value {value} at ordinal {ordinal}")]
    NonPositive { ordinal: usize, value: f64 },

    #[error("invalid fit window [{r_min}, {r_max}]: {reason}")]
    InvalidWindow {
        r_min: usize,
        r_max: usize,
        reason: &'static str,
    },

    #[error("fewer than 3 in-window points ({0} available)")]
    TooFewPoints(usize),

    #[error("degenerate stretched-exponential fit: {0}")]
    Degenerate(&'static str),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("stretched-exponential search did not converge after {iterations} iterations (best so far: {best:?}, residual {residual_sum})")]
    NotConverged {
        iterations: usize,
        best: StretchedExponentialParams,
        residual_sum: f64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
