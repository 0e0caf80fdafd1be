use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coordinate ({x}, {y}) outside {width}x{height} lattice")]
    OutOfBounds {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("frame index {next} does not follow last recorded index {last}")]
    NonMonotonicFrame { last: u64, next: u64 },

    #[error(
        "frame dimensions {got_w}x{got_h} differ from trajectory dimensions {want_w}x{want_h}"
    )]
    FrameDimensions {
        want_w: usize,
        want_h: usize,
        got_w: usize,
        got_h: usize,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("iteration interval [{start}, {end}] outside trajectory range [{first}, {last}]")]
    IntervalOutOfRange {
        start: u64,
        end: u64,
        first: u64,
        last: u64,
    },

    #[error("invalid iteration interval: start {start} > end {end}")]
    InvalidInterval { start: u64, end: u64 },

    #[error("unsupported simplex dimension {0} (at most 3)")]
    UnsupportedDimension(usize),

    #[error("instance of {points} points exceeds the oracle guard of {limit}")]
    OracleTooLarge { points: usize, limit: usize },

    #[error("empty distance matrix")]
    EmptyMatrix,

    #[error("filtration invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
