use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    EmptyPattern,
    WindowExceedsText {
        start: usize,
        len: usize,
        text_len: usize,
    },
    IndexOutOfRange {
        index: usize,
        len: usize,
    },
    /// The sequence has fewer elements than the scheme consumes per symbol.
    SequenceTooShort {
        len: usize,
        required: usize,
    },
    /// `|x| <= q` for a neighborhood scheme.
    ShorterThanNeighborhood {
        len: usize,
        q: usize,
    },
    InvalidQ {
        scheme: &'static str,
        q: usize,
        max: usize,
    },
    PatternTooShortForEngine {
        len: usize,
    },
    /// An element that is not comparable with itself (a floating-point NaN).
    Incomparable {
        index: usize,
    },
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyPattern => f.write_str("empty pattern"),
            Error::WindowExceedsText {
                start,
                len,
                text_len,
            } => write!(
                f,
                "window exceeds text: start {start} + length {len} > text length {text_len}"
            ),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
            Error::SequenceTooShort { len, required } => write!(
                f,
                "sequence too short for scheme: length {len}, need at least {required}"
            ),
            Error::ShorterThanNeighborhood { len, q } => {
                write!(f, "pattern shorter than q+1: length {len}, q = {q}")
            }
            Error::InvalidQ { scheme, q, max } => {
                write!(f, "{scheme} requires 1 <= q <= {max}, got {q}")
            }
            Error::PatternTooShortForEngine { len } => write!(
                f,
                "pattern too short for engine: {len} symbols, SBNDM2 needs at least 2"
            ),
            Error::Incomparable { index } => {
                write!(f, "element at index {index} is not comparable (NaN)")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl core::error::Error for Error {}
