//! Sequence files.
//!
//! Two encodings are accepted:
//!
//! * text: decimal literals separated by any whitespace. A file whose tokens
//!   all parse as integers is read as `i64`, otherwise as `f64`.
//! * binary: the magic bytes `OPSQ`, one element-type byte (0 = i32,
//!   1 = i64, 2 = f64), the element count as a little-endian `u64`, then the
//!   elements packed little-endian.
//!
//! Readers detect the binary form by its magic prefix.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use oppm::gen::{self, ElementDomain};
use oppm::Sequence;
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"OPSQ";
const HEADER_LEN: usize = 4 + 1 + 8;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("missing OPSQ magic bytes")]
    BadMagic,
    #[error("unknown element type code {0}")]
    UnknownType(u8),
    #[error("binary sequence truncated: header declares {declared} elements, payload holds {available} bytes")]
    Truncated { declared: u64, available: usize },
    #[error("binary sequence has {0} trailing bytes")]
    TrailingBytes(usize),
    #[error("line {line}: cannot parse {token:?} as a number")]
    Parse { line: usize, token: String },
    #[error(transparent)]
    Sequence(#[from] oppm::Error),
}

/// A sequence tagged with its storage type.
#[derive(Debug, Clone, PartialEq)]
pub enum TypedSequence {
    I32(Sequence<i32>),
    I64(Sequence<i64>),
    F64(Sequence<f64>),
}

impl TypedSequence {
    /// Converts generated integer draws into `domain`.
    pub fn from_generated(s: Sequence<i64>, domain: ElementDomain) -> Result<Self, oppm::Error> {
        Ok(match domain {
            ElementDomain::I32 => TypedSequence::I32(gen::to_i32(&s)?),
            ElementDomain::I64 => TypedSequence::I64(s),
            ElementDomain::F64 => TypedSequence::F64(gen::to_f64(&s)),
        })
    }

    pub fn domain(&self) -> ElementDomain {
        match self {
            TypedSequence::I32(_) => ElementDomain::I32,
            TypedSequence::I64(_) => ElementDomain::I64,
            TypedSequence::F64(_) => ElementDomain::F64,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            TypedSequence::I32(s) => s.len(),
            TypedSequence::I64(s) => s.len(),
            TypedSequence::F64(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Widens to `domain`. Widening never changes relative order; `i64`
    /// values beyond 2^53 may lose precision as `f64`.
    pub fn widen(&self, domain: ElementDomain) -> Option<TypedSequence> {
        use TypedSequence::*;
        let out = match (self, domain) {
            (I32(s), ElementDomain::I32) => I32(s.clone()),
            (I32(s), ElementDomain::I64) => I64(s.map(i64::from).ok()?),
            (I32(s), ElementDomain::F64) => F64(s.map(f64::from).ok()?),
            (I64(s), ElementDomain::I64) => I64(s.clone()),
            (I64(s), ElementDomain::F64) => F64(s.map(|v| v as f64).ok()?),
            (F64(s), ElementDomain::F64) => F64(s.clone()),
            _ => return None,
        };
        Some(out)
    }
}

/// The narrowest domain that holds both `a` and `b` without reordering.
pub fn common_domain(a: ElementDomain, b: ElementDomain) -> ElementDomain {
    use ElementDomain::*;
    match (a, b) {
        (F64, _) | (_, F64) => F64,
        (I64, _) | (_, I64) => I64,
        _ => I32,
    }
}

pub fn encode_binary(seq: &TypedSequence) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + seq.len() * 8);
    out.extend_from_slice(MAGIC);
    out.push(seq.domain().code());
    out.extend_from_slice(&(seq.len() as u64).to_le_bytes());
    match seq {
        TypedSequence::I32(s) => s
            .iter()
            .for_each(|v| out.extend_from_slice(&v.to_le_bytes())),
        TypedSequence::I64(s) => s
            .iter()
            .for_each(|v| out.extend_from_slice(&v.to_le_bytes())),
        TypedSequence::F64(s) => s
            .iter()
            .for_each(|v| out.extend_from_slice(&v.to_le_bytes())),
    }
    out
}

pub fn decode_binary(bytes: &[u8]) -> Result<TypedSequence, FormatError> {
    if !bytes.starts_with(MAGIC) {
        return Err(FormatError::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(FormatError::Truncated {
            declared: 0,
            available: bytes.len(),
        });
    }
    let domain = ElementDomain::from_code(bytes[4]).ok_or(FormatError::UnknownType(bytes[4]))?;
    let declared = u64::from_le_bytes(bytes[5..13].try_into().expect("8 bytes"));
    let payload = &bytes[HEADER_LEN..];
    let width = match domain {
        ElementDomain::I32 => 4,
        ElementDomain::I64 | ElementDomain::F64 => 8,
    };
    let needed = declared
        .checked_mul(width as u64)
        .filter(|&n| n <= payload.len() as u64)
        .ok_or(FormatError::Truncated {
            declared,
            available: payload.len(),
        })? as usize;
    if payload.len() > needed {
        return Err(FormatError::TrailingBytes(payload.len() - needed));
    }
    let chunks = payload.chunks_exact(width);
    Ok(match domain {
        ElementDomain::I32 => TypedSequence::I32(Sequence::new(
            chunks
                .map(|c| i32::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        )?),
        ElementDomain::I64 => TypedSequence::I64(Sequence::new(
            chunks
                .map(|c| i64::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        )?),
        ElementDomain::F64 => TypedSequence::F64(Sequence::new(
            chunks
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        )?),
    })
}

/// One element per line. Floats use Rust's shortest round-trip form with
/// a decimal point, so they read back as `f64`.
pub fn format_text(seq: &TypedSequence) -> String {
    let mut out = String::with_capacity(seq.len() * 4);
    match seq {
        TypedSequence::I32(s) => s.iter().for_each(|v| writeln!(out, "{v}").unwrap()),
        TypedSequence::I64(s) => s.iter().for_each(|v| writeln!(out, "{v}").unwrap()),
        TypedSequence::F64(s) => s.iter().for_each(|v| writeln!(out, "{v:?}").unwrap()),
    }
    out
}

pub fn parse_text(text: &str) -> Result<TypedSequence, FormatError> {
    let tokens = || {
        text.lines()
            .enumerate()
            .flat_map(|(n, line)| line.split_whitespace().map(move |t| (n + 1, t)))
    };
    let ints: Result<Vec<i64>, _> = tokens().map(|(_, t)| t.parse::<i64>()).collect();
    if let Ok(ints) = ints {
        return Ok(TypedSequence::I64(Sequence::new(ints)?));
    }
    let floats = tokens()
        .map(|(line, t)| {
            t.parse::<f64>().map_err(|_| FormatError::Parse {
                line,
                token: t.to_string(),
            })
        })
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(TypedSequence::F64(Sequence::new(floats)?))
}

pub fn parse_bytes(bytes: &[u8]) -> Result<TypedSequence, FormatError> {
    if bytes.starts_with(MAGIC) {
        return decode_binary(bytes);
    }
    let text = std::str::from_utf8(bytes).map_err(|e| FormatError::Parse {
        line: 0,
        token: e.to_string(),
    })?;
    parse_text(text)
}

pub fn read_sequence(path: &Path) -> Result<TypedSequence, FormatError> {
    let bytes = fs::read(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_bytes(&bytes)
}

pub fn write_sequence(path: &Path, seq: &TypedSequence, binary: bool) -> Result<(), FormatError> {
    let bytes = if binary {
        encode_binary(seq)
    } else {
        format_text(seq).into_bytes()
    };
    fs::write(path, bytes).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}
