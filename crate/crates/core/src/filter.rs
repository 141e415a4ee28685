//! Condensed-alphabet encodings used as filters.
//!
//! Every scheme maps position `i` of a sequence to a small integer computed
//! from `x[i..=i + shrink]` alone, so a window that is order-isomorphic to the
//! pattern always produces the same symbols as the pattern does.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::element::{check_comparable, Element};
use crate::error::{Error, Result};

/// Largest `q` accepted for neighborhood ranking (codes fit in a byte).
pub const NR_MAX_Q: usize = 8;
/// Largest `q` accepted for neighborhood ordering (codes fit in 15 bits).
pub const NO_MAX_Q: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// One `>=` bit between neighbors (the FCT baseline).
    Binary,
    /// Neighborhood ranking.
    Nr,
    /// Neighborhood ordering.
    No,
}

/// A filter scheme with its neighborhood parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FilterScheme {
    kind: SchemeKind,
    q: u8,
}

impl FilterScheme {
    pub const fn binary() -> Self {
        FilterScheme {
            kind: SchemeKind::Binary,
            q: 1,
        }
    }

    pub fn nr(q: usize) -> Result<Self> {
        if !(1..=NR_MAX_Q).contains(&q) {
            return Err(Error::InvalidQ {
                scheme: "NR",
                q,
                max: NR_MAX_Q,
            });
        }
        Ok(FilterScheme {
            kind: SchemeKind::Nr,
            q: q as u8,
        })
    }

    pub fn no(q: usize) -> Result<Self> {
        if !(1..=NO_MAX_Q).contains(&q) {
            return Err(Error::InvalidQ {
                scheme: "NO",
                q,
                max: NO_MAX_Q,
            });
        }
        Ok(FilterScheme {
            kind: SchemeKind::No,
            q: q as u8,
        })
    }

    pub fn new(kind: SchemeKind, q: usize) -> Result<Self> {
        match kind {
            SchemeKind::Binary => Ok(Self::binary()),
            SchemeKind::Nr => Self::nr(q),
            SchemeKind::No => Self::no(q),
        }
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    /// Neighborhood parameter; `None` for the binary scheme.
    pub fn q(&self) -> Option<usize> {
        match self.kind {
            SchemeKind::Binary => None,
            _ => Some(self.q as usize),
        }
    }

    /// Number of trailing source elements that produce no symbol of their own.
    pub fn shrink(&self) -> usize {
        self.q as usize
    }

    /// Elements read per symbol (`shrink + 1`).
    pub fn window(&self) -> usize {
        self.shrink() + 1
    }

    pub fn alphabet_size(&self) -> u32 {
        let q = self.q as u32;
        match self.kind {
            SchemeKind::Binary => 2,
            SchemeKind::Nr => 1 << q,
            SchemeKind::No => 1 << (q * (q + 1) / 2),
        }
    }

    /// Encodes a whole sequence.
    pub fn encode<T: Element>(&self, x: &[T]) -> Result<CondensedSequence> {
        match self.kind {
            SchemeKind::Binary => binary_encode(x),
            SchemeKind::Nr => nr_encode(x, self.q as usize),
            SchemeKind::No => no_encode(x, self.q as usize),
        }
    }

    /// Symbol for a window of exactly `self.window()` elements.
    #[inline]
    pub(crate) fn symbol<T: Element>(&self, w: &[T]) -> u16 {
        match self.kind {
            SchemeKind::Binary => ge(w[0], w[1]),
            SchemeKind::Nr => nr_symbol(w, self.q as usize),
            SchemeKind::No => no_symbol(w, self.q as usize),
        }
    }

    /// Symbols of every window of `y`, with the scheme dispatch hoisted out
    /// of the loop. Assumes `y` holds comparable elements.
    pub(crate) fn encode_text<T: Element>(&self, y: &[T]) -> Vec<u16> {
        match (self.kind, self.q) {
            (SchemeKind::Binary, _) | (_, 1) => text_symbols::<T, 1>(y, nr_symbol),
            (SchemeKind::Nr, 2) => text_symbols::<T, 2>(y, nr_symbol),
            (SchemeKind::Nr, 3) => text_symbols::<T, 3>(y, nr_symbol),
            (SchemeKind::Nr, 4) => text_symbols::<T, 4>(y, nr_symbol),
            (SchemeKind::Nr, 5) => text_symbols::<T, 5>(y, nr_symbol),
            (SchemeKind::Nr, 6) => text_symbols::<T, 6>(y, nr_symbol),
            (SchemeKind::Nr, 7) => text_symbols::<T, 7>(y, nr_symbol),
            (SchemeKind::Nr, _) => text_symbols::<T, 8>(y, nr_symbol),
            (SchemeKind::No, 2) => text_symbols::<T, 2>(y, no_symbol),
            (SchemeKind::No, 3) => text_symbols::<T, 3>(y, no_symbol),
            (SchemeKind::No, 4) => text_symbols::<T, 4>(y, no_symbol),
            (SchemeKind::No, _) => text_symbols::<T, 5>(y, no_symbol),
        }
    }

    /// Short display name: `FCT`, `NR4`, `NO3`.
    pub fn name(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for FilterScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SchemeKind::Binary => f.write_str("FCT"),
            SchemeKind::Nr => write!(f, "NR{}", self.q),
            SchemeKind::No => write!(f, "NO{}", self.q),
        }
    }
}

impl FromStr for FilterScheme {
    type Err = Error;

    /// Accepts `fct`/`binary`, `nrQ` and `noQ`, case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "fct" || lower == "binary" {
            return Ok(Self::binary());
        }
        let parse_q = |rest: &str| {
            rest.parse::<usize>()
                .map_err(|_| Error::InvalidParameter("scheme must be fct, nr<q> or no<q>"))
        };
        if let Some(rest) = lower.strip_prefix("nr") {
            return Self::nr(parse_q(rest)?);
        }
        if let Some(rest) = lower.strip_prefix("no") {
            return Self::no(parse_q(rest)?);
        }
        Err(Error::InvalidParameter(
            "scheme must be fct, nr<q> or no<q>",
        ))
    }
}

/// A sequence over a small integer alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensedSequence {
    symbols: Vec<u16>,
    alphabet_size: u32,
    shrink: usize,
}

impl CondensedSequence {
    /// Wraps raw symbols; every symbol must be below `alphabet_size`.
    pub fn from_symbols(symbols: Vec<u16>, alphabet_size: u32) -> Result<Self> {
        if alphabet_size == 0 || alphabet_size > 1 << 16 {
            return Err(Error::InvalidParameter(
                "alphabet size must be in 1..=65536",
            ));
        }
        if let Some(index) = symbols.iter().position(|&s| s as u32 >= alphabet_size) {
            return Err(Error::IndexOutOfRange {
                index,
                len: symbols.len(),
            });
        }
        Ok(CondensedSequence {
            symbols,
            alphabet_size,
            shrink: 0,
        })
    }

    pub fn symbols(&self) -> &[u16] {
        &self.symbols
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    /// Source elements consumed beyond one per symbol.
    pub fn shrink(&self) -> usize {
        self.shrink
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

#[inline(always)]
fn ge<T: Element>(a: T, b: T) -> u16 {
    (a >= b) as u16
}

#[inline]
fn nr_symbol<T: Element>(w: &[T], q: usize) -> u16 {
    let head = w[0];
    w[1..=q].iter().fold(0, |acc, &v| (acc << 1) | ge(head, v))
}

#[inline]
fn no_symbol<T: Element>(w: &[T], q: usize) -> u16 {
    let mut acc = 0u16;
    // Blocks of width q, q-1, ..., 1; block k compares w[q-k] with the k
    // elements after it.
    for k in (1..=q).rev() {
        let head = w[q - k];
        for &v in &w[q - k + 1..=q] {
            acc = (acc << 1) | ge(head, v);
        }
    }
    acc
}

// The window width is a constant here so the symbol loops unroll.
fn text_symbols<T: Element, const Q: usize>(
    y: &[T],
    symbol: impl Fn(&[T], usize) -> u16,
) -> Vec<u16> {
    y.windows(Q + 1).map(|w| symbol(w, Q)).collect()
}

fn check_index(i: usize, len: usize) -> Result<()> {
    if i < len {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: i, len })
    }
}

fn check_neighborhood(len: usize, i: usize, q: usize) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidParameter("q must be at least 1"));
    }
    check_index(i.saturating_add(q), len)
}

/// `1` if `x[i] >= x[j]`, else `0`.
pub fn beta<T: Element>(x: &[T], i: usize, j: usize) -> Result<u8> {
    check_index(i, x.len())?;
    check_index(j, x.len())?;
    Ok(ge(x[i], x[j]) as u8)
}

/// The binary (FCT) transform: symbol `i` is `s[i] >= s[i + 1]`.
pub fn binary_encode<T: Element>(s: &[T]) -> Result<CondensedSequence> {
    if s.len() < 2 {
        return Err(Error::SequenceTooShort {
            len: s.len(),
            required: 2,
        });
    }
    check_comparable(s)?;
    Ok(CondensedSequence {
        symbols: s.windows(2).map(|w| ge(w[0], w[1])).collect(),
        alphabet_size: 2,
        shrink: 1,
    })
}

/// Neighborhood-ranking code of position `i`: bits `x[i] >= x[i + j]` for
/// `j = 1..=q`, the `j = 1` comparison in the most significant bit.
pub fn nr_value<T: Element>(x: &[T], i: usize, q: usize) -> Result<u16> {
    check_neighborhood(x.len(), i, q)?;
    if q > NR_MAX_Q {
        return Err(Error::InvalidQ {
            scheme: "NR",
            q,
            max: NR_MAX_Q,
        });
    }
    Ok(nr_symbol(&x[i..=i + q], q))
}

fn encode_windows<T: Element>(
    x: &[T],
    q: usize,
    alphabet_size: u32,
    symbol: impl Fn(&[T]) -> u16,
) -> Result<CondensedSequence> {
    if x.len() <= q {
        return Err(Error::ShorterThanNeighborhood { len: x.len(), q });
    }
    check_comparable(x)?;
    Ok(CondensedSequence {
        symbols: x.windows(q + 1).map(symbol).collect(),
        alphabet_size,
        shrink: q,
    })
}

/// Neighborhood-ranking sequence, length `|x| - q`, alphabet `2^q`.
pub fn nr_encode<T: Element>(x: &[T], q: usize) -> Result<CondensedSequence> {
    let scheme = FilterScheme::nr(q)?;
    encode_windows(x, q, scheme.alphabet_size(), |w| nr_symbol(w, q))
}

/// Neighborhood-ordering code of position `i`: the NR codes of width
/// `q, q-1, ..., 1` at positions `i, i+1, ..., i+q-1`, concatenated with the
/// widest block most significant.
pub fn no_value<T: Element>(x: &[T], i: usize, q: usize) -> Result<u16> {
    check_neighborhood(x.len(), i, q)?;
    if q > NO_MAX_Q {
        return Err(Error::InvalidQ {
            scheme: "NO",
            q,
            max: NO_MAX_Q,
        });
    }
    Ok(no_symbol(&x[i..=i + q], q))
}

/// Neighborhood-ordering sequence, length `|x| - q`, alphabet `2^(q(q+1)/2)`.
pub fn no_encode<T: Element>(x: &[T], q: usize) -> Result<CondensedSequence> {
    let scheme = FilterScheme::no(q)?;
    encode_windows(x, q, scheme.alphabet_size(), |w| no_symbol(w, q))
}

/// Online encoder: one element in, at most one symbol out.
///
/// Keeps the last `shrink + 1` elements in a doubled ring so the current
/// window is always a contiguous slice.
#[derive(Debug, Clone)]
pub struct StreamEncoder<T> {
    scheme: FilterScheme,
    ring: Vec<T>,
    seen: usize,
}

impl<T: Element> StreamEncoder<T> {
    pub fn new(scheme: FilterScheme) -> Self {
        StreamEncoder {
            scheme,
            ring: Vec::new(),
            seen: 0,
        }
    }

    pub fn scheme(&self) -> FilterScheme {
        self.scheme
    }

    /// Elements consumed so far.
    pub fn seen(&self) -> usize {
        self.seen
    }

    pub fn reset(&mut self) {
        self.ring.clear();
        self.seen = 0;
    }

    /// Consumes `e`; returns the symbol for the window ending at `e` once the
    /// encoder has seen `shrink + 1` elements.
    #[inline]
    pub fn push(&mut self, e: T) -> Option<u16> {
        let w = self.scheme.window();
        if self.ring.is_empty() {
            self.ring = vec![e; 2 * w];
        }
        let slot = self.seen % w;
        self.ring[slot] = e;
        self.ring[slot + w] = e;
        self.seen += 1;
        if self.seen < w {
            return None;
        }
        Some(self.scheme.symbol(&self.ring[slot + 1..slot + 1 + w]))
    }

    /// Encodes all of `xs`, appending emitted symbols to `out`.
    pub fn extend_into(&mut self, xs: &[T], out: &mut Vec<u16>) {
        out.reserve(xs.len());
        out.extend(xs.iter().filter_map(|&e| self.push(e)));
    }
}

/// Encodes `y` through a [`StreamEncoder`] and wraps the result.
pub fn stream_encode_all<T: Element>(scheme: FilterScheme, y: &[T]) -> CondensedSequence {
    let mut enc = StreamEncoder::new(scheme);
    let mut symbols = Vec::new();
    enc.extend_into(y, &mut symbols);
    CondensedSequence {
        symbols,
        alphabet_size: scheme.alphabet_size(),
        shrink: scheme.shrink(),
    }
}
