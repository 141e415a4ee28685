//! Deterministic benchmark corpora.
//!
//! All randomness comes from SplitMix64 seeded with the caller's seed (the
//! generator state is the seed itself). Bounded integers are drawn by
//! rejection: with `span` possible values, a draw `r` is accepted when
//! `r < (u64::MAX / span) * span` and mapped to `r % span`. Every other
//! implementation following these two rules reproduces the same corpora.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::element::{Element, Sequence};
use crate::error::{Error, Result};

/// Centre value of both corpus families.
pub const MEAN: i64 = 100;

/// One period of the Period-δ base signal:
/// `round(100 + 100 * sin(2 * pi * k / 10))` for `k = 0..10`.
pub const PERIOD_PROFILE: [i64; 10] = [100, 159, 195, 195, 159, 100, 41, 5, 5, 41];

/// Seeded source of uniform integers with a documented reduction.
#[derive(Debug, Clone)]
pub struct CorpusRng(SplitMix64);

impl CorpusRng {
    pub fn new(seed: u64) -> Self {
        CorpusRng(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform on `0..span`. `span` must be non-zero.
    pub fn below(&mut self, span: u64) -> u64 {
        assert!(span > 0, "empty range");
        let zone = (u64::MAX / span) * span;
        loop {
            let r = self.0.next_u64();
            if r < zone {
                return r % span;
            }
        }
    }

    /// Uniform on `lo..=hi`.
    pub fn inclusive(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range");
        let span = (hi as i128 - lo as i128 + 1) as u64;
        lo.wrapping_add(self.below(span) as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusKind {
    /// Uniform integers on `[100 - δ, 100 + δ]`.
    RandDelta,
    /// A period-10 signal plus uniform noise on `[-δ, δ]`, clamped to
    /// `[0, 200 + δ]`.
    PeriodDelta,
}

/// Storage type for generated elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ElementDomain {
    I32,
    #[default]
    I64,
    F64,
}

impl ElementDomain {
    /// Type code used by the binary sequence format.
    pub fn code(self) -> u8 {
        match self {
            ElementDomain::I32 => 0,
            ElementDomain::I64 => 1,
            ElementDomain::F64 => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(ElementDomain::I32),
            1 => Some(ElementDomain::I64),
            2 => Some(ElementDomain::F64),
            _ => None,
        }
    }
}

impl fmt::Display for ElementDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementDomain::I32 => "i32",
            ElementDomain::I64 => "i64",
            ElementDomain::F64 => "f64",
        })
    }
}

impl FromStr for ElementDomain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i32" => Ok(ElementDomain::I32),
            "i64" => Ok(ElementDomain::I64),
            "f64" => Ok(ElementDomain::F64),
            _ => Err(Error::InvalidParameter(
                "element domain must be i32, i64 or f64",
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub kind: CorpusKind,
    pub n: usize,
    pub delta: u32,
    pub seed: u64,
    pub domain: ElementDomain,
}

impl GenSpec {
    /// Generates the integer draws; convert with [`to_i32`] or [`to_f64`]
    /// according to `domain`.
    pub fn generate(&self) -> Result<Sequence<i64>> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("corpus length must be at least 1"));
        }
        match self.kind {
            CorpusKind::RandDelta => gen_rand_delta(self.n, self.delta, self.seed),
            CorpusKind::PeriodDelta => gen_period_delta(self.n, self.delta, self.seed),
        }
    }
}

/// `n` i.i.d. draws from `[100 - delta, 100 + delta]`. Requires `delta <= 100`.
pub fn gen_rand_delta(n: usize, delta: u32, seed: u64) -> Result<Sequence<i64>> {
    if delta as i64 > MEAN {
        return Err(Error::InvalidParameter("Rand-delta requires delta <= 100"));
    }
    let d = delta as i64;
    let mut rng = CorpusRng::new(seed);
    Sequence::new((0..n).map(|_| rng.inclusive(MEAN - d, MEAN + d)).collect())
}

/// Element `i` is `clamp(PERIOD_PROFILE[i % 10] + u_i, 0, 200 + delta)` with
/// `u_i` uniform on `[-delta, delta]`.
pub fn gen_period_delta(n: usize, delta: u32, seed: u64) -> Result<Sequence<i64>> {
    let d = delta as i64;
    let mut rng = CorpusRng::new(seed);
    Sequence::new(
        (0..n)
            .map(|i| (PERIOD_PROFILE[i % 10] + rng.inclusive(-d, d)).clamp(0, 200 + d))
            .collect(),
    )
}

/// `count` windows of length `m` taken at uniformly random start positions.
pub fn extract_patterns<T: Element>(
    y: &[T],
    m: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Sequence<T>>> {
    if m == 0 || m > y.len() {
        return Err(Error::WindowExceedsText {
            start: 0,
            len: m,
            text_len: y.len(),
        });
    }
    let mut rng = CorpusRng::new(seed);
    let starts = (y.len() - m + 1) as u64;
    (0..count)
        .map(|_| {
            let i = rng.below(starts) as usize;
            Sequence::new(y[i..i + m].to_vec())
        })
        .collect()
}

/// Narrows to `i32`, failing on values out of range.
pub fn to_i32(s: &Sequence<i64>) -> Result<Sequence<i32>> {
    if let Some(index) = s.iter().position(|&v| i32::try_from(v).is_err()) {
        return Err(Error::IndexOutOfRange {
            index,
            len: s.len(),
        });
    }
    s.map(|v| v as i32)
}

/// Widens to `f64`; exact for the magnitudes generated here.
pub fn to_f64(s: &Sequence<i64>) -> Sequence<f64> {
    Sequence::new(s.iter().map(|&v| v as f64).collect()).expect("integers are never NaN")
}
