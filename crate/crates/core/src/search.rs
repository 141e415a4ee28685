//! Filtration search: encode, scan for candidates, verify.

use alloc::vec::Vec;
use core::time::Duration;

use crate::element::{check_comparable, Element};
use crate::error::{Error, Result};
use crate::filter::{CondensedSequence, FilterScheme};
use crate::matcher::{naive_find, MatcherProgram};
use crate::rank::{brute_force_isomorphic, RankTable};

/// Default false-positive normalisation window (2^20 text elements).
pub const FP_WINDOW: u64 = 1 << 20;

/// Monotonic time source used to split search time into phases.
pub trait Clock {
    /// Time elapsed since an arbitrary fixed origin.
    fn now(&self) -> Duration;
}

/// A clock that never advances; reported durations are zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now(&self) -> Duration {
        Duration::ZERO
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    /// Start positions of order-preserving occurrences, ascending.
    pub occurrences: Vec<usize>,
    /// Windows that passed the filter.
    pub candidates: usize,
    pub text_len: usize,
    /// Streaming encode plus candidate scan.
    pub filter_time: Duration,
    pub verify_time: Duration,
}

impl SearchReport {
    pub fn false_positives(&self) -> usize {
        self.candidates - self.occurrences.len()
    }

    /// False positives scaled to `window` text elements.
    pub fn fp_per_window(&self, window: u64) -> f64 {
        if self.text_len == 0 {
            return 0.0;
        }
        self.false_positives() as f64 * window as f64 / self.text_len as f64
    }

    pub fn total_time(&self) -> Duration {
        self.filter_time + self.verify_time
    }
}

#[derive(Debug, Clone)]
enum Engine {
    Sbndm2(MatcherProgram),
    /// Condensed patterns of a single symbol.
    Naive,
}

/// A preprocessed pattern ready to search any number of texts.
#[derive(Debug, Clone)]
pub struct Searcher {
    scheme: FilterScheme,
    ranks: RankTable,
    pattern: CondensedSequence,
    engine: Engine,
}

impl Searcher {
    /// Builds the rank table and the condensed pattern, and compiles the
    /// matcher. Requires `|x| >= 2` and `|x| > shrink(scheme)`.
    pub fn new<T: Element>(x: &[T], scheme: FilterScheme) -> Result<Self> {
        check_comparable(x)?;
        if x.len() < 2 || x.len() <= scheme.shrink() {
            return Err(Error::SequenceTooShort {
                len: x.len(),
                required: (scheme.shrink() + 1).max(2),
            });
        }
        let ranks = RankTable::new(x)?;
        let pattern = scheme.encode(x)?;
        let engine = if pattern.len() >= 2 {
            Engine::Sbndm2(MatcherProgram::compile(&pattern)?)
        } else {
            Engine::Naive
        };
        Ok(Searcher {
            scheme,
            ranks,
            pattern,
            engine,
        })
    }

    pub fn scheme(&self) -> FilterScheme {
        self.scheme
    }

    pub fn rank_table(&self) -> &RankTable {
        &self.ranks
    }

    pub fn condensed_pattern(&self) -> &CondensedSequence {
        &self.pattern
    }

    pub fn pattern_len(&self) -> usize {
        self.ranks.len()
    }

    /// Searches `y` without timing.
    pub fn search<T: Element>(&self, y: &[T]) -> SearchReport {
        self.search_timed(y, &NoClock)
    }

    /// Searches `y`, measuring the filter and verification phases on `clock`.
    pub fn search_timed<T: Element, C: Clock>(&self, y: &[T], clock: &C) -> SearchReport {
        let t0 = clock.now();
        let candidates = self.candidate_positions(y);
        let t1 = clock.now();
        let m = self.pattern_len();
        let occurrences: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&i| self.ranks.matches_window(&y[i..i + m]))
            .collect();
        let t2 = clock.now();
        SearchReport {
            occurrences,
            candidates: candidates.len(),
            text_len: y.len(),
            filter_time: t1.saturating_sub(t0),
            verify_time: t2.saturating_sub(t1),
        }
    }

    /// Text positions whose condensed window equals the condensed pattern.
    ///
    /// Condensed position `i` covers text elements `i..=i + shrink`, so a
    /// match there is the candidate window `y[i..i + m]`.
    pub fn candidate_positions<T: Element>(&self, y: &[T]) -> Vec<usize> {
        if y.len() < self.pattern_len() {
            return Vec::new();
        }
        let text = self.scheme.encode_text(y);
        match &self.engine {
            Engine::Sbndm2(prog) => {
                let mut out = Vec::new();
                prog.for_each_match(&text, |i| out.push(i));
                out
            }
            Engine::Naive => naive_find(self.pattern.symbols(), &text),
        }
    }
}

/// Shorthand for [`Searcher::new`].
pub fn preprocess<T: Element>(x: &[T], scheme: FilterScheme) -> Result<Searcher> {
    Searcher::new(x, scheme)
}

/// Every window checked pairwise; the correctness reference.
pub fn brute_force_search<T: Element>(x: &[T], y: &[T]) -> Vec<usize> {
    if x.is_empty() || x.len() > y.len() {
        return Vec::new();
    }
    y.windows(x.len())
        .enumerate()
        .filter(|(_, w)| brute_force_isomorphic(x, w))
        .map(|(i, _)| i)
        .collect()
}
