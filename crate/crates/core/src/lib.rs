//! Order-preserving pattern matching (OPPM) over numeric sequences.
//!
//! A pattern `x` occurs at position `i` of a text `y` when the window
//! `y[i..i + |x|]` has the same relative order as `x`: for every pair of
//! indices, `x[a] <= x[b]` exactly when `y[i + a] <= y[i + b]`.
//!
//! Searching is done by filtration. Pattern and text are translated into
//! sequences over a small integer alphabet, the translated pattern is located
//! in the translated text with an exact matcher (SBNDM2), and each candidate
//! window is verified against the pattern's rank table. Three translations are
//! provided:
//!
//! * `Binary` (FCT): one bit per position, `s[i] >= s[i + 1]`.
//! * `Nr(q)`, neighborhood ranking: a `q`-bit code comparing `x[i]` against
//!   each of its next `q` neighbors.
//! * `No(q)`, neighborhood ordering: a `q(q+1)/2`-bit code describing the full
//!   relative order of `x[i..=i + q]`.
//!
//! ```
//! use oppm::{FilterScheme, Searcher};
//!
//! let pattern = [6, 5, 8, 4, 7];
//! let text = [8, 11, 10, 16, 15, 20, 13, 17, 14, 18, 20, 18, 25, 17, 20, 25, 26];
//! let searcher = Searcher::new(&pattern, FilterScheme::nr(2).unwrap()).unwrap();
//! let report = searcher.search(&text);
//! assert_eq!(report.occurrences, vec![3]);
//! ```
//!
//! The crate is `no_std` and only needs `alloc`. Wall-clock timing of searches
//! goes through the [`Clock`] trait so that callers with a monotonic clock can
//! plug it in.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod element;
mod error;
pub mod filter;
pub mod gen;
pub mod matcher;
pub mod rank;
pub mod search;

pub use element::{Element, Sequence};
pub use error::{Error, Result};
pub use filter::{CondensedSequence, FilterScheme, SchemeKind, StreamEncoder};
pub use matcher::MatcherProgram;
pub use rank::RankTable;
pub use search::{Clock, NoClock, SearchReport, Searcher};
