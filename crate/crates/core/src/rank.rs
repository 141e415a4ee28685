//! Rank and equality tables, and order-isomorphism checks.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::element::{check_comparable, Element};
use crate::error::{Error, Result};

/// The relative order of a pattern: its stable argsort plus a flag per
/// adjacent rank pair recording whether the two values are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    order: Vec<usize>,
    eq: Vec<bool>,
}

impl RankTable {
    /// Builds the table for `x` in `O(m log m)`.
    ///
    /// `order[k]` is the index of the `k`-th smallest element; equal values
    /// keep their original index order. `eq[k]` is set when
    /// `x[order[k]] == x[order[k + 1]]`.
    pub fn new<T: Element>(x: &[T]) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptyPattern);
        }
        check_comparable(x)?;
        let mut order: Vec<usize> = (0..x.len()).collect();
        // sort_by is stable, which gives the index tie-break.
        order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap_or(Ordering::Equal));
        let eq = order.windows(2).map(|w| x[w[0]] == x[w[1]]).collect();
        Ok(RankTable { order, eq })
    }

    /// Pattern length `m`.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Equality flags, one per adjacent pair of ranks (`m - 1` entries).
    pub fn eq(&self) -> &[bool] {
        &self.eq
    }

    /// Returns whether `y[i..i + m]` is order-isomorphic to the pattern.
    pub fn is_isomorphic_at<T: Element>(&self, y: &[T], i: usize) -> Result<bool> {
        let m = self.len();
        match i.checked_add(m) {
            Some(end) if end <= y.len() => Ok(self.matches_window(&y[i..end])),
            _ => Err(Error::WindowExceedsText {
                start: i,
                len: m,
                text_len: y.len(),
            }),
        }
    }

    /// Verification against a window of exactly `m` elements.
    #[inline]
    pub(crate) fn matches_window<T: Element>(&self, w: &[T]) -> bool {
        debug_assert_eq!(w.len(), self.order.len());
        for (k, pair) in self.order.windows(2).enumerate() {
            let lo = w[pair[0]];
            let hi = w[pair[1]];
            if lo > hi {
                return false;
            }
            // lo <= hi here; the flag decides between tie and strict increase.
            if (lo == hi) != self.eq[k] {
                return false;
            }
        }
        true
    }
}

/// Shorthand for [`RankTable::new`].
pub fn rank_table<T: Element>(x: &[T]) -> Result<RankTable> {
    RankTable::new(x)
}

/// Quadratic reference check: equal lengths and `x[i] <= x[j]` iff
/// `y[i] <= y[j]` for every pair.
pub fn brute_force_isomorphic<T: Element>(x: &[T], y: &[T]) -> bool {
    if x.len() != y.len() {
        return false;
    }
    (0..x.len()).all(|i| (0..x.len()).all(|j| (x[i] <= x[j]) == (y[i] <= y[j])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    const FIG_TEXT: [i32; 17] = [
        8, 11, 10, 16, 15, 20, 13, 17, 14, 18, 20, 18, 25, 17, 20, 25, 26,
    ];

    #[test]
    fn rank_table_with_ties() {
        let rt = rank_table(&[6, 3, 8, 3, 10, 7, 10]).unwrap();
        assert_eq!(rt.order(), &[1, 3, 0, 5, 2, 4, 6]);
        assert_eq!(rt.eq(), &[true, false, false, false, false, true]);
    }

    #[test]
    fn rank_table_distinct() {
        let rt = rank_table(&[6, 5, 8, 4, 7]).unwrap();
        assert_eq!(rt.order(), &[3, 1, 0, 4, 2]);
        assert_eq!(rt.eq(), &[false; 4]);

        let rt = rank_table(&[1, 2, 3]).unwrap();
        assert_eq!(rt.order(), &[0, 1, 2]);
        assert_eq!(rt.eq(), &[false, false]);
    }

    #[test]
    fn rank_table_tie_broken_by_index() {
        let rt = rank_table(&[7, 7]).unwrap();
        assert_eq!(rt.order(), &[0, 1]);
        assert_eq!(rt.eq(), &[true]);
    }

    #[test]
    fn rank_table_errors() {
        assert_eq!(rank_table::<i32>(&[]), Err(Error::EmptyPattern));
        assert_eq!(
            rank_table(&[1.0, f64::NAN]),
            Err(Error::Incomparable { index: 1 })
        );
    }

    #[test]
    fn isomorphic_examples() {
        let rt = rank_table(&[6, 3, 8, 3, 10, 7, 10]).unwrap();
        assert!(rt.is_isomorphic_at(&[2, 1, 4, 1, 5, 3, 5], 0).unwrap());

        let rt = rank_table(&[6, 5, 8, 4, 7]).unwrap();
        assert!(rt.is_isomorphic_at(&FIG_TEXT, 3).unwrap());
        assert!(!rt.is_isomorphic_at(&FIG_TEXT, 0).unwrap());
        // Tie at 20/20 where the pattern has distinct values.
        assert!(!rt.is_isomorphic_at(&FIG_TEXT, 10).unwrap());
        assert!(!brute_force_isomorphic(&[6, 5, 8, 4, 7], &FIG_TEXT[10..15]));
        assert!(!brute_force_isomorphic(&[6, 5, 8, 4, 7], &FIG_TEXT[0..5]));
    }

    #[test]
    fn window_bounds() {
        let rt = rank_table(&[1, 2, 3]).unwrap();
        assert!(rt.is_isomorphic_at(&[1, 2, 3], 0).unwrap());
        assert_eq!(
            rt.is_isomorphic_at(&[1, 2, 3], 1),
            Err(Error::WindowExceedsText {
                start: 1,
                len: 3,
                text_len: 3
            })
        );
        assert!(rt.is_isomorphic_at(&[1, 2, 3], usize::MAX).is_err());
    }

    #[test]
    fn single_element_pattern_matches_everywhere() {
        let rt = rank_table(&[42]).unwrap();
        let y = [3, 1, 4, 1, 5];
        assert!((0..y.len()).all(|i| rt.is_isomorphic_at(&y, i).unwrap()));
    }

    #[test]
    fn brute_force_examples() {
        assert!(brute_force_isomorphic(
            &[6, 3, 8, 3, 10, 7, 10],
            &[2, 1, 4, 1, 5, 3, 5]
        ));
        assert!(!brute_force_isomorphic(&[1, 2], &[2, 1]));
        assert!(!brute_force_isomorphic(&[1, 1], &[1, 2]));
        assert!(!brute_force_isomorphic(&[1, 2], &[1, 2, 3]));
    }

    fn small_seq(alphabet: i32) -> impl Strategy<Value = Vec<i32>> {
        prop::collection::vec(0..alphabet, 1..=12)
    }

    proptest! {
        #[test]
        fn order_is_a_stable_sorting_permutation(x in small_seq(5)) {
            let rt = rank_table(&x).unwrap();
            let mut seen = vec![false; x.len()];
            for &i in rt.order() {
                prop_assert!(!seen[i]);
                seen[i] = true;
            }
            // Independent route: sort (value, index) pairs lexicographically.
            let mut pairs: Vec<(i32, usize)> = x.iter().copied().zip(0..).collect();
            pairs.sort_unstable();
            let expected: Vec<usize> = pairs.iter().map(|p| p.1).collect();
            prop_assert_eq!(rt.order(), expected.as_slice());
            for (k, w) in rt.order().windows(2).enumerate() {
                prop_assert_eq!(rt.eq()[k], x[w[0]] == x[w[1]]);
            }
        }

        #[test]
        fn table_check_agrees_with_pairwise_check(
            x in small_seq(3),
            y in prop::collection::vec(0..3i32, 12..=24),
            i in 0usize..12,
        ) {
            let rt = rank_table(&x).unwrap();
            prop_assume!(i + x.len() <= y.len());
            prop_assert_eq!(
                rt.is_isomorphic_at(&y, i).unwrap(),
                brute_force_isomorphic(&x, &y[i..i + x.len()])
            );
        }

        #[test]
        fn table_check_agrees_without_ties(
            x in prop::collection::vec(any::<i32>(), 1..=12),
            y in prop::collection::vec(any::<i32>(), 12..=24),
        ) {
            let rt = rank_table(&x).unwrap();
            // Plant a copy to make positives likely.
            let mut y = y;
            let shift = y.len() - x.len();
            y[shift..].copy_from_slice(&x);
            for i in 0..=shift {
                prop_assert_eq!(
                    rt.is_isomorphic_at(&y, i).unwrap(),
                    brute_force_isomorphic(&x, &y[i..i + x.len()])
                );
            }
        }

        #[test]
        fn rank_table_invariant_under_increasing_map(x in small_seq(6), a in 1i64..50, b in -100i64..100) {
            let mapped: Vec<i64> = x.iter().map(|&v| a * (v as i64) * (v as i64) + b + v as i64).collect();
            // v -> a v^2 + v + b is strictly increasing on non-negative v
            prop_assert_eq!(rank_table(&x).unwrap(), rank_table(&mapped).unwrap());
            let as_float: Vec<f64> = x.iter().map(|&v| (v as f64).exp()).collect();
            prop_assert_eq!(rank_table(&x).unwrap(), rank_table(&as_float).unwrap());
        }

        #[test]
        fn reflexive(x in small_seq(4)) {
            prop_assert!(rank_table(&x).unwrap().is_isomorphic_at(&x, 0).unwrap());
        }
    }
}
