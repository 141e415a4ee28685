//! Exact matching over condensed alphabets.
//!
//! [`MatcherProgram`] is SBNDM2: a backward bit-parallel factor automaton
//! that starts every window by reading a 2-gram. Patterns longer than a
//! machine word are matched on their first 64 symbols and the rest is
//! compared directly for each hit.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::filter::CondensedSequence;

/// Bits in the state word.
pub const WORD_BITS: usize = u64::BITS as usize;

#[derive(Debug, Clone)]
pub struct MatcherProgram {
    pattern: CondensedSequence,
    /// Bit `j` of `masks[c]` is set iff `pattern[effective_len - 1 - j] == c`.
    masks: Vec<u64>,
    effective_len: usize,
}

impl MatcherProgram {
    pub fn compile(p: &CondensedSequence) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::PatternTooShortForEngine { len: p.len() });
        }
        let effective_len = p.len().min(WORD_BITS);
        let mut masks = vec![0u64; p.alphabet_size() as usize];
        for (i, &c) in p.symbols()[..effective_len].iter().enumerate() {
            masks[c as usize] |= 1 << (effective_len - 1 - i);
        }
        Ok(MatcherProgram {
            pattern: p.clone(),
            masks,
            effective_len,
        })
    }

    pub fn pattern(&self) -> &CondensedSequence {
        &self.pattern
    }

    pub fn effective_len(&self) -> usize {
        self.effective_len
    }

    pub fn full_len(&self) -> usize {
        self.pattern.len()
    }

    /// Mask for symbol `c`; zero for symbols outside the alphabet.
    #[inline(always)]
    pub fn mask(&self, c: u16) -> u64 {
        self.masks.get(c as usize).copied().unwrap_or(0)
    }

    /// All start positions of the pattern in `t`, ascending.
    pub fn find_candidates(&self, t: &CondensedSequence) -> Vec<usize> {
        debug_assert_eq!(t.alphabet_size(), self.pattern.alphabet_size());
        let mut out = Vec::new();
        self.for_each_match(t.symbols(), |i| out.push(i));
        out
    }

    /// Calls `f` with each start position of the pattern in `t`, in order.
    pub fn for_each_match(&self, t: &[u16], mut f: impl FnMut(usize)) {
        let m = self.effective_len;
        let full = self.pattern.len();
        let tail = &self.pattern.symbols()[m..];
        if t.len() < full {
            return;
        }
        // Windows of m symbols whose remaining tail still fits in t.
        let scan_len = t.len() - tail.len();
        let mut end = m - 1;
        while end < scan_len {
            let mut d = (self.mask(t[end]) << 1) & self.mask(t[end - 1]);
            if d == 0 {
                end += m - 1;
                continue;
            }
            // Invariant: bit k of d is set iff t[start..=end] equals the
            // pattern factor beginning at effective_len - 1 - k.
            let mut start = end - 1;
            loop {
                if end - start + 1 == m {
                    if t[end + 1..end + 1 + tail.len()] == *tail {
                        f(start);
                    }
                    end += 1;
                    break;
                }
                start -= 1;
                d = (d << 1) & self.mask(t[start]);
                if d == 0 {
                    end = start + m;
                    break;
                }
            }
        }
    }
}

/// Sliding-window reference matcher; overlapping matches included.
pub fn naive_find(p: &[u16], t: &[u16]) -> Vec<usize> {
    if p.is_empty() {
        return (0..=t.len()).collect();
    }
    if p.len() > t.len() {
        return Vec::new();
    }
    t.windows(p.len())
        .enumerate()
        .filter(|(_, w)| *w == p)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cs(symbols: &[u16], alphabet: u32) -> CondensedSequence {
        CondensedSequence::from_symbols(symbols.to_vec(), alphabet).unwrap()
    }

    #[test]
    fn compile_masks() {
        let prog = MatcherProgram::compile(&cs(&[1, 0, 1], 2)).unwrap();
        assert_eq!(prog.mask(1), 0b101);
        assert_eq!(prog.mask(0), 0b010);
        assert_eq!(prog.effective_len(), 3);
        assert_eq!(prog.mask(7), 0);
    }

    #[test]
    fn compile_truncates_long_patterns() {
        let p: Vec<u16> = (0..100).map(|i| (i % 3) as u16).collect();
        let prog = MatcherProgram::compile(&cs(&p, 3)).unwrap();
        assert_eq!(prog.effective_len(), WORD_BITS);
        assert_eq!(prog.full_len(), 100);
    }

    #[test]
    fn compile_rejects_single_symbol() {
        assert_eq!(
            MatcherProgram::compile(&cs(&[5], 8)).unwrap_err(),
            Error::PatternTooShortForEngine { len: 1 }
        );
    }

    #[test]
    fn find_examples() {
        let prog = MatcherProgram::compile(&cs(&[1, 0, 1], 2)).unwrap();
        let t = cs(&[1, 1, 0, 1, 0, 1], 2);
        assert_eq!(prog.find_candidates(&t), [1, 3]);
        assert_eq!(prog.find_candidates(&cs(&[1, 0, 1], 2)), [0]);
        assert!(prog.find_candidates(&cs(&[1, 0], 2)).is_empty());
        assert_eq!(naive_find(&[1, 0, 1], t.symbols()), [1, 3]);
    }

    #[test]
    fn naive_examples() {
        assert_eq!(naive_find(&[0], &[0, 0, 0]), [0, 1, 2]);
        assert!(naive_find(&[1, 1], &[0, 0, 0]).is_empty());
    }

    #[test]
    fn long_pattern_tail_is_checked() {
        let mut p = vec![0u16; 70];
        p[69] = 1;
        let mut t = vec![0u16; 200];
        t[100] = 1;
        let prog = MatcherProgram::compile(&cs(&p, 2)).unwrap();
        assert_eq!(prog.find_candidates(&cs(&t, 2)), [31]);
        assert_eq!(naive_find(&p, &t), [31]);
    }

    fn pattern_and_text(alphabet: u16) -> impl Strategy<Value = (Vec<u16>, Vec<u16>)> {
        (2usize..=100, 0usize..400).prop_flat_map(move |(m, n)| {
            (
                prop::collection::vec(0..alphabet, m),
                prop::collection::vec(0..alphabet, n),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]

        #[test]
        fn agrees_with_naive_binary((p, t) in pattern_and_text(2)) {
            let prog = MatcherProgram::compile(&cs(&p, 2)).unwrap();
            prop_assert_eq!(prog.find_candidates(&cs(&t, 2)), naive_find(&p, &t));
        }

        #[test]
        fn agrees_with_naive_with_planted_copies(
            (p, t) in pattern_and_text(16),
            at in prop::collection::vec(0usize..400, 0..4),
        ) {
            let mut t = t;
            for a in at {
                if a + p.len() <= t.len() {
                    t[a..a + p.len()].copy_from_slice(&p);
                }
            }
            let prog = MatcherProgram::compile(&cs(&p, 16)).unwrap();
            let found = prog.find_candidates(&cs(&t, 16));
            prop_assert!(found.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(found, naive_find(&p, &t));
        }

        #[test]
        fn agrees_with_naive_periodic(
            unit in prop::collection::vec(0..4u16, 1..4),
            m in 2usize..100,
            n in 0usize..400,
        ) {
            let p: Vec<u16> = unit.iter().copied().cycle().take(m).collect();
            let t: Vec<u16> = unit.iter().copied().cycle().take(n).collect();
            let prog = MatcherProgram::compile(&cs(&p, 4)).unwrap();
            prop_assert_eq!(prog.find_candidates(&cs(&t, 4)), naive_find(&p, &t));
        }
    }
}
