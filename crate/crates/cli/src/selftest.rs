//! Built-in self-test: golden values plus randomized oracle comparisons.
//!
//! The encoders under test are reached through [`Hooks`] so that tests can
//! inject faulty implementations and confirm the checks catch them.

use oppm::filter::{binary_encode, no_encode, nr_encode, CondensedSequence};
use oppm::gen::CorpusRng;
use oppm::matcher::{naive_find, MatcherProgram};
use oppm::rank::{rank_table, RankTable};
use oppm::search::brute_force_search;
use oppm::{FilterScheme, Searcher};

pub type Encoder = fn(&[i64], usize) -> oppm::Result<CondensedSequence>;

#[derive(Clone, Copy)]
pub struct Hooks {
    pub rank_table: fn(&[i64]) -> oppm::Result<RankTable>,
    pub nr_encode: Encoder,
    pub no_encode: Encoder,
}

impl Default for Hooks {
    fn default() -> Self {
        Hooks {
            rank_table: rank_table::<i64>,
            nr_encode: nr_encode::<i64>,
            no_encode: no_encode::<i64>,
        }
    }
}

impl std::fmt::Debug for Hooks {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Hooks { .. }")
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

const GOLDEN_X: [i64; 10] = [5, 6, 3, 8, 10, 7, 1, 9, 10, 8];
const REFERENCE_PATTERN: [i64; 5] = [6, 5, 8, 4, 7];
const REFERENCE_TEXT: [i64; 17] = [
    8, 11, 10, 16, 15, 20, 13, 17, 14, 18, 20, 18, 25, 17, 20, 25, 26,
];
const RANDOM_CASES: usize = 300;

pub fn selftest() -> Vec<CheckResult> {
    selftest_with(&Hooks::default())
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

type Check = dyn Fn(&Hooks) -> Result<(), String>;

pub fn selftest_with(hooks: &Hooks) -> Vec<CheckResult> {
    let checks: [(&'static str, &Check); 11] = [
        ("rank table golden (ties)", &rank_with_ties),
        ("rank table golden (distinct)", &rank_distinct),
        ("order isomorphism golden", &isomorphism_golden),
        ("nr encoding golden (q=4)", &nr_golden),
        ("no encoding golden (q=3)", &no_golden),
        ("reference text occurrences", &reference_text),
        ("invariant: nr code by summation", &nr_summation),
        ("invariant: nr code is no code prefix", &nr_prefix_of_no),
        ("invariant: q=1 equals binary", &q1_collapse),
        ("invariant: search equals brute force", &search_oracle),
        ("invariant: sbndm2 equals naive", &matcher_oracle),
    ];
    checks
        .iter()
        .map(|(name, check)| {
            let outcome = check(hooks);
            CheckResult {
                name,
                passed: outcome.is_ok(),
                detail: outcome.err().unwrap_or_default(),
            }
        })
        .collect()
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("got {got:?}, expected {want:?}"))
    }
}

fn err(e: oppm::Error) -> String {
    e.to_string()
}

fn rank_with_ties(h: &Hooks) -> Result<(), String> {
    let rt = (h.rank_table)(&[6, 3, 8, 3, 10, 7, 10]).map_err(err)?;
    expect_eq(rt.order(), &[1, 3, 0, 5, 2, 4, 6][..])?;
    expect_eq(rt.eq(), &[true, false, false, false, false, true][..])
}

fn rank_distinct(h: &Hooks) -> Result<(), String> {
    let rt = (h.rank_table)(&REFERENCE_PATTERN).map_err(err)?;
    expect_eq(rt.order(), &[3, 1, 0, 4, 2][..])
}

fn isomorphism_golden(h: &Hooks) -> Result<(), String> {
    let rt = (h.rank_table)(&[6, 3, 8, 3, 10, 7, 10]).map_err(err)?;
    expect_eq(
        rt.is_isomorphic_at(&[2i64, 1, 4, 1, 5, 3, 5], 0)
            .map_err(err)?,
        true,
    )
}

fn nr_golden(h: &Hooks) -> Result<(), String> {
    let enc = (h.nr_encode)(&GOLDEN_X, 4).map_err(err)?;
    expect_eq(enc.symbols(), &[4, 8, 1, 6, 15, 8][..])
}

fn no_golden(h: &Hooks) -> Result<(), String> {
    let enc = (h.no_encode)(&GOLDEN_X, 3).map_err(err)?;
    expect_eq(enc.symbols(), &[20, 32, 3, 31, 60, 32, 3][..])
}

fn reference_text(_: &Hooks) -> Result<(), String> {
    expect_eq(
        brute_force_search(&REFERENCE_PATTERN, &REFERENCE_TEXT),
        vec![3],
    )?;
    for scheme in search_schemes() {
        if REFERENCE_PATTERN.len() <= scheme.shrink() {
            continue;
        }
        let s = Searcher::new(&REFERENCE_PATTERN, scheme).map_err(err)?;
        expect_eq(s.search(&REFERENCE_TEXT).occurrences, vec![3])
            .map_err(|e| format!("{scheme}: {e}"))?;
    }
    Ok(())
}

fn random_seq(rng: &mut CorpusRng, len: usize, alphabet: i64) -> Vec<i64> {
    (0..len).map(|_| rng.inclusive(0, alphabet - 1)).collect()
}

fn nr_summation(h: &Hooks) -> Result<(), String> {
    let mut rng = CorpusRng::new(0x5eed_0001);
    for _ in 0..RANDOM_CASES {
        let x = random_seq(&mut rng, 24, 5);
        for q in 1..=6 {
            let enc = (h.nr_encode)(&x, q).map_err(err)?;
            for (i, &got) in enc.symbols().iter().enumerate() {
                let want: u32 = (1..=q)
                    .map(|j| u32::from(x[i] >= x[i + j]) << (q - j))
                    .sum();
                if got as u32 != want {
                    return Err(format!(
                        "x = {x:?}, q = {q}, i = {i}: got {got}, expected {want}"
                    ));
                }
            }
        }
    }
    Ok(())
}

fn nr_prefix_of_no(h: &Hooks) -> Result<(), String> {
    let mut rng = CorpusRng::new(0x5eed_0002);
    for _ in 0..RANDOM_CASES {
        let x = random_seq(&mut rng, 24, 6);
        for q in 1..=4 {
            let nr = (h.nr_encode)(&x, q).map_err(err)?;
            let no = (h.no_encode)(&x, q).map_err(err)?;
            let shifted: Vec<u16> = no
                .symbols()
                .iter()
                .map(|&v| v >> (q * (q - 1) / 2))
                .collect();
            if shifted != nr.symbols() {
                return Err(format!("x = {x:?}, q = {q}"));
            }
        }
    }
    Ok(())
}

fn q1_collapse(h: &Hooks) -> Result<(), String> {
    let mut rng = CorpusRng::new(0x5eed_0003);
    for _ in 0..RANDOM_CASES {
        let x = random_seq(&mut rng, 16, 4);
        let b = binary_encode(&x).map_err(err)?;
        expect_eq((h.nr_encode)(&x, 1).map_err(err)?.symbols(), b.symbols())?;
        expect_eq((h.no_encode)(&x, 1).map_err(err)?.symbols(), b.symbols())?;
    }
    Ok(())
}

fn search_schemes() -> Vec<FilterScheme> {
    let mut v = vec![FilterScheme::binary()];
    v.extend((1..=6).map(|q| FilterScheme::nr(q).unwrap()));
    v.extend((1..=4).map(|q| FilterScheme::no(q).unwrap()));
    v
}

fn search_oracle(_: &Hooks) -> Result<(), String> {
    let mut rng = CorpusRng::new(0x5eed_0004);
    for case in 0..RANDOM_CASES {
        let alphabet = if case % 2 == 0 { 3 } else { 1 << 30 };
        let m = rng.inclusive(2, 12) as usize;
        let n = rng.inclusive(m as i64, 600) as usize;
        let y = random_seq(&mut rng, n, alphabet);
        let x = if case % 3 == 0 {
            let at = rng.below((n - m + 1) as u64) as usize;
            y[at..at + m].to_vec()
        } else {
            random_seq(&mut rng, m, alphabet)
        };
        let expected = brute_force_search(&x, &y);
        for scheme in search_schemes() {
            if m <= scheme.shrink() {
                continue;
            }
            let got = Searcher::new(&x, scheme)
                .map_err(err)?
                .search(&y)
                .occurrences;
            if got != expected {
                return Err(format!("{scheme}: x = {x:?}, n = {n}"));
            }
        }
    }
    Ok(())
}

fn matcher_oracle(_: &Hooks) -> Result<(), String> {
    let mut rng = CorpusRng::new(0x5eed_0005);
    for case in 0..RANDOM_CASES {
        let alphabet: u32 = [2, 16, 64, 1024][case % 4];
        let m = rng.inclusive(2, 100) as usize;
        let n = rng.inclusive(0, 1000) as usize;
        let sym = |rng: &mut CorpusRng| rng.below(alphabet as u64) as u16;
        let p: Vec<u16> = (0..m).map(|_| sym(&mut rng)).collect();
        let mut t: Vec<u16> = (0..n).map(|_| sym(&mut rng)).collect();
        if n >= m {
            let at = rng.below((n - m + 1) as u64) as usize;
            t[at..at + m].copy_from_slice(&p);
        }
        let pc = CondensedSequence::from_symbols(p.clone(), alphabet).map_err(err)?;
        let tc = CondensedSequence::from_symbols(t.clone(), alphabet).map_err(err)?;
        let prog = MatcherProgram::compile(&pc).map_err(err)?;
        expect_eq(prog.find_candidates(&tc), naive_find(&p, &t))
            .map_err(|e| format!("m = {m}, n = {n}: {e}"))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn failed(results: &[CheckResult]) -> Vec<&'static str> {
        results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.name)
            .collect()
    }

    #[test]
    fn clean_build_passes() {
        let results = selftest();
        assert!(all_passed(&results), "{:?}", failed(&results));
    }

    // Bits emitted least-significant first instead of most-significant first.
    fn nr_reversed(x: &[i64], q: usize) -> oppm::Result<CondensedSequence> {
        let enc = nr_encode(x, q)?;
        let flipped = enc
            .symbols()
            .iter()
            .map(|&s| s.reverse_bits() >> (16 - q))
            .collect();
        CondensedSequence::from_symbols(flipped, enc.alphabet_size())
    }

    #[test]
    fn mutated_nr_bit_order_is_caught() {
        let hooks = Hooks {
            nr_encode: nr_reversed,
            ..Hooks::default()
        };
        let failures = failed(&selftest_with(&hooks));
        assert!(
            failures.contains(&"nr encoding golden (q=4)"),
            "{failures:?}"
        );
        assert!(failures.contains(&"invariant: nr code by summation"));
        assert!(failures.contains(&"invariant: nr code is no code prefix"));
        assert!(!failures.contains(&"no encoding golden (q=3)"));
    }

    #[test]
    fn broken_tie_break_is_caught() {
        fn reverse_ties(x: &[i64]) -> oppm::Result<RankTable> {
            let rev: Vec<i64> = x.iter().rev().copied().collect();
            rank_table(&rev)
        }
        let hooks = Hooks {
            rank_table: reverse_ties,
            ..Hooks::default()
        };
        let failures = failed(&selftest_with(&hooks));
        assert!(
            failures.contains(&"rank table golden (ties)"),
            "{failures:?}"
        );
    }
}
