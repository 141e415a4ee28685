//! Benchmark harness reproducing the filter comparison tables.
//!
//! For every pattern length, `patterns_per_length` windows are drawn from the
//! text and searched under every scheme. Each row reports the mean per-pattern
//! search time, the mean false positives per `fp_window` text elements, and
//! the speedup and false-positive gain against the FCT row of the same length:
//!
//! * `speedup = time(FCT) / time`
//! * `gain = 100 * (fp(FCT) - fp) / fp(FCT)`

use std::fmt::Write as _;
use std::path::PathBuf;

use oppm::gen::{extract_patterns, GenSpec};
use oppm::search::{brute_force_search, FP_WINDOW};
use oppm::{Element, FilterScheme, SchemeKind, SearchReport, Searcher};
use rayon::prelude::*;
use thiserror::Error;

use crate::clock::MonotonicClock;
use crate::io::{self, FormatError, TypedSequence};

pub const DEFAULT_LENGTHS: [usize; 7] = [8, 12, 16, 20, 24, 28, 32];
pub const DEFAULT_PATTERNS: usize = 100;
pub const DEFAULT_TEXT_LEN: usize = 1 << 20;
pub const DEFAULT_REPS: usize = 5;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Oppm(#[from] oppm::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{scheme} disagrees with the oracle for pattern {pattern} (m = {m}): {found} occurrences, expected {expected}")]
    Verification {
        scheme: String,
        m: usize,
        pattern: usize,
        found: usize,
        expected: usize,
    },
}

#[derive(Debug, Clone)]
pub enum TextSource {
    File(PathBuf),
    Generated(GenSpec),
}

impl TextSource {
    pub fn load(&self) -> Result<TypedSequence, BenchError> {
        match self {
            TextSource::File(path) => Ok(io::read_sequence(path)?),
            TextSource::Generated(spec) => Ok(TypedSequence::from_generated(
                spec.generate()?,
                spec.domain,
            )?),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub text: TextSource,
    pub pattern_lengths: Vec<usize>,
    pub patterns_per_length: usize,
    pub schemes: Vec<FilterScheme>,
    /// Seeds pattern extraction; see [`pattern_seed`].
    pub seed: u64,
    pub fp_window: u64,
    /// Timed repetitions per pattern after one discarded warm-up run. With
    /// zero, the single untimed-warm-up run is the measurement.
    pub reps: usize,
    /// Cross-check every occurrence set against the brute-force oracle.
    pub verify: bool,
}

impl BenchConfig {
    pub fn new(text: TextSource) -> Self {
        BenchConfig {
            text,
            pattern_lengths: DEFAULT_LENGTHS.to_vec(),
            patterns_per_length: DEFAULT_PATTERNS,
            schemes: default_schemes(),
            seed: 1,
            fp_window: FP_WINDOW,
            reps: DEFAULT_REPS,
            verify: false,
        }
    }
}

/// FCT, NR2..NR6, NO2..NO4.
pub fn default_schemes() -> Vec<FilterScheme> {
    let mut v = vec![FilterScheme::binary()];
    v.extend((2..=6).map(|q| FilterScheme::nr(q).unwrap()));
    v.extend((2..=4).map(|q| FilterScheme::no(q).unwrap()));
    v
}

/// Seed for the pattern set of length `m`.
pub fn pattern_seed(seed: u64, m: usize) -> u64 {
    seed ^ (m as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub scheme: FilterScheme,
    pub m: usize,
    /// The scheme cannot encode patterns of this length (`m <= q`).
    pub skipped: bool,
    pub patterns: usize,
    /// Mean search time per pattern, milliseconds.
    pub time_ms: f64,
    pub candidates: u64,
    /// Total occurrences over all patterns; identical for every scheme.
    pub occurrences: u64,
    pub false_positives: u64,
    /// Mean false positives per pattern, scaled to the fp window.
    pub fp_per_window: f64,
    pub speedup_vs_fct: Option<f64>,
    pub gain_pct: Option<f64>,
}

impl BenchRow {
    fn skipped(scheme: FilterScheme, m: usize) -> Self {
        BenchRow {
            scheme,
            m,
            skipped: true,
            patterns: 0,
            time_ms: 0.0,
            candidates: 0,
            occurrences: 0,
            false_positives: 0,
            fp_per_window: 0.0,
            speedup_vs_fct: None,
            gain_pct: None,
        }
    }
}

pub fn speedup(fct_time: f64, time: f64) -> Option<f64> {
    (fct_time > 0.0 && time > 0.0).then(|| fct_time / time)
}

pub fn gain(fct_fp: f64, fp: f64) -> Option<f64> {
    (fct_fp > 0.0).then(|| 100.0 * (fct_fp - fp) / fct_fp)
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    match cfg.text.load()? {
        TypedSequence::I32(s) => run_bench_on(&s, cfg),
        TypedSequence::I64(s) => run_bench_on(&s, cfg),
        TypedSequence::F64(s) => run_bench_on(&s, cfg),
    }
}

/// Runs the benchmark over an already loaded text.
pub fn run_bench_on<T: Element + Send + Sync>(
    text: &[T],
    cfg: &BenchConfig,
) -> Result<Vec<BenchRow>, BenchError> {
    if cfg.patterns_per_length == 0 {
        return Err(BenchError::Config(
            "patterns per length must be at least 1".into(),
        ));
    }
    let clock = MonotonicClock::new();
    let mut rows = Vec::new();
    for &m in &cfg.pattern_lengths {
        if m < 2 || m > text.len() {
            return Err(BenchError::Config(format!(
                "pattern length {m} must be in 2..={}",
                text.len()
            )));
        }
        let patterns =
            extract_patterns(text, m, cfg.patterns_per_length, pattern_seed(cfg.seed, m))?;
        let oracle: Option<Vec<Vec<usize>>> = cfg.verify.then(|| {
            patterns
                .par_iter()
                .map(|p| brute_force_search(p, text))
                .collect()
        });
        let mut block = Vec::with_capacity(cfg.schemes.len());
        for &scheme in &cfg.schemes {
            if m <= scheme.shrink() {
                eprintln!(
                    "warning: {scheme} skipped for m = {m} (needs m > {})",
                    scheme.shrink()
                );
                block.push(BenchRow::skipped(scheme, m));
                continue;
            }
            let mut row = BenchRow::skipped(scheme, m);
            row.skipped = false;
            row.patterns = patterns.len();
            let mut time_sum = 0.0;
            let mut fp_sum = 0.0;
            for (k, p) in patterns.iter().enumerate() {
                let searcher = Searcher::new(p, scheme)?;
                let (report, ms) = timed_search(&searcher, text, cfg.reps, &clock);
                if let Some(expected) = &oracle {
                    if report.occurrences != expected[k] {
                        return Err(BenchError::Verification {
                            scheme: scheme.name(),
                            m,
                            pattern: k,
                            found: report.occurrences.len(),
                            expected: expected[k].len(),
                        });
                    }
                }
                time_sum += ms;
                fp_sum += report.fp_per_window(cfg.fp_window);
                row.candidates += report.candidates as u64;
                row.occurrences += report.occurrences.len() as u64;
                row.false_positives += report.false_positives() as u64;
            }
            row.time_ms = time_sum / patterns.len() as f64;
            row.fp_per_window = fp_sum / patterns.len() as f64;
            block.push(row);
        }
        fill_relative(&mut block);
        rows.extend(block);
    }
    Ok(rows)
}

fn timed_search<T: Element>(
    s: &Searcher,
    text: &[T],
    reps: usize,
    clock: &MonotonicClock,
) -> (SearchReport, f64) {
    let first = s.search_timed(text, clock);
    if reps == 0 {
        let ms = first.total_time().as_secs_f64() * 1e3;
        return (first, ms);
    }
    let mut times: Vec<f64> = (0..reps)
        .map(|_| s.search_timed(text, clock).total_time().as_secs_f64() * 1e3)
        .collect();
    times.sort_by(f64::total_cmp);
    let mid = times.len() / 2;
    let median = if times.len() % 2 == 1 {
        times[mid]
    } else {
        (times[mid - 1] + times[mid]) / 2.0
    };
    (first, median)
}

/// Fills speedup and gain relative to the block's FCT row, if any.
fn fill_relative(block: &mut [BenchRow]) {
    let Some(fct) = block
        .iter()
        .find(|r| r.scheme.kind() == SchemeKind::Binary && !r.skipped)
        .map(|r| (r.time_ms, r.fp_per_window))
    else {
        return;
    };
    for row in block.iter_mut().filter(|r| !r.skipped) {
        row.speedup_vs_fct = speedup(fct.0, row.time_ms);
        row.gain_pct = gain(fct.1, row.fp_per_window);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Table,
}

pub const CSV_HEADER: &str =
    "scheme,q,m,time_ms,candidates,occurrences,false_positives,fp_per_2e20,speedup_vs_fct,gain_pct";

fn opt(v: Option<f64>, prec: usize) -> String {
    v.map(|x| format!("{x:.prec$}")).unwrap_or_default()
}

pub fn emit(rows: &[BenchRow], format: Format) -> String {
    match format {
        Format::Csv => emit_csv(rows),
        Format::Table => emit_table(rows),
    }
}

fn emit_csv(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").unwrap();
    for r in rows {
        let q = r.scheme.q().map(|q| q.to_string()).unwrap_or_default();
        if r.skipped {
            writeln!(out, "{},{},{},,,,,,,", r.scheme, q, r.m).unwrap();
            continue;
        }
        writeln!(
            out,
            "{},{},{},{:.4},{},{},{},{:.4},{},{}",
            r.scheme,
            q,
            r.m,
            r.time_ms,
            r.candidates,
            r.occurrences,
            r.false_positives,
            r.fp_per_window,
            opt(r.speedup_vs_fct, 4),
            opt(r.gain_pct, 4),
        )
        .unwrap();
    }
    out
}

/// Two blocks per table: times (FCT in ms, others as speedup) and false
/// positives (FCT per window, others as gain %). `-` marks an undefined
/// ratio, `n/a` a skipped scheme.
fn emit_table(rows: &[BenchRow]) -> String {
    let mut schemes: Vec<FilterScheme> = Vec::new();
    let mut lengths: Vec<usize> = Vec::new();
    for r in rows {
        if !schemes.contains(&r.scheme) {
            schemes.push(r.scheme);
        }
        if !lengths.contains(&r.m) {
            lengths.push(r.m);
        }
    }
    let find = |s: FilterScheme, m: usize| rows.iter().find(|r| r.scheme == s && r.m == m);
    let mut out = String::new();
    let mut header = format!("{:<6}", "m");
    for s in &schemes {
        write!(header, "{:>12}", s.name()).unwrap();
    }
    let rule = "-".repeat(header.len());

    let block = |out: &mut String, title: &str, cell: &dyn Fn(&BenchRow) -> String| {
        writeln!(out, "{title}").unwrap();
        writeln!(out, "{header}").unwrap();
        writeln!(out, "{rule}").unwrap();
        for &m in &lengths {
            write!(out, "{m:<6}").unwrap();
            for &s in &schemes {
                let text = match find(s, m) {
                    Some(r) if !r.skipped => cell(r),
                    _ => "n/a".to_string(),
                };
                write!(out, "{text:>12}").unwrap();
            }
            writeln!(out).unwrap();
        }
    };
    block(&mut out, "time (FCT: ms; others: speedup vs FCT)", &|r| {
        if r.scheme.kind() == SchemeKind::Binary {
            format!("{:.2}", r.time_ms)
        } else {
            r.speedup_vs_fct
                .map(|v| format!("{v:.2}"))
                .unwrap_or_else(|| "-".into())
        }
    });
    writeln!(out).unwrap();
    block(
        &mut out,
        "false positives (FCT: per window; others: gain %)",
        &|r| {
            if r.scheme.kind() == SchemeKind::Binary {
                format!("{:.2}", r.fp_per_window)
            } else {
                r.gain_pct
                    .map(|v| format!("{v:.1}"))
                    .unwrap_or_else(|| "-".into())
            }
        },
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use oppm::gen::{CorpusKind, ElementDomain};

    fn small_cfg() -> BenchConfig {
        let mut cfg = BenchConfig::new(TextSource::Generated(GenSpec {
            kind: CorpusKind::RandDelta,
            n: 1 << 14,
            delta: 20,
            seed: 3,
            domain: ElementDomain::I32,
        }));
        cfg.pattern_lengths = vec![4, 8, 12];
        cfg.patterns_per_length = 10;
        cfg.reps = 0;
        cfg.verify = true;
        cfg
    }

    #[test]
    fn ratio_formulas() {
        assert!((gain(200.0, 2.0).unwrap() - 99.0).abs() < 1e-12);
        assert!((gain(15713.46, 15713.46 * (1.0 - 0.996)).unwrap() - 99.6).abs() < 1e-9);
        assert_eq!(gain(0.0, 0.0), None);
        assert!((speedup(44.29, 22.145).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(speedup(0.0, 1.0), None);
    }

    #[test]
    fn rows_cover_every_scheme_and_length() {
        let cfg = small_cfg();
        let rows = run_bench(&cfg).unwrap();
        assert_eq!(rows.len(), cfg.schemes.len() * cfg.pattern_lengths.len());
        let csv = emit(&rows, Format::Csv);
        assert_eq!(csv.lines().count(), rows.len() + 1);
        assert!(csv.lines().all(|l| l.split(',').count() == 10));
        // m = 4 cannot be encoded by NR4..NR6 or NO4.
        let skipped: Vec<String> = rows
            .iter()
            .filter(|r| r.skipped)
            .map(|r| r.scheme.name())
            .collect();
        assert_eq!(skipped, ["NR4", "NR5", "NR6", "NO4"]);
    }

    #[test]
    fn occurrence_totals_agree_across_schemes() {
        let rows = run_bench(&small_cfg()).unwrap();
        for m in [4, 8, 12] {
            let totals: Vec<u64> = rows
                .iter()
                .filter(|r| r.m == m && !r.skipped)
                .map(|r| r.occurrences)
                .collect();
            assert!(
                totals.windows(2).all(|w| w[0] == w[1]),
                "m = {m}: {totals:?}"
            );
            assert!(totals[0] >= 10, "each pattern matches its own window");
        }
        for r in rows.iter().filter(|r| !r.skipped) {
            assert_eq!(r.candidates, r.occurrences + r.false_positives);
            if let Some(g) = r.gain_pct {
                assert!(g <= 100.0);
            }
        }
    }

    #[test]
    fn output_is_deterministic_apart_from_time() {
        let strip = |csv: String| -> Vec<String> {
            csv.lines()
                .map(|l| {
                    let mut f: Vec<&str> = l.split(',').collect();
                    f[3] = "";
                    f[8] = "";
                    f.join(",")
                })
                .collect()
        };
        let a = emit(&run_bench(&small_cfg()).unwrap(), Format::Csv);
        let b = emit(&run_bench(&small_cfg()).unwrap(), Format::Csv);
        assert_eq!(strip(a), strip(b));
    }

    fn row(scheme: FilterScheme, m: usize, time: f64, fp: f64) -> BenchRow {
        let mut r = BenchRow::skipped(scheme, m);
        r.skipped = false;
        r.time_ms = time;
        r.fp_per_window = fp;
        r
    }

    #[test]
    fn zero_fct_false_positives_print_dash() {
        let mut block = vec![
            row(FilterScheme::binary(), 32, 10.0, 0.0),
            row(FilterScheme::nr(3).unwrap(), 32, 5.0, 0.0),
        ];
        fill_relative(&mut block);
        assert_eq!(block[1].gain_pct, None);
        assert_eq!(block[1].speedup_vs_fct, Some(2.0));
        let table = emit(&block, Format::Table);
        let last = table.lines().last().unwrap();
        assert!(last.trim_end().ends_with('-'), "{table}");
        let csv = emit(&block, Format::Csv);
        assert!(csv.lines().nth(2).unwrap().ends_with(",2.0000,"));
    }

    #[test]
    fn table_layout() {
        let mut block = vec![
            row(FilterScheme::binary(), 8, 44.29, 15713.46),
            row(FilterScheme::no(4).unwrap(), 8, 22.145, 62.85384),
        ];
        fill_relative(&mut block);
        let table = emit(&block, Format::Table);
        assert!(table.contains("44.29"));
        assert!(table.contains("2.00"));
        assert!(table.contains("15713.46"));
        assert!(table.contains("99.6"));
    }

    #[test]
    fn bad_config_is_reported() {
        let mut cfg = small_cfg();
        cfg.pattern_lengths = vec![1 << 20];
        assert!(matches!(run_bench(&cfg), Err(BenchError::Config(_))));
        let cfg = BenchConfig::new(TextSource::File("/nonexistent/text".into()));
        assert!(matches!(run_bench(&cfg), Err(BenchError::Format(_))));
    }
}
