use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use oppm::gen::{extract_patterns, CorpusKind, ElementDomain, GenSpec};
use oppm::search::{brute_force_search, FP_WINDOW};
use oppm::{Element, FilterScheme, SchemeKind, Searcher, Sequence};
use oppm_cli::bench::{self, BenchConfig, BenchError, Format, TextSource};
use oppm_cli::clock::MonotonicClock;
use oppm_cli::io::{self, common_domain, TypedSequence};
use oppm_cli::selftest;

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "oppm",
    version,
    about = "Order-preserving pattern matching with filtration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a Rand-delta or Period-delta corpus.
    Gen(GenArgs),
    /// Search a text for one or more patterns with a single scheme.
    Search(SearchArgs),
    /// Compare schemes over extracted patterns.
    Bench(BenchArgs),
    /// Run golden examples and randomized oracle checks.
    Selftest,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CorpusArgs {
    /// Uniform integers in [100-D, 100+D].
    #[arg(long, value_name = "D")]
    rand_delta: Option<u32>,
    /// Period-10 signal with noise in [-D, D].
    #[arg(long, value_name = "D")]
    period_delta: Option<u32>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, default_value_t = bench::DEFAULT_TEXT_LEN)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = DomainArg::I64)]
    domain: DomainArg,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the binary OPSQ format instead of text.
    #[arg(long)]
    binary: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TextSourceArgs {
    /// Sequence file (text or OPSQ binary).
    #[arg(long, value_name = "FILE")]
    text: Option<PathBuf>,
    #[arg(long, value_name = "D")]
    rand_delta: Option<u32>,
    #[arg(long, value_name = "D")]
    period_delta: Option<u32>,
}

#[derive(Args)]
struct TextArgs {
    #[command(flatten)]
    source: TextSourceArgs,
    /// Length of a generated text.
    #[arg(long, default_value_t = bench::DEFAULT_TEXT_LEN)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = DomainArg::I64)]
    domain: DomainArg,
}

impl TextArgs {
    fn source(&self) -> TextSource {
        let generated = |kind, delta| {
            TextSource::Generated(GenSpec {
                kind,
                n: self.n,
                delta,
                seed: self.seed,
                domain: self.domain.into(),
            })
        };
        match (
            &self.source.text,
            self.source.rand_delta,
            self.source.period_delta,
        ) {
            (Some(path), _, _) => TextSource::File(path.clone()),
            (_, Some(d), _) => generated(CorpusKind::RandDelta, d),
            (_, _, Some(d)) => generated(CorpusKind::PeriodDelta, d),
            _ => unreachable!("clap enforces one text source"),
        }
    }
}

#[derive(Args)]
struct SchemeArgs {
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    /// Neighborhood size for nr/no (default 4 for nr, 3 for no).
    #[arg(long)]
    q: Option<usize>,
}

impl SchemeArgs {
    fn resolve(&self) -> Result<Option<FilterScheme>> {
        let Some(kind) = self.scheme else {
            if self.q.is_some() {
                bail!("--q requires --scheme nr or --scheme no");
            }
            return Ok(None);
        };
        let scheme = match kind {
            SchemeArg::Fct => FilterScheme::binary(),
            SchemeArg::Nr => FilterScheme::new(SchemeKind::Nr, self.q.unwrap_or(4))?,
            SchemeArg::No => FilterScheme::new(SchemeKind::No, self.q.unwrap_or(3))?,
        };
        Ok(Some(scheme))
    }
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    text: TextArgs,
    /// Pattern file; otherwise patterns are extracted from the text.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["pattern_len", "pattern_count"])]
    pattern: Option<PathBuf>,
    #[arg(long, value_name = "M", required_unless_present = "pattern")]
    pattern_len: Option<usize>,
    #[arg(long, value_name = "C", default_value_t = 1)]
    pattern_count: usize,
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[arg(long, default_value_t = FP_WINDOW)]
    fp_window: u64,
    /// Cross-check occurrences against the brute-force oracle.
    #[arg(long)]
    verify: bool,
    /// Timed repetitions per pattern (median reported).
    #[arg(long, default_value_t = 1)]
    reps: usize,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    text: TextArgs,
    /// Pattern lengths, comma separated.
    #[arg(long, value_name = "M", value_delimiter = ',', default_values_t = bench::DEFAULT_LENGTHS)]
    pattern_len: Vec<usize>,
    #[arg(long, value_name = "C", default_value_t = bench::DEFAULT_PATTERNS)]
    pattern_count: usize,
    /// Restrict the comparison to FCT plus this scheme.
    #[command(flatten)]
    scheme: SchemeArgs,
    /// Explicit scheme list, e.g. fct,nr2,no3.
    #[arg(long, value_delimiter = ',', conflicts_with = "scheme")]
    schemes: Option<Vec<FilterScheme>>,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
    #[arg(long, default_value_t = FP_WINDOW)]
    fp_window: u64,
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value_t = bench::DEFAULT_REPS)]
    reps: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Fct,
    Nr,
    No,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Table,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Table => Format::Table,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    I32,
    I64,
    F64,
}

impl From<DomainArg> for ElementDomain {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::I32 => ElementDomain::I32,
            DomainArg::I64 => ElementDomain::I64,
            DomainArg::F64 => ElementDomain::F64,
        }
    }
}

/// Outcome of a subcommand that ran to completion.
enum Status {
    Ok,
    VerificationFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Search(args) => run_search(args),
        Command::Bench(args) => run_bench(args),
        Command::Selftest => Ok(run_selftest()),
    };
    match outcome {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(EXIT_VERIFY),
        Err(e) => {
            if let Some(BenchError::Verification { .. }) = e.downcast_ref::<BenchError>() {
                eprintln!("error: {e:#}");
                return ExitCode::from(EXIT_VERIFY);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run_gen(args: GenArgs) -> Result<Status> {
    let (kind, delta) = match (args.corpus.rand_delta, args.corpus.period_delta) {
        (Some(d), _) => (CorpusKind::RandDelta, d),
        (_, Some(d)) => (CorpusKind::PeriodDelta, d),
        _ => unreachable!("clap enforces one corpus kind"),
    };
    let spec = GenSpec {
        kind,
        n: args.n,
        delta,
        seed: args.seed,
        domain: args.domain.into(),
    };
    let seq = TypedSequence::from_generated(spec.generate()?, spec.domain)?;
    match args.out {
        Some(path) => io::write_sequence(&path, &seq, args.binary)?,
        None if args.binary => std::io::stdout().write_all(&io::encode_binary(&seq))?,
        None => std::io::stdout().write_all(io::format_text(&seq).as_bytes())?,
    }
    Ok(Status::Ok)
}

fn run_search(args: SearchArgs) -> Result<Status> {
    let scheme = args.scheme.resolve()?.unwrap_or(FilterScheme::binary());
    let text = args.text.source().load()?;
    let patterns: Vec<TypedSequence> = match (&args.pattern, args.pattern_len) {
        (Some(path), _) => vec![io::read_sequence(path)
            .with_context(|| format!("reading pattern {}", path.display()))?],
        (None, Some(m)) => extract_typed(&text, m, args.pattern_count, args.text.seed)?,
        (None, None) => unreachable!("clap requires a pattern source"),
    };
    let domain = patterns
        .iter()
        .fold(text.domain(), |d, p| common_domain(d, p.domain()));
    let text = text.widen(domain).expect("common domain");
    let patterns: Vec<TypedSequence> = patterns
        .iter()
        .map(|p| p.widen(domain).expect("common domain"))
        .collect();
    let opts = SearchOpts {
        scheme,
        format: args.format.into(),
        fp_window: args.fp_window,
        verify: args.verify,
        reps: args.reps.max(1),
    };
    macro_rules! dispatch {
        ($($variant:ident),*) => {
            match &text {
                $(TypedSequence::$variant(y) => {
                    let xs: Vec<&Sequence<_>> = patterns
                        .iter()
                        .map(|p| match p {
                            TypedSequence::$variant(x) => x,
                            _ => unreachable!("patterns widened to the text domain"),
                        })
                        .collect();
                    search_all(y, &xs, &opts)
                })*
            }
        };
    }
    dispatch!(I32, I64, F64)
}

fn extract_typed(
    text: &TypedSequence,
    m: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<TypedSequence>> {
    let seed = bench::pattern_seed(seed, m);
    Ok(match text {
        TypedSequence::I32(y) => extract_patterns(y, m, count, seed)?
            .into_iter()
            .map(TypedSequence::I32)
            .collect(),
        TypedSequence::I64(y) => extract_patterns(y, m, count, seed)?
            .into_iter()
            .map(TypedSequence::I64)
            .collect(),
        TypedSequence::F64(y) => extract_patterns(y, m, count, seed)?
            .into_iter()
            .map(TypedSequence::F64)
            .collect(),
    })
}

struct SearchOpts {
    scheme: FilterScheme,
    format: Format,
    fp_window: u64,
    verify: bool,
    reps: usize,
}

fn search_all<T: Element>(y: &[T], patterns: &[&Sequence<T>], opts: &SearchOpts) -> Result<Status> {
    let clock = MonotonicClock::new();
    let mut out = String::new();
    let mut status = Status::Ok;
    if matches!(opts.format, Format::Csv) {
        out.push_str("pattern,scheme,q,m,candidates,occurrences,false_positives,fp_per_2e20,filter_ms,verify_ms\n");
    }
    for (k, x) in patterns.iter().enumerate() {
        let searcher = Searcher::new(x, opts.scheme)?;
        let mut reports: Vec<_> = (0..opts.reps)
            .map(|_| searcher.search_timed(y, &clock))
            .collect();
        reports.sort_by_key(|r| r.total_time());
        let report = reports.swap_remove(reports.len() / 2);
        if opts.verify {
            let expected = brute_force_search(x, y);
            if expected != report.occurrences {
                eprintln!(
                    "verification failed for pattern {k}: {} occurrences, oracle {}",
                    report.occurrences.len(),
                    expected.len()
                );
                status = Status::VerificationFailed;
            }
        }
        let q = opts.scheme.q().map(|q| q.to_string()).unwrap_or_default();
        let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
        match opts.format {
            Format::Csv => out.push_str(&format!(
                "{k},{},{q},{},{},{},{},{:.4},{:.4},{:.4}\n",
                opts.scheme,
                x.len(),
                report.candidates,
                report.occurrences.len(),
                report.false_positives(),
                report.fp_per_window(opts.fp_window),
                ms(report.filter_time),
                ms(report.verify_time),
            )),
            Format::Table => {
                out.push_str(&format!(
                    "pattern {k} (m = {}, {}): {} occurrences, {} candidates, {} false positives ({:.2} per window), filter {:.3} ms, verify {:.3} ms\n",
                    x.len(),
                    opts.scheme,
                    report.occurrences.len(),
                    report.candidates,
                    report.false_positives(),
                    report.fp_per_window(opts.fp_window),
                    ms(report.filter_time),
                    ms(report.verify_time),
                ));
                let positions: Vec<String> =
                    report.occurrences.iter().map(|i| i.to_string()).collect();
                out.push_str(&format!("  positions: {}\n", positions.join(" ")));
            }
        }
    }
    std::io::stdout().write_all(out.as_bytes())?;
    Ok(status)
}

fn run_bench(args: BenchArgs) -> Result<Status> {
    let mut cfg = BenchConfig::new(args.text.source());
    cfg.pattern_lengths = args.pattern_len;
    cfg.patterns_per_length = args.pattern_count;
    cfg.seed = args.text.seed;
    cfg.fp_window = args.fp_window;
    cfg.reps = args.reps;
    cfg.verify = args.verify;
    if let Some(list) = args.schemes {
        cfg.schemes = list;
    } else if let Some(s) = args.scheme.resolve()? {
        cfg.schemes = if s.kind() == SchemeKind::Binary {
            vec![s]
        } else {
            vec![FilterScheme::binary(), s]
        };
    }
    let rows = bench::run_bench(&cfg)?;
    std::io::stdout().write_all(bench::emit(&rows, args.format.into()).as_bytes())?;
    Ok(Status::Ok)
}

fn run_selftest() -> Status {
    let results = selftest::selftest();
    for r in &results {
        if r.passed {
            println!("PASS  {}", r.name);
        } else {
            println!("FAIL  {}: {}", r.name, r.detail);
        }
    }
    if selftest::all_passed(&results) {
        println!("selftest passed ({} checks)", results.len());
        Status::Ok
    } else {
        Status::VerificationFailed
    }
}
