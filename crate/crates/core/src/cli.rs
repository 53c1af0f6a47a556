//! Command-line front end.
//!
//! [`run`] takes the argument vector and output sinks and returns the exit
//! code: 0 on success, 1 when `selfcheck` (or `--oracle`) finds a mismatch,
//! 2 on usage, input or parse errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use thiserror::Error;

use crate::oracle::{self, OracleError, SEMILOCAL_CAP, WINDOW_CAP};
use crate::recognition::{
    global_longest_prefix, report_windows_with_cache, RecognitionError, ReportMode, SemilocalCache, WindowCounter,
};
use crate::slp::{Slp, SlpError, Statement};

#[derive(Debug, Parser)]
#[command(name = "slpseq", version, about = "Subsequence queries on SLP-compressed texts")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Print one JSON object per query instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for building the semilocal cache.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,
    /// Also evaluate the query on the expanded text and fail on mismatch.
    #[arg(long, global = true)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct Input {
    /// SLP file.
    pub slp: PathBuf,
    /// Pattern (UTF-8).
    pub pattern: Option<String>,
    /// Read the pattern from a file instead; one trailing newline is dropped.
    #[arg(long)]
    pub pattern_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Minimal,
    Fixed,
    Bounded,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Whether the text contains the pattern as a subsequence.
    Contains(Input),
    /// Length of the longest pattern prefix that is a subsequence of the text.
    PrefixLen(Input),
    /// LCS of the text and the pattern.
    Lcs(Input),
    /// Number of windows containing the pattern minimally.
    CountMin(Input),
    /// Number of length-W windows containing the pattern.
    CountFixed {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = parse_big)]
        w: BigUint,
    },
    /// Number of minimal windows of length at most W.
    CountBounded {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = parse_big)]
        w: BigUint,
    },
    /// List windows in increasing start order.
    Report {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Mode::Minimal)]
        mode: Mode,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
        /// Window length for `fixed` and `bounded`.
        #[arg(long, value_parser = parse_big)]
        w: Option<BigUint>,
    },
    /// Convert a plain text file into an SLP file.
    Compress {
        input: PathBuf,
        /// Output path (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Expand an SLP file back into text.
    Decompress {
        slp: PathBuf,
        #[arg(long)]
        max_bytes: usize,
    },
    /// Compare every query against the brute-force oracles.
    Selfcheck {
        slp: PathBuf,
        /// Patterns to check (default: random ones over the text alphabet).
        patterns: Vec<String>,
        #[arg(long, default_value_t = 6)]
        random_patterns: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_big(s: &str) -> Result<BigUint, String> {
    s.parse::<BigUint>().map_err(|e| format!("not a natural number: {e}"))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Slp { path: PathBuf, source: SlpError },
    #[error(transparent)]
    Recognition(#[from] RecognitionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

/// Exit code for a failed differential check.
const MISMATCH: i32 = 1;
const FAILURE: i32 = 2;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return FAILURE;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match execute(&cfg, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            FAILURE
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_slp(path: &Path) -> Result<Slp, CliError> {
    Slp::parse(&read_file(path)?).map_err(|source| CliError::Slp { path: path.to_owned(), source })
}

fn load_pattern(input: &Input) -> Result<Vec<char>, CliError> {
    match (&input.pattern, &input.pattern_file) {
        (Some(_), Some(_)) => Err(CliError::Usage("give the pattern inline or with --pattern-file, not both".into())),
        (None, None) => Err(CliError::Usage("missing pattern (inline or --pattern-file)".into())),
        (Some(p), None) => Ok(p.chars().collect()),
        (None, Some(path)) => {
            let text = read_file(path)?;
            let text = text.strip_suffix('\n').map(|t| t.strip_suffix('\r').unwrap_or(t)).unwrap_or(&text);
            Ok(text.chars().collect())
        }
    }
}

/// A query on one text and pattern.
#[derive(Debug, Clone)]
enum Query {
    Contains,
    PrefixLen,
    Lcs,
    CountMin,
    CountFixed(BigUint),
    CountBounded(BigUint),
    Report(ReportMode, usize),
}

impl Query {
    fn name(&self) -> &'static str {
        match self {
            Query::Contains => "contains",
            Query::PrefixLen => "prefix-len",
            Query::Lcs => "lcs",
            Query::CountMin => "count-min",
            Query::CountFixed(_) => "count-fixed",
            Query::CountBounded(_) => "count-bounded",
            Query::Report(..) => "report",
        }
    }

    fn needs_cache(&self) -> bool {
        !matches!(self, Query::Contains | Query::PrefixLen)
    }
}

/// The plain one-line result plus any extra JSON fields.
struct Answer {
    result: String,
    extra: Option<(Vec<(BigUint, BigUint)>, bool)>,
}

fn scalar(result: impl ToString) -> Answer {
    Answer { result: result.to_string(), extra: None }
}

fn windows_line(windows: &[(BigUint, BigUint)], truncated: bool) -> String {
    if windows.is_empty() && !truncated {
        return "none".into();
    }
    let mut parts: Vec<String> = windows.iter().map(|(s, e)| format!("[{s},{e}]")).collect();
    if truncated {
        parts.push("+more".into());
    }
    parts.join(" ")
}

fn report_answer(windows: Vec<(BigUint, BigUint)>, truncated: bool) -> Answer {
    Answer { result: windows_line(&windows, truncated), extra: Some((windows, truncated)) }
}

fn build_cache(slp: &Slp, pattern: &[char], threads: u16) -> Result<SemilocalCache, RecognitionError> {
    if threads > 1 {
        SemilocalCache::build_parallel(slp, pattern, usize::from(threads))
    } else {
        SemilocalCache::build(slp, pattern)
    }
}

fn evaluate(slp: &Slp, pattern: &[char], query: &Query, cache: Option<&SemilocalCache>) -> Result<Answer, CliError> {
    let root = slp.root();
    let n = pattern.len();
    let Some(cache) = cache.filter(|_| query.needs_cache()) else {
        let k = global_longest_prefix(slp, pattern);
        return Ok(match query {
            Query::Contains => scalar(k == n),
            _ => scalar(k),
        });
    };
    let counter = WindowCounter::new(slp, cache)?;
    Ok(match query {
        Query::Contains | Query::PrefixLen => unreachable!("answered without a cache"),
        Query::Lcs => scalar(cache.entry(root).index.string_substring(0, n).map_err(RecognitionError::from)?),
        Query::CountMin => scalar(&counter.minimal_counts(None)?[root]),
        Query::CountBounded(w) => scalar(&counter.minimal_counts(Some(w))?[root]),
        Query::CountFixed(w) => scalar(&counter.fixed_counts(w)?[root]),
        Query::Report(mode, limit) => {
            let rep = report_windows_with_cache(slp, cache, mode, *limit)?;
            report_answer(rep.windows, rep.truncated)
        }
    })
}

fn evaluate_oracle(text: &[char], pattern: &[char], query: &Query) -> Result<Answer, CliError> {
    let small = |w: &BigUint| w.to_usize().unwrap_or(usize::MAX);
    Ok(match query {
        Query::Contains => scalar(oracle::oracle_contains(text, pattern)),
        Query::PrefixLen => scalar(oracle::oracle_prefix_len(text, pattern)),
        Query::Lcs => scalar(oracle::oracle_lcs(text, pattern)),
        Query::CountMin => scalar(oracle::oracle_count_minimal(text, pattern)?),
        Query::CountBounded(w) => scalar(oracle::oracle_count_bounded(text, pattern, small(w))?),
        Query::CountFixed(w) => scalar(oracle::oracle_count_fixed(text, pattern, small(w))?),
        Query::Report(mode, limit) => {
            let all = match mode {
                ReportMode::Minimal => oracle::oracle_minimal_windows(text, pattern)?,
                ReportMode::Bounded(w) => {
                    let w = small(w);
                    let mut v = oracle::oracle_minimal_windows(text, pattern)?;
                    v.retain(|(s, e)| e - s < w);
                    v
                }
                ReportMode::Fixed(w) => oracle::oracle_fixed_windows(text, pattern, small(w))?,
            };
            let truncated = all.len() > *limit;
            let windows = all.into_iter().take(*limit).map(|(s, e)| (s.into(), e.into())).collect();
            report_answer(windows, truncated)
        }
    })
}

fn expand_for_oracle(slp: &Slp) -> Option<Vec<char>> {
    slp.expand(slp.root(), WINDOW_CAP).ok().map(|s| s.chars().collect())
}

fn execute(cfg: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let (input, query) = match &cfg.command {
        Command::Contains(input) => (input, Query::Contains),
        Command::PrefixLen(input) => (input, Query::PrefixLen),
        Command::Lcs(input) => (input, Query::Lcs),
        Command::CountMin(input) => (input, Query::CountMin),
        Command::CountFixed { input, w } => (input, Query::CountFixed(w.clone())),
        Command::CountBounded { input, w } => (input, Query::CountBounded(w.clone())),
        Command::Report { input, mode, limit, w } => {
            let mode = match (mode, w) {
                (Mode::Minimal, _) => ReportMode::Minimal,
                (Mode::Fixed, Some(w)) => ReportMode::Fixed(w.clone()),
                (Mode::Bounded, Some(w)) => ReportMode::Bounded(w.clone()),
                (_, None) => return Err(CliError::Usage("--w is required for fixed and bounded modes".into())),
            };
            let limit = usize::try_from(*limit).unwrap_or(usize::MAX);
            (input, Query::Report(mode, limit))
        }
        Command::Compress { input, output } => return compress(input, output.as_deref(), out),
        Command::Decompress { slp, max_bytes } => return decompress(slp, *max_bytes, out),
        Command::Selfcheck { slp, patterns, random_patterns, seed } => {
            let slp = load_slp(slp)?;
            return selfcheck(&slp, patterns, *random_patterns, *seed, cfg.threads, out);
        }
    };

    let slp = load_slp(&input.slp)?;
    let pattern = load_pattern(input)?;
    let started = Instant::now();
    let cache = if query.needs_cache() { Some(build_cache(&slp, &pattern, cfg.threads)?) } else { None };
    let answer = evaluate(&slp, &pattern, &query, cache.as_ref())?;
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;

    if cfg.json {
        let mut obj = json!({
            "query": query.name(),
            "result": answer.result,
            "m": slp.text_length().to_string(),
            "n": pattern.len(),
            "mbar": slp.len(),
            "elapsed_ms": elapsed_ms,
        });
        if let Some((windows, truncated)) = &answer.extra {
            let list: Vec<Value> = windows.iter().map(|(s, e)| json!([s.to_string(), e.to_string()])).collect();
            obj["result"] = json!(windows.len().to_string());
            obj["windows"] = Value::Array(list);
            obj["truncated"] = json!(truncated);
        }
        writeln!(out, "{obj}")?;
    } else {
        writeln!(out, "{}", answer.result)?;
    }

    if cfg.oracle {
        let Some(text) = expand_for_oracle(&slp) else {
            return Err(CliError::Usage(format!(
                "--oracle needs a text of at most {WINDOW_CAP} characters, this one has {}",
                slp.text_length()
            )));
        };
        let expected = evaluate_oracle(&text, &pattern, &query)?;
        if expected.result != answer.result {
            writeln!(err, "oracle mismatch: expected {}, got {}", expected.result, answer.result)?;
            return Ok(MISMATCH);
        }
    }
    Ok(0)
}

fn compress(input: &Path, output: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = read_file(input)?;
    let slp = Slp::from_text(&text).map_err(|source| CliError::Slp { path: input.to_owned(), source })?;
    let rendered = slp.serialize();
    match output {
        Some(path) => {
            std::fs::write(path, rendered).map_err(|source| CliError::Io { path: path.to_owned(), source })?
        }
        None => out.write_all(rendered.as_bytes())?,
    }
    log::info!("{} characters into {} statements", slp.text_length(), slp.len());
    Ok(0)
}

fn decompress(path: &Path, max_bytes: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let slp = load_slp(path)?;
    let text = slp.expand(slp.root(), max_bytes).map_err(|source| CliError::Slp { path: path.to_owned(), source })?;
    if text.len() > max_bytes {
        return Err(CliError::Usage(format!("expansion has {} bytes, over --max-bytes {max_bytes}", text.len())));
    }
    out.write_all(text.as_bytes())?;
    Ok(0)
}

struct Table<'a> {
    out: &'a mut dyn Write,
    passed: usize,
    failed: usize,
}

impl Table<'_> {
    fn row(&mut self, ok: bool, check: &str, detail: &str) -> std::io::Result<()> {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        writeln!(self.out, "{}  {check:<14} {detail}", if ok { "PASS" } else { "FAIL" })
    }
}

fn alphabet(slp: &Slp) -> Vec<char> {
    let set: BTreeSet<char> = slp
        .statements()
        .iter()
        .filter_map(|st| match st {
            Statement::Terminal(c) => Some(*c),
            Statement::Concat(..) => None,
        })
        .collect();
    set.into_iter().collect()
}

fn selfcheck(
    slp: &Slp,
    given: &[String],
    random_patterns: usize,
    seed: u64,
    threads: u16,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut patterns: Vec<Vec<char>> = given.iter().map(|p| p.chars().collect()).collect();
    if patterns.is_empty() {
        let sigma = alphabet(slp);
        let mut rng = StdRng::seed_from_u64(seed);
        for _ in 0..random_patterns {
            let len = rng.gen_range(1..=5);
            patterns.push((0..len).map(|_| sigma[rng.gen_range(0..sigma.len())]).collect());
        }
    }
    patterns.retain(|p| !p.is_empty());

    let text = expand_for_oracle(slp);
    let m = slp.text_length().clone();
    let mut table = Table { out, passed: 0, failed: 0 };
    match &text {
        Some(_) => writeln!(table.out, "text length {m}, {} statements", slp.len())?,
        None => writeln!(
            table.out,
            "text length {m} exceeds the oracle cap {WINDOW_CAP}; checking internal consistency only"
        )?,
    }

    for pattern in &patterns {
        let p: String = pattern.iter().collect();
        let n = pattern.len();
        let cache = build_cache(slp, pattern, threads)?;
        let mut queries = vec![Query::Contains, Query::PrefixLen, Query::Lcs, Query::CountMin];
        let mut widths: BTreeSet<BigUint> = [1u32.into(), n.into(), &m / 2u32, m.clone()].into_iter().collect();
        widths.remove(&BigUint::zero());
        for w in &widths {
            queries.push(Query::CountFixed(w.clone()));
            queries.push(Query::CountBounded(w.clone()));
        }
        queries.push(Query::Report(ReportMode::Minimal, 20));
        queries.push(Query::Report(ReportMode::Fixed(n.into()), 20));

        let mut got = Vec::new();
        for q in &queries {
            let a = evaluate(slp, pattern, q, Some(&cache))?;
            let detail = match q {
                Query::CountFixed(w) | Query::CountBounded(w) => format!("P={p:?} w={w}"),
                Query::Report(mode, _) => format!("P={p:?} {mode:?}"),
                _ => format!("P={p:?}"),
            };
            if let Some(text) = &text {
                let want = evaluate_oracle(text, pattern, q)?;
                let ok = want.result == a.result;
                let detail = if ok { detail } else { format!("{detail}: expected {}, got {}", want.result, a.result) };
                table.row(ok, q.name(), &detail)?;
            }
            got.push(a.result);
        }

        // identities that hold without expanding the text
        let contains = got[0] == "true";
        let n_str = n.to_string();
        table.row(
            contains == (got[2] == n_str) && contains == (got[1] == n_str),
            "consistency",
            &format!("P={p:?} contains/lcs/prefix-len"),
        )?;
        let bounded_full = evaluate(slp, pattern, &Query::CountBounded(m.clone()), Some(&cache))?.result;
        table.row(bounded_full == got[3], "consistency", &format!("P={p:?} count-bounded(m) = count-min"))?;

        if let (Some(text), true) =
            (&text, text.as_ref().is_some_and(|t| t.len() <= SEMILOCAL_CAP) && n <= SEMILOCAL_CAP)
        {
            let mine: BTreeSet<(BigInt, BigInt)> = cache.entry(slp.root()).matrix.nonzeros().iter().cloned().collect();
            let nb = n as i64;
            let partial = |i: i64, j: i64| (0..nb).contains(&i) || (0..nb).contains(&j);
            let want: BTreeSet<(BigInt, BigInt)> = oracle::oracle_semilocal(text, pattern)?
                .into_iter()
                .filter(|&(i, j)| partial(i, j))
                .map(|(i, j)| (i.into(), j.into()))
                .collect();
            let mine_partial: BTreeSet<(BigInt, BigInt)> = mine
                .into_iter()
                .filter(|(i, j)| partial(i.to_i64().unwrap_or(i64::MIN), j.to_i64().unwrap_or(i64::MIN)))
                .collect();
            table.row(mine_partial == want, "semilocal", &format!("P={p:?} root nonzeros"))?;
        }
    }

    let (passed, failed) = (table.passed, table.failed);
    writeln!(table.out, "{passed} passed, {failed} failed")?;
    Ok(if failed == 0 { 0 } else { MISMATCH })
}
