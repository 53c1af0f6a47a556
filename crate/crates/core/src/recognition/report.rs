//! Listing windows in increasing start order.
//!
//! Within `T_r = T_s T_t`, every window inside `T_s` starts before every
//! straddling window, which in turn start before every window inside `T_t`.
//! A depth-first walk that skips symbols with no windows therefore emits the
//! windows already sorted and stops once the limit is reached.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::windows::WindowCounter;
use super::{RecognitionError, SemilocalCache};
use crate::slp::{Slp, Statement, SymbolId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReportMode {
    /// Windows containing the pattern minimally.
    Minimal,
    /// Windows of exactly this length containing the pattern.
    Fixed(BigUint),
    /// Minimal windows no longer than this.
    Bounded(BigUint),
}

/// Windows as 1-based inclusive `(start, end)` positions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WindowReport {
    pub windows: Vec<(BigUint, BigUint)>,
    /// More windows exist beyond the limit.
    pub truncated: bool,
}

enum Step {
    Visit(SymbolId, BigUint),
    Straddling(SymbolId, BigUint),
}

/// Reports up to `limit` windows of the text for `pattern`.
pub fn report_windows(
    slp: &Slp,
    pattern: &[char],
    mode: &ReportMode,
    limit: usize,
) -> Result<WindowReport, RecognitionError> {
    if matches!(mode, ReportMode::Fixed(w) if w.is_zero()) {
        return Err(RecognitionError::ZeroWindow);
    }
    let cache = SemilocalCache::build(slp, pattern)?;
    report_windows_with_cache(slp, &cache, mode, limit)
}

/// [`report_windows`] reusing a cache built for the same program.
pub fn report_windows_with_cache(
    slp: &Slp,
    cache: &SemilocalCache,
    mode: &ReportMode,
    limit: usize,
) -> Result<WindowReport, RecognitionError> {
    let counter = WindowCounter::new(slp, cache)?;
    let counts = match mode {
        ReportMode::Minimal => counter.minimal_counts(None)?,
        ReportMode::Bounded(w) => counter.minimal_counts(Some(w))?,
        ReportMode::Fixed(w) => counter.fixed_counts(w)?,
    };
    let wanted = limit.saturating_add(1);
    let mut out: Vec<(BigUint, BigUint)> = Vec::new();
    let mut stack = vec![Step::Visit(slp.root(), BigUint::zero())];
    while let Some(step) = stack.pop() {
        if out.len() >= wanted {
            break;
        }
        match step {
            Step::Visit(r, off) => {
                if counts[r].is_zero() {
                    continue;
                }
                match slp.statement(r) {
                    Statement::Terminal(_) => {
                        let pos = off + 1u32;
                        out.push((pos.clone(), pos));
                    }
                    Statement::Concat(s, t) => {
                        let right = &off + slp.symbol_length(s);
                        stack.push(Step::Visit(t, right));
                        stack.push(Step::Straddling(r, off.clone()));
                        stack.push(Step::Visit(s, off));
                    }
                }
            }
            Step::Straddling(r, off) => match mode {
                ReportMode::Minimal | ReportMode::Bounded(_) => {
                    let bound = match mode {
                        ReportMode::Bounded(w) => Some(w),
                        _ => None,
                    };
                    for (a, b) in counter.straddling_minimal(r, bound)? {
                        if out.len() >= wanted {
                            break;
                        }
                        out.push((&off + a + 1u32, &off + b));
                    }
                }
                ReportMode::Fixed(w) => {
                    let Statement::Concat(s, _) = slp.statement(r) else { continue };
                    let mid = &off + slp.symbol_length(s);
                    // ascending start means descending left-part length
                    'classes: for class in counter.straddling_fixed(r, w)?.into_iter().rev() {
                        let mut w1 = class.hi;
                        loop {
                            if out.len() >= wanted {
                                break 'classes;
                            }
                            let start = &mid - &w1;
                            out.push((&start + 1u32, start + w));
                            if w1 == class.lo {
                                break;
                            }
                            w1 -= BigUint::one();
                        }
                    }
                }
            },
        }
    }
    let truncated = out.len() > limit;
    out.truncate(limit);
    Ok(WindowReport { windows: out, truncated })
}
