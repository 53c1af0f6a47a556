//! Minimal-window, bounded minimal-window and fixed-window counting.
//!
//! Counts are context-independent, so each symbol is evaluated once,
//! bottom-up: the count of `T_r = T_s T_t` is the count of `T_s`, plus the
//! count of `T_t`, plus the windows that straddle the boundary between them.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::{
    longest_prefix_in_suffix, longest_suffix_in_prefix, shortest_prefix_containing, shortest_suffix_containing,
    RecognitionError, SemilocalCache,
};
use crate::slp::{Slp, Statement, SymbolId};

/// Number of windows; may be as large as the text length.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct WindowCount(pub BigUint);

impl fmt::Display for WindowCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for WindowCount {
    fn from(v: u64) -> Self {
        WindowCount(BigUint::from(v))
    }
}

/// A window `[start, end)` with 0-based boundaries relative to a symbol.
pub(crate) type Span = (BigUint, BigUint);

/// A run of boundary-straddling fixed windows, described by the length
/// `w'` of their part in the left operand: every `w'` in `lo..=hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FixedClass {
    pub lo: BigUint,
    pub hi: BigUint,
}

/// Window counting over a prebuilt [`SemilocalCache`].
pub struct WindowCounter<'a> {
    slp: &'a Slp,
    cache: &'a SemilocalCache,
}

impl<'a> WindowCounter<'a> {
    pub fn new(slp: &'a Slp, cache: &'a SemilocalCache) -> Result<Self, RecognitionError> {
        if cache.len() != slp.len() {
            return Err(RecognitionError::CacheMismatch);
        }
        Ok(WindowCounter { slp, cache })
    }

    fn n(&self) -> usize {
        self.cache.pattern().len()
    }

    /// Minimal windows straddling the boundary of a concatenation symbol,
    /// ascending by start. With `max_len`, longer windows are left out.
    pub(crate) fn straddling_minimal(
        &self,
        sym: SymbolId,
        max_len: Option<&BigUint>,
    ) -> Result<Vec<Span>, RecognitionError> {
        let Statement::Concat(s, t) = self.slp.statement(sym) else {
            return Ok(Vec::new());
        };
        let n = self.n();
        let left = &self.cache.entry(s).index;
        let right = &self.cache.entry(t).index;
        let mid = self.slp.symbol_length(s);

        // One candidate per split P = P[..k] P[k..]: the shortest suffix of
        // the left part holding P[..k] joined to the shortest prefix of the
        // right part holding P[k..]. The splits k = 0 and k = n lie on one
        // side; they never straddle but still disqualify windows containing
        // them.
        let mut cands: Vec<Span> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let l1 = if k == 0 { Some(BigUint::zero()) } else { shortest_suffix_containing(left, k)? };
            let Some(l1) = l1 else { break };
            let l2 = if k == n { Some(BigUint::zero()) } else { shortest_prefix_containing(right, k)? };
            let Some(l2) = l2 else { continue };
            let span = (mid - &l1, mid + &l2);
            if cands.last() != Some(&span) {
                cands.push(span);
            }
        }
        // Both endpoints are nonincreasing in k, so windows sharing a start
        // or an end are adjacent here; only the tightest of each run is
        // minimal.
        debug_assert!(cands.windows(2).all(|w| w[1].0 <= w[0].0 && w[1].1 <= w[0].1));
        let mut out = Vec::new();
        for (x, (a, b)) in cands.iter().enumerate() {
            let shares_start = cands.get(x + 1).is_some_and(|next| next.0 == *a);
            let shares_end = x > 0 && cands[x - 1].1 == *b;
            let straddles = a < mid && b > mid;
            let fits = max_len.is_none_or(|w| &(b - a) <= w);
            if straddles && !shares_start && !shares_end && fits {
                out.push((a.clone(), b.clone()));
            }
        }
        out.reverse();
        Ok(out)
    }

    /// Per-symbol counts of minimal windows (no longer than `max_len`, if
    /// given).
    pub fn minimal_counts(&self, max_len: Option<&BigUint>) -> Result<Vec<BigUint>, RecognitionError> {
        let n = self.n();
        let pattern = self.cache.pattern();
        let mut counts: Vec<BigUint> = Vec::with_capacity(self.slp.len());
        for (r, st) in self.slp.statements().iter().enumerate() {
            let count = if self.slp.symbol_length(r) < &BigUint::from(n) {
                BigUint::zero()
            } else {
                match *st {
                    Statement::Terminal(c) => {
                        let fits = max_len.is_none_or(|w| !w.is_zero());
                        BigUint::from(u32::from(n == 1 && pattern[0] == c && fits))
                    }
                    Statement::Concat(s, t) => {
                        let straddling = self.straddling_minimal(r, max_len)?.len();
                        &counts[s] + &counts[t] + straddling
                    }
                }
            };
            counts.push(count);
        }
        Ok(counts)
    }

    /// Boundary-straddling windows of length `w` of a concatenation symbol
    /// that contain the pattern, grouped into runs of `w'` (left-part length),
    /// ascending.
    pub(crate) fn straddling_fixed(&self, sym: SymbolId, w: &BigUint) -> Result<Vec<FixedClass>, RecognitionError> {
        let Statement::Concat(s, t) = self.slp.statement(sym) else {
            return Ok(Vec::new());
        };
        let n = self.n();
        let (m1, m2) = (self.slp.symbol_length(s), self.slp.symbol_length(t));
        let wi = BigInt::from(w.clone());
        let lo = (&wi - BigInt::from(m2.clone())).max(BigInt::one());
        let hi = (&wi - 1u32).min(BigInt::from(m1.clone()));
        if lo > hi {
            return Ok(Vec::new());
        }
        let left = &self.cache.entry(s).index;
        let right = &self.cache.entry(t).index;

        // The answer for a given w' depends only on which left nonzeros have
        // their row inside the suffix band and which right nonzeros have
        // their column inside the prefix band. Each nonzero flips at one w'.
        let m1i = BigInt::from(m1.clone());
        let edge = BigInt::from(m2 + n);
        let nb = BigInt::from(n);
        let mut starts: Vec<BigInt> = vec![lo.clone()];
        for i in left.row_coords().iter().take_while(|i| i.is_negative()) {
            starts.push(&m1i + i + 1);
        }
        for k in right.col_coords().iter().filter(|k| **k >= nb) {
            // the right operand's prefix drops this column once
            // w'' < m2 + n - k, i.e. w' > w - (m2 + n - k)
            starts.push(&wi - (&edge - k) + 1);
        }
        starts.retain(|x| *x >= lo && *x <= hi);
        starts.sort_unstable();
        starts.dedup();

        let mut classes = Vec::new();
        let mut covered = BigInt::zero();
        for (x, start) in starts.iter().enumerate() {
            let end = match starts.get(x + 1) {
                Some(next) => next - 1,
                None => hi.clone(),
            };
            covered += &end - start + 1;
            let w1 = start.to_biguint().expect("positive");
            let w2 = w - &w1;
            let l1 = longest_prefix_in_suffix(left, &w1)?;
            let l2 = longest_suffix_in_prefix(right, &w2)?;
            if l1 + l2 >= n {
                let end = end.to_biguint().expect("positive");
                match classes.last_mut() {
                    Some(FixedClass { hi, .. }) if &*hi + 1u32 == w1 => *hi = end,
                    _ => classes.push(FixedClass { lo: w1, hi: end }),
                }
            }
        }
        debug_assert_eq!(covered, &hi - &lo + 1);
        Ok(classes)
    }

    /// Per-symbol counts of length-`w` windows containing the pattern.
    pub fn fixed_counts(&self, w: &BigUint) -> Result<Vec<BigUint>, RecognitionError> {
        if w.is_zero() {
            return Err(RecognitionError::ZeroWindow);
        }
        let n = self.n();
        let pattern = self.cache.pattern();
        let too_short = w < &BigUint::from(n);
        let mut counts: Vec<BigUint> = Vec::with_capacity(self.slp.len());
        for (r, st) in self.slp.statements().iter().enumerate() {
            let count = if too_short || self.slp.symbol_length(r) < w {
                BigUint::zero()
            } else {
                match *st {
                    Statement::Terminal(c) => BigUint::from(u32::from(n == 1 && pattern[0] == c)),
                    Statement::Concat(s, t) => {
                        let mut total = &counts[s] + &counts[t];
                        for class in self.straddling_fixed(r, w)? {
                            total += &class.hi - &class.lo + 1u32;
                        }
                        total
                    }
                }
            };
            counts.push(count);
        }
        Ok(counts)
    }
}

fn root_count(counts: Vec<BigUint>, slp: &Slp) -> WindowCount {
    WindowCount(counts.into_iter().nth(slp.root()).unwrap_or_default())
}

/// Number of windows of the text containing `pattern` minimally.
pub fn count_minimal_windows(slp: &Slp, pattern: &[char]) -> Result<WindowCount, RecognitionError> {
    let cache = SemilocalCache::build(slp, pattern)?;
    Ok(root_count(WindowCounter::new(slp, &cache)?.minimal_counts(None)?, slp))
}

/// Number of windows of length at most `max_len` containing `pattern`
/// minimally.
pub fn count_bounded_minimal(slp: &Slp, pattern: &[char], max_len: &BigUint) -> Result<WindowCount, RecognitionError> {
    let cache = SemilocalCache::build(slp, pattern)?;
    Ok(root_count(WindowCounter::new(slp, &cache)?.minimal_counts(Some(max_len))?, slp))
}

/// Number of windows of length exactly `w` containing `pattern`.
pub fn count_fixed_windows(slp: &Slp, pattern: &[char], w: &BigUint) -> Result<WindowCount, RecognitionError> {
    if w.is_zero() {
        return Err(RecognitionError::ZeroWindow);
    }
    let cache = SemilocalCache::build(slp, pattern)?;
    Ok(root_count(WindowCounter::new(slp, &cache)?.fixed_counts(w)?, slp))
}
