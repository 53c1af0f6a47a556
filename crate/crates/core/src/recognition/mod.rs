//! Subsequence recognition over an SLP-compressed text and an explicit
//! pattern.
//!
//! Global recognition uses per-symbol jump tables and needs nothing else.
//! Everything else runs on a [`SemilocalCache`]: the partial score matrix of
//! every symbol against the pattern plus a dominance index over it.

mod report;
mod windows;

pub use report::{report_windows, report_windows_with_cache, ReportMode, WindowReport};
pub use windows::{count_bounded_minimal, count_fixed_windows, count_minimal_windows, WindowCount, WindowCounter};

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use rayon::prelude::*;
use thiserror::Error;

use crate::semilocal::{base_case, concat, DominanceIndex, PartialScoreMatrix, SemilocalError};
use crate::slp::{Slp, Statement, SymbolId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecognitionError {
    #[error("pattern must be nonempty")]
    EmptyPattern,
    #[error("window length must be positive")]
    ZeroWindow,
    #[error("split {0} out of range 1..={1}")]
    SplitOutOfRange(usize, usize),
    #[error("cache was built for another program or pattern")]
    CacheMismatch,
    #[error(transparent)]
    Semilocal(#[from] SemilocalError),
}

/// Per-symbol maps `k -> k + (longest prefix of P[k..] that is a
/// subsequence of the symbol)`. For `T_r = T_s T_t` the map of `r` is the
/// map of `t` applied after the map of `s`.
#[derive(Debug, Clone)]
pub struct JumpTable {
    maps: Vec<Vec<u32>>,
}

impl JumpTable {
    pub fn build(slp: &Slp, pattern: &[char]) -> Self {
        let n = pattern.len();
        let mut maps: Vec<Vec<u32>> = Vec::with_capacity(slp.len());
        for st in slp.statements() {
            let map = match *st {
                Statement::Terminal(c) => (0..=n).map(|k| (k + usize::from(k < n && pattern[k] == c)) as u32).collect(),
                Statement::Concat(s, t) => {
                    let (first, second) = (&maps[s], &maps[t]);
                    first.iter().map(|&k| second[k as usize]).collect()
                }
            };
            maps.push(map);
        }
        JumpTable { maps }
    }

    /// The map of `sym`, indexed by `k` in `0..=n`.
    pub fn map(&self, sym: SymbolId) -> &[u32] {
        &self.maps[sym]
    }
}

/// Length of the longest prefix of `pattern` that is a subsequence of the
/// text.
pub fn global_longest_prefix(slp: &Slp, pattern: &[char]) -> usize {
    JumpTable::build(slp, pattern).map(slp.root())[0] as usize
}

/// Whether the text contains `pattern` as a subsequence.
pub fn contains(slp: &Slp, pattern: &[char]) -> bool {
    global_longest_prefix(slp, pattern) == pattern.len()
}

#[derive(Debug, Clone)]
pub struct CacheEntry {
    pub matrix: PartialScoreMatrix,
    pub index: DominanceIndex,
}

impl CacheEntry {
    fn new(matrix: PartialScoreMatrix) -> Self {
        let index = DominanceIndex::build(&matrix);
        CacheEntry { matrix, index }
    }
}

/// Partial score matrix and dominance index of every symbol against the
/// pattern.
#[derive(Debug, Clone)]
pub struct SemilocalCache {
    pattern: Vec<char>,
    entries: Vec<CacheEntry>,
}

impl SemilocalCache {
    /// Builds all entries bottom-up in statement order.
    pub fn build(slp: &Slp, pattern: &[char]) -> Result<Self, RecognitionError> {
        if pattern.is_empty() {
            return Err(RecognitionError::EmptyPattern);
        }
        let mut entries: Vec<CacheEntry> = Vec::with_capacity(slp.len());
        for st in slp.statements() {
            let matrix = match *st {
                Statement::Terminal(c) => base_case(c, pattern)?,
                Statement::Concat(s, t) => concat(&entries[s].matrix, &entries[t].matrix)?,
            };
            entries.push(CacheEntry::new(matrix));
        }
        Ok(SemilocalCache { pattern: pattern.to_vec(), entries })
    }

    /// Same result as [`SemilocalCache::build`], processing symbols of equal
    /// height in parallel on `threads` workers.
    pub fn build_parallel(slp: &Slp, pattern: &[char], threads: usize) -> Result<Self, RecognitionError> {
        if pattern.is_empty() {
            return Err(RecognitionError::EmptyPattern);
        }
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        let mut height = vec![0usize; slp.len()];
        for (r, st) in slp.statements().iter().enumerate() {
            if let Statement::Concat(s, t) = *st {
                height[r] = 1 + height[s].max(height[t]);
            }
        }
        let levels = height.iter().copied().max().unwrap_or(0) + 1;
        let mut by_level: Vec<Vec<SymbolId>> = vec![Vec::new(); levels];
        for (r, &h) in height.iter().enumerate() {
            by_level[h].push(r);
        }
        let mut slots: Vec<Option<CacheEntry>> = vec![None; slp.len()];
        for level in by_level {
            let done = &slots;
            let built: Vec<(SymbolId, Result<CacheEntry, SemilocalError>)> = pool.install(|| {
                level
                    .par_iter()
                    .map(|&r| {
                        let matrix = match slp.statement(r) {
                            Statement::Terminal(c) => base_case(c, pattern),
                            Statement::Concat(s, t) => {
                                let left = &done[s].as_ref().expect("lower level").matrix;
                                let right = &done[t].as_ref().expect("lower level").matrix;
                                concat(left, right)
                            }
                        };
                        (r, matrix.map(CacheEntry::new))
                    })
                    .collect()
            });
            for (r, entry) in built {
                slots[r] = Some(entry?);
            }
        }
        let entries = slots.into_iter().map(|e| e.expect("every level built")).collect();
        Ok(SemilocalCache { pattern: pattern.to_vec(), entries })
    }

    pub fn pattern(&self) -> &[char] {
        &self.pattern
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, sym: SymbolId) -> &CacheEntry {
        &self.entries[sym]
    }
}

pub fn build_semilocal_cache(slp: &Slp, pattern: &[char]) -> Result<SemilocalCache, RecognitionError> {
    SemilocalCache::build(slp, pattern)
}

/// LCS of the whole text against the pattern.
pub fn lcs(slp: &Slp, pattern: &[char]) -> Result<usize, RecognitionError> {
    let cache = SemilocalCache::build(slp, pattern)?;
    Ok(cache.entry(slp.root()).index.string_substring(0, pattern.len())?)
}

/// Length of the shortest suffix of the symbol's text that contains
/// `P[..prefix_len]` as a subsequence, or `None` if the whole text does not.
///
/// The suffix-prefix score only changes where the suffix start crosses the
/// row of a nonzero, so the search runs over those breakpoints.
pub fn shortest_suffix_containing(
    idx: &DominanceIndex,
    prefix_len: usize,
) -> Result<Option<BigUint>, RecognitionError> {
    let n = idx.pattern_len();
    if prefix_len == 0 || prefix_len > n {
        return Err(RecognitionError::SplitOutOfRange(prefix_len, n));
    }
    let m = BigInt::from(idx.text_len().clone());
    // rows ascending; candidate lengths m + i + 1 for negative rows i
    let negative = idx.row_coords().partition_point(|i| i.is_negative());
    let candidates = &idx.row_coords()[..negative];
    let len_at = |w: usize| -> BigUint { (&m + &candidates[w] + 1u32).to_biguint().expect("row >= -m") };
    let holds = |l: &BigUint| idx.suffix_prefix(l, prefix_len).map(|v| v == prefix_len);
    let (mut lo, mut hi) = (0, candidates.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if holds(&len_at(mid))? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok((lo < candidates.len()).then(|| len_at(lo)))
}

/// Length of the shortest prefix of the symbol's text that contains
/// `P[from..]` as a subsequence, or `None` if the whole text does not.
pub fn shortest_prefix_containing(idx: &DominanceIndex, from: usize) -> Result<Option<BigUint>, RecognitionError> {
    let n = idx.pattern_len();
    if from >= n {
        return Err(RecognitionError::SplitOutOfRange(from, n.saturating_sub(1)));
    }
    let edge = BigInt::from(idx.text_len() + n);
    // columns ascending; candidate lengths m + n - j for columns j >= n,
    // listed here in ascending length
    let nb = BigInt::from(n);
    let start = idx.col_coords().partition_point(|j| *j < nb);
    let candidates: Vec<BigUint> =
        idx.col_coords()[start..].iter().rev().map(|j| (&edge - j).to_biguint().expect("column < m + n")).collect();
    let want = n - from;
    let (mut lo, mut hi) = (0, candidates.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if idx.prefix_suffix(&candidates[mid], from)? == want {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates.get(lo).cloned())
}

/// Largest `q` such that `P[..q]` is a subsequence of the length-`l` suffix.
pub(crate) fn longest_prefix_in_suffix(idx: &DominanceIndex, l: &BigUint) -> Result<usize, RecognitionError> {
    let (mut lo, mut hi) = (0, idx.pattern_len());
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if idx.suffix_prefix(l, mid)? == mid {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

/// Largest `q` such that the last `q` pattern characters are a subsequence of
/// the length-`l` prefix.
pub(crate) fn longest_suffix_in_prefix(idx: &DominanceIndex, l: &BigUint) -> Result<usize, RecognitionError> {
    let n = idx.pattern_len();
    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if idx.prefix_suffix(l, n - mid)? == mid {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn c(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    pub(crate) fn fib() -> Slp {
        Slp::parse("1='b'\n2='a'\n3=2 1\n4=3 2\n5=4 3\n6=5 4\n").unwrap()
    }

    pub(crate) fn chain(text: &str) -> Slp {
        let mut st = Vec::new();
        let mut ids = std::collections::HashMap::new();
        let mut acc: Option<usize> = None;
        for ch in text.chars() {
            let t = *ids.entry(ch).or_insert_with(|| {
                st.push(Statement::Terminal(ch));
                st.len() - 1
            });
            acc = Some(match acc {
                None => t,
                Some(a) => {
                    st.push(Statement::Concat(a, t));
                    st.len() - 1
                }
            });
        }
        Slp::new(st, acc).unwrap()
    }

    #[test]
    fn jump_table_invariants() {
        let slp = fib();
        let p = c("aabab");
        let jt = JumpTable::build(&slp, &p);
        for r in 0..slp.len() {
            let map = jt.map(r);
            let text: Vec<char> = slp.expand(r, 100).unwrap().chars().collect();
            for k in 0..=p.len() {
                assert!(map[k] as usize >= k);
                if k > 0 {
                    assert!(map[k] >= map[k - 1]);
                }
                assert_eq!(map[k] as usize, k + oracle::oracle_prefix_len(&text, &p[k..]));
            }
        }
    }

    #[test]
    fn global_examples() {
        assert_eq!(global_longest_prefix(&fib(), &c("aab")), 3);
        assert_eq!(global_longest_prefix(&fib(), &[]), 0);
        assert_eq!(global_longest_prefix(&fib(), &c("bbbb")), 3);
        assert!(contains(&chain("baabcabcabaca"), &c("baabcbca")));
        assert!(!contains(&fib(), &c("abc")));
        assert!(contains(&fib(), &[]));
    }

    #[test]
    fn cache_examples() {
        let cache = build_semilocal_cache(&fib(), &c("aab")).unwrap();
        assert_eq!(cache.len(), 6);
        for r in 0..6 {
            let k = cache.entry(r).matrix.nonzeros().len();
            assert!((3..=6).contains(&k));
        }
        let cache = build_semilocal_cache(&chain("baabcbca"), &c("baabcabcabaca")).unwrap();
        let root = &cache.entry(cache.len() - 1).index;
        assert_eq!(root.string_substring(4, 11), Ok(5));
        assert_eq!(root.count(&4.into(), &11.into()), 2);

        let single = Slp::parse("1='a'").unwrap();
        let cache = build_semilocal_cache(&single, &c("ab")).unwrap();
        assert_eq!(cache.entry(0).matrix, base_case('a', &c("ab")).unwrap());
        assert_eq!(build_semilocal_cache(&single, &[]).unwrap_err(), RecognitionError::EmptyPattern);
    }

    #[test]
    fn parallel_build_matches() {
        let slp = Slp::from_text("abracadabra-abracadabra-cadabra").unwrap();
        let p = c("acdba");
        let seq = SemilocalCache::build(&slp, &p).unwrap();
        let par = SemilocalCache::build_parallel(&slp, &p, 4).unwrap();
        for r in 0..slp.len() {
            assert_eq!(seq.entry(r).matrix, par.entry(r).matrix);
        }
    }

    #[test]
    fn lcs_examples() {
        let mut st = vec![Statement::Terminal('a')];
        for r in 0..10 {
            st.push(Statement::Concat(r, r));
        }
        assert_eq!(lcs(&Slp::new(st, None).unwrap(), &c("aaa")), Ok(3));
        assert_eq!(lcs(&fib(), &c("aab")), Ok(3));
        assert_eq!(lcs(&fib(), &c("bbbb")), Ok(3));
        assert_eq!(lcs(&chain("baabcbca"), &c("baabcabcabaca")), Ok(8));
        assert_eq!(lcs(&fib(), &[]), Err(RecognitionError::EmptyPattern));
    }

    #[test]
    fn shortest_suffix_examples() {
        let slp = fib();
        let cache = build_semilocal_cache(&slp, &c("aab")).unwrap();
        // symbol 5 (index 4) is "abaab"
        let idx = &cache.entry(4).index;
        assert_eq!(shortest_suffix_containing(idx, 2).unwrap(), Some(BigUint::from(3u32)));
        assert_eq!(shortest_suffix_containing(idx, 3).unwrap(), Some(BigUint::from(3u32)));
        // "ab" has no "aa"
        assert_eq!(shortest_suffix_containing(&cache.entry(2).index, 2).unwrap(), None);
        // "aba" ends with "a"
        assert_eq!(shortest_suffix_containing(&cache.entry(3).index, 1).unwrap(), Some(BigUint::from(1u32)));
        assert!(shortest_suffix_containing(idx, 0).is_err());
        assert!(shortest_suffix_containing(idx, 4).is_err());
    }

    #[test]
    fn shortest_searches_match_scan() {
        let texts = ["abaababa", "bbab", "cabbacab", "aaaa", "b"];
        let patterns = ["aab", "ab", "bca", "a", "bbba"];
        for t in texts {
            let slp = Slp::from_text(t).unwrap();
            let tc = c(t);
            for p in patterns {
                let pc = c(p);
                let cache = build_semilocal_cache(&slp, &pc).unwrap();
                let idx = &cache.entry(slp.root()).index;
                for k in 1..=pc.len() {
                    let want = (0..=tc.len()).find(|&l| oracle::oracle_contains(&tc[tc.len() - l..], &pc[..k]));
                    assert_eq!(shortest_suffix_containing(idx, k).unwrap(), want.map(BigUint::from), "{t} {p} {k}");
                }
                for k in 0..pc.len() {
                    let want = (0..=tc.len()).find(|&l| oracle::oracle_contains(&tc[..l], &pc[k..]));
                    assert_eq!(shortest_prefix_containing(idx, k).unwrap(), want.map(BigUint::from), "{t} {p} {k}");
                }
                for l in 0..=tc.len() {
                    let lb = BigUint::from(l);
                    assert_eq!(
                        longest_prefix_in_suffix(idx, &lb).unwrap(),
                        oracle::oracle_prefix_len(&tc[tc.len() - l..], &pc)
                    );
                    let rev_t: Vec<char> = tc[..l].iter().rev().copied().collect();
                    let rev_p: Vec<char> = pc.iter().rev().copied().collect();
                    assert_eq!(longest_suffix_in_prefix(idx, &lb).unwrap(), oracle::oracle_prefix_len(&rev_t, &rev_p));
                }
            }
        }
    }
}
