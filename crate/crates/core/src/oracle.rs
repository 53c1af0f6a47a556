//! Brute-force reference implementations on uncompressed strings.
//!
//! Nothing here shares code with the compressed-text algorithms; these are
//! the ground truth for differential tests and the `selfcheck` command.

use thiserror::Error;

/// Largest string length accepted by [`oracle_semilocal`].
pub const SEMILOCAL_CAP: usize = 256;
/// Largest text length accepted by the window-counting oracles.
pub const WINDOW_CAP: usize = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("input of length {len} exceeds the oracle cap {cap}")]
    TooLarge { len: usize, cap: usize },
}

fn check_cap(len: usize, cap: usize) -> Result<(), OracleError> {
    if len > cap {
        Err(OracleError::TooLarge { len, cap })
    } else {
        Ok(())
    }
}

/// Classic quadratic LCS table.
pub fn oracle_lcs(a: &[char], b: &[char]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for &x in a {
        for (c, &y) in b.iter().enumerate() {
            cur[c + 1] = if x == y { prev[c] + 1 } else { prev[c + 1].max(cur[c]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Highest-score matrix `A(i0, j0)` of the extended alignment dag of text
/// `a` (rows) against pattern `b` (columns), tabulated on
/// `i0 in -m..=n`, `j0 in 0..=m+n`.
#[derive(Debug, Clone)]
pub struct ExtendedScores {
    m: usize,
    n: usize,
    table: Vec<Vec<i64>>,
}

impl ExtendedScores {
    pub fn compute(a: &[char], b: &[char]) -> Result<Self, OracleError> {
        check_cap(a.len(), SEMILOCAL_CAP)?;
        check_cap(b.len(), SEMILOCAL_CAP)?;
        let (m, n) = (a.len() as i64, b.len() as i64);
        let width = (m + n + 1) as usize;
        let mut table = Vec::with_capacity((m + n + 1) as usize);
        for i0 in -m..=n {
            // h[c - i0] = best score from v(0, i0) to v(l, c)
            let cols = (m + n - i0 + 1) as usize;
            let mut prev = vec![0i64; cols];
            let mut cur = vec![0i64; cols];
            for l in 1..=m as usize {
                cur[0] = prev[0];
                for x in 1..cols {
                    let c = i0 + x as i64;
                    let diag = if (1..=n).contains(&c) { a[l - 1] == b[(c - 1) as usize] } else { true };
                    cur[x] = prev[x].max(cur[x - 1]).max(prev[x - 1] + i64::from(diag));
                }
                std::mem::swap(&mut prev, &mut cur);
            }
            let row: Vec<i64> =
                (0..width as i64).map(|j0| if j0 < i0 { j0 - i0 } else { prev[(j0 - i0) as usize] }).collect();
            table.push(row);
        }
        Ok(ExtendedScores { m: a.len(), n: b.len(), table })
    }

    /// `A(i0, j0)` for `-m <= i0 <= n`, `0 <= j0 <= m + n`.
    pub fn get(&self, i0: i64, j0: i64) -> i64 {
        self.table[(i0 + self.m as i64) as usize][j0 as usize]
    }

    /// LCS of `a` against `b[j..j2]`.
    pub fn string_substring(&self, j: usize, j2: usize) -> i64 {
        self.get(j as i64, j2 as i64)
    }

    /// LCS of the length-`l` suffix of `a` against `b[..j2]`.
    pub fn suffix_prefix(&self, l: usize, j2: usize) -> i64 {
        let i = (self.m - l) as i64;
        self.get(-i, j2 as i64) - i
    }

    /// LCS of the length-`l` prefix of `a` against `b[j..]`.
    pub fn prefix_suffix(&self, l: usize, j: usize) -> i64 {
        let (m, n) = (self.m as i64, self.n as i64);
        self.get(j as i64, m + n - l as i64) - m + l as i64
    }

    /// Critical points in rank coordinates (`r` stands for `r + 1/2`): the
    /// odd half-integer points where the matrix increments change.
    pub fn critical_points(&self) -> Vec<(i64, i64)> {
        let (m, n) = (self.m as i64, self.n as i64);
        let mut pts = Vec::new();
        for i in -m..n {
            for j in 0..m + n {
                let below = self.get(i + 1, j);
                let here = self.get(i, j);
                if below + 1 == here && here == self.get(i + 1, j + 1) && here == self.get(i, j + 1) {
                    pts.push((i, j));
                }
            }
        }
        pts
    }
}

/// All critical points of the extended highest-score matrix of `a` against
/// `b`. Exactly `|a| + |b|` of them exist; this is asserted.
pub fn oracle_semilocal(a: &[char], b: &[char]) -> Result<Vec<(i64, i64)>, OracleError> {
    let pts = ExtendedScores::compute(a, b)?.critical_points();
    assert_eq!(pts.len(), a.len() + b.len(), "critical point count");
    Ok(pts)
}

/// Length of the longest prefix of `p` that is a subsequence of `t`.
pub fn oracle_prefix_len(t: &[char], p: &[char]) -> usize {
    let mut k = 0;
    for &c in t {
        if k < p.len() && p[k] == c {
            k += 1;
        }
    }
    k
}

pub fn oracle_contains(t: &[char], p: &[char]) -> bool {
    oracle_prefix_len(t, p) == p.len()
}

/// Containment table: `ends[i]` is the least `j` such that `t[i..j]`
/// contains `p`, found by a greedy scan from `i`.
struct Windows {
    ends: Vec<Option<usize>>,
}

impl Windows {
    fn new(t: &[char], p: &[char]) -> Result<Self, OracleError> {
        check_cap(t.len(), WINDOW_CAP)?;
        let ends = (0..=t.len())
            .map(|i| {
                let mut k = 0;
                if p.is_empty() {
                    return Some(i);
                }
                for (x, &c) in t[i..].iter().enumerate() {
                    if p[k] == c {
                        k += 1;
                        if k == p.len() {
                            return Some(i + x + 1);
                        }
                    }
                }
                None
            })
            .collect();
        Ok(Windows { ends })
    }

    fn contains(&self, i: usize, j: usize) -> bool {
        i <= j && self.ends[i].is_some_and(|e| e <= j)
    }

    fn minimal(&self, i: usize, j: usize) -> bool {
        self.contains(i, j) && !self.contains(i + 1, j) && !self.contains(i, j - 1)
    }
}

/// Every window of `t` containing `p` minimally, as 1-based inclusive
/// `(start, end)` pairs in increasing start order.
pub fn oracle_minimal_windows(t: &[char], p: &[char]) -> Result<Vec<(usize, usize)>, OracleError> {
    let w = Windows::new(t, p)?;
    let mut out = Vec::new();
    for i in 0..t.len() {
        for j in i + 1..=t.len() {
            if w.minimal(i, j) {
                out.push((i + 1, j));
            }
        }
    }
    Ok(out)
}

pub fn oracle_count_minimal(t: &[char], p: &[char]) -> Result<usize, OracleError> {
    Ok(oracle_minimal_windows(t, p)?.len())
}

pub fn oracle_count_bounded(t: &[char], p: &[char], max_len: usize) -> Result<usize, OracleError> {
    Ok(oracle_minimal_windows(t, p)?.iter().filter(|(s, e)| e - s < max_len).count())
}

/// Every length-`len` window of `t` containing `p`, 1-based inclusive.
pub fn oracle_fixed_windows(t: &[char], p: &[char], len: usize) -> Result<Vec<(usize, usize)>, OracleError> {
    let w = Windows::new(t, p)?;
    if len == 0 || len > t.len() {
        return Ok(Vec::new());
    }
    Ok((0..=t.len() - len).filter(|&i| w.contains(i, i + len)).map(|i| (i + 1, i + len)).collect())
}

pub fn oracle_count_fixed(t: &[char], p: &[char], len: usize) -> Result<usize, OracleError> {
    Ok(oracle_fixed_windows(t, p, len)?.len())
}
