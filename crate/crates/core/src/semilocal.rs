//! Partial implicit highest-score matrices of a text symbol against the
//! pattern.
//!
//! Coordinates are ranks of odd half-integers (`r` stands for `r + 1/2`) and
//! are arbitrary-precision, since the text length may be exponential in the
//! program size. A matrix for a text of length `m` against a pattern of
//! length `n` keeps only the nonzeros `(i, j)` with `i` or `j` in `0..n`:
//! between `n` and `2n` of them regardless of `m`.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::seaweed::{compress_ranks, mul_dist_fast};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemilocalError {
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("pattern length mismatch: {0} vs {1}")]
    PatternMismatch(usize, usize),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
}

/// Nonzero `(i, j)` in rank coordinates.
pub type Nonzero = (BigInt, BigInt);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialScoreMatrix {
    m: BigUint,
    n: usize,
    /// Sorted by `(i, j)`; this is the canonical form used for equality.
    nonzeros: Vec<Nonzero>,
}

impl PartialScoreMatrix {
    /// Builds a matrix from explicit nonzeros, checking every invariant.
    pub fn from_nonzeros(m: BigUint, n: usize, mut nonzeros: Vec<Nonzero>) -> Result<Self, SemilocalError> {
        nonzeros.sort_unstable();
        let psm = PartialScoreMatrix { m, n, nonzeros };
        psm.validate()?;
        Ok(psm)
    }

    fn from_sorted_unchecked(m: BigUint, n: usize, nonzeros: Vec<Nonzero>) -> Self {
        let psm = PartialScoreMatrix { m, n, nonzeros };
        debug_assert_eq!(psm.validate(), Ok(()));
        psm
    }

    pub fn text_len(&self) -> &BigUint {
        &self.m
    }

    pub fn pattern_len(&self) -> usize {
        self.n
    }

    pub fn nonzeros(&self) -> &[Nonzero] {
        &self.nonzeros
    }

    /// Checks the structural invariants of a partial representation.
    pub fn validate(&self) -> Result<(), SemilocalError> {
        let bad = |msg: String| Err(SemilocalError::InvalidMatrix(msg));
        let n = self.n;
        let len = self.nonzeros.len();
        if len < n || len > 2 * n.max(1) {
            return bad(format!("{len} nonzeros for n = {n}"));
        }
        let m = BigInt::from(self.m.clone());
        let nb = BigInt::from(n);
        let mut row_hits = vec![0u32; n];
        let mut col_hits = vec![0u32; n];
        let mut cols: Vec<&BigInt> = Vec::with_capacity(len);
        for (w, (i, j)) in self.nonzeros.iter().enumerate() {
            if w > 0 && self.nonzeros[w - 1].0 == *i {
                return bad(format!("repeated row {i}"));
            }
            if *i < -&m || *i >= nb || j.is_negative() || *j >= &m + &nb {
                return bad(format!("({i}, {j}) outside the core"));
            }
            if i > j {
                return bad(format!("({i}, {j}) below the diagonal"));
            }
            let small_i = small(i, n);
            let small_j = small(j, n);
            if small_i.is_none() && small_j.is_none() && !self.m.is_one() {
                return bad(format!("({i}, {j}) is not a partial nonzero"));
            }
            if let Some(r) = small_i {
                row_hits[r] += 1;
            }
            if let Some(c) = small_j {
                col_hits[c] += 1;
            }
            cols.push(j);
        }
        cols.sort_unstable();
        if cols.windows(2).any(|w| w[0] == w[1]) {
            return bad("repeated column".into());
        }
        if row_hits.iter().chain(&col_hits).any(|&h| h != 1) {
            return bad("rows/columns in 0..n not covered exactly once".into());
        }
        Ok(())
    }

    /// Debug dump: one nonzero per line as doubled half-integers `2i+1,2j+1`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, j) in &self.nonzeros {
            let _ = writeln!(out, "{},{}", 2 * i + 1, 2 * j + 1);
        }
        out
    }
}

fn small(v: &BigInt, n: usize) -> Option<usize> {
    v.to_usize().filter(|&x| x < n)
}

/// Matrix of a single character against the pattern (`m = 1`). All `n + 1`
/// core nonzeros are kept.
pub fn base_case(c: char, pattern: &[char]) -> Result<PartialScoreMatrix, SemilocalError> {
    let n = pattern.len();
    if n == 0 {
        return Err(SemilocalError::EmptyPattern);
    }
    let mut nz: Vec<Nonzero> = Vec::with_capacity(n + 1);
    // the seaweed entering from the left side hops from match to match
    let mut prev: i64 = -1;
    for (j, &p) in pattern.iter().enumerate() {
        let j = j as i64;
        if p == c {
            nz.push((prev.into(), j.into()));
            prev = j;
        } else {
            nz.push((j.into(), j.into()));
        }
    }
    nz.push((prev.into(), (n as i64).into()));
    nz.sort_unstable();
    Ok(PartialScoreMatrix::from_sorted_unchecked(BigUint::one(), n, nz))
}

/// Matrix of `T'T''` from the matrices of `T'` (`a`) and `T''` (`b`).
///
/// Nonzeros of `a` leaving through the right side and nonzeros of `b`
/// entering through the left side pass through with a shift; the `n`
/// nonzeros of each operand that cross the shared row are combined by the
/// seaweed product. Nonzeros outside the partial window are dropped.
pub fn concat(a: &PartialScoreMatrix, b: &PartialScoreMatrix) -> Result<PartialScoreMatrix, SemilocalError> {
    let n = a.n;
    if b.n != n {
        return Err(SemilocalError::PatternMismatch(n, b.n));
    }
    let nb = BigInt::from(n);
    let m_left = BigInt::from(a.m.clone());
    let m_right = BigInt::from(b.m.clone());
    let mut out: Vec<Nonzero> = Vec::with_capacity(2 * n);

    let mut a_mid: Vec<(BigInt, BigInt)> = Vec::with_capacity(n);
    for (i, j) in &a.nonzeros {
        if *j >= nb {
            if small(i, n).is_some() {
                out.push((i.clone(), j + &m_right));
            }
        } else {
            a_mid.push((i.clone(), j.clone()));
        }
    }
    let mut b_mid: Vec<(BigInt, BigInt)> = Vec::with_capacity(n);
    for (j, k) in &b.nonzeros {
        if j.is_negative() {
            if small(k, n).is_some() {
                out.push((j - &m_left, k.clone()));
            }
        } else {
            b_mid.push((j.clone(), k.clone()));
        }
    }
    if a_mid.len() != n || b_mid.len() != n {
        return Err(SemilocalError::InvalidMatrix(format!(
            "expected {n} crossing nonzeros, got {} and {}",
            a_mid.len(),
            b_mid.len()
        )));
    }

    let invalid = |e: crate::seaweed::SeaweedError| SemilocalError::InvalidMatrix(e.to_string());
    let (pa, a_maps) = compress_ranks(&a_mid).map_err(invalid)?;
    let (pb, b_maps) = compress_ranks(&b_mid).map_err(invalid)?;
    let pc = mul_dist_fast(&pa, &pb).map_err(invalid)?;
    for (r, c) in pc.nonzeros() {
        let i = &a_maps.rows[r];
        let k = &b_maps.cols[c];
        if small(i, n).is_some() || small(k, n).is_some() {
            out.push((i.clone(), k.clone()));
        }
    }
    out.sort_unstable();
    Ok(PartialScoreMatrix::from_sorted_unchecked(&a.m + &b.m, n, out))
}

/// Static 2-D dominance counter over the nonzeros of a matrix: a segment
/// tree over the row order whose nodes hold sorted column ranks.
#[derive(Debug, Clone)]
pub struct DominanceIndex {
    m: BigUint,
    n: usize,
    rows: Vec<BigInt>,
    cols: Vec<BigInt>,
    leaves: usize,
    nodes: Vec<Vec<u32>>,
}

impl DominanceIndex {
    pub fn build(psm: &PartialScoreMatrix) -> Self {
        // nonzeros are sorted by row already
        let rows: Vec<BigInt> = psm.nonzeros.iter().map(|(i, _)| i.clone()).collect();
        let mut cols: Vec<BigInt> = psm.nonzeros.iter().map(|(_, j)| j.clone()).collect();
        cols.sort_unstable();
        let leaves = rows.len().next_power_of_two();
        let mut nodes = vec![Vec::new(); 2 * leaves];
        for (w, (_, j)) in psm.nonzeros.iter().enumerate() {
            nodes[leaves + w].push(cols.binary_search(j).expect("column present") as u32);
        }
        for v in (1..leaves).rev() {
            let mut merged = Vec::with_capacity(nodes[2 * v].len() + nodes[2 * v + 1].len());
            merged.extend_from_slice(&nodes[2 * v]);
            merged.extend_from_slice(&nodes[2 * v + 1]);
            merged.sort_unstable();
            nodes[v] = merged;
        }
        DominanceIndex { m: psm.m.clone(), n: psm.n, rows, cols, leaves, nodes }
    }

    /// Number of nonzeros `(i + 1/2, j + 1/2)` dominated by the integer point
    /// `(i0, j0)`, i.e. with `i0 < i + 1/2` and `j + 1/2 < j0`.
    pub fn count(&self, i0: &BigInt, j0: &BigInt) -> usize {
        let from = self.rows.partition_point(|r| r < i0);
        let below = self.cols.partition_point(|c| c < j0) as u32;
        let mut lo = from + self.leaves;
        let mut hi = self.rows.len() + self.leaves;
        let mut total = 0;
        while lo < hi {
            if lo & 1 == 1 {
                total += self.nodes[lo].partition_point(|&c| c < below);
                lo += 1;
            }
            if hi & 1 == 1 {
                hi -= 1;
                total += self.nodes[hi].partition_point(|&c| c < below);
            }
            lo >>= 1;
            hi >>= 1;
        }
        total
    }

    pub fn text_len(&self) -> &BigUint {
        &self.m
    }

    pub fn pattern_len(&self) -> usize {
        self.n
    }

    /// Row coordinates of all nonzeros, ascending.
    pub fn row_coords(&self) -> &[BigInt] {
        &self.rows
    }

    /// Column coordinates of all nonzeros, ascending.
    pub fn col_coords(&self) -> &[BigInt] {
        &self.cols
    }

    /// `A(j, j2)`: LCS of the whole text against `P[j..j2]`.
    pub fn string_substring(&self, j: usize, j2: usize) -> Result<usize, SemilocalError> {
        if j > j2 || j2 > self.n {
            return Err(SemilocalError::InvalidQuery(format!("substring {j}..{j2} of a length-{} pattern", self.n)));
        }
        Ok(j2 - j - self.count(&BigInt::from(j), &BigInt::from(j2)))
    }

    /// LCS of the text suffix of length `l` against the pattern prefix of
    /// length `j2`.
    pub fn suffix_prefix(&self, l: &BigUint, j2: usize) -> Result<usize, SemilocalError> {
        if l > &self.m || j2 > self.n {
            return Err(SemilocalError::InvalidQuery(format!("suffix {l} / prefix {j2}")));
        }
        let i0 = BigInt::from(l.clone()) - BigInt::from(self.m.clone());
        Ok(j2 - self.count(&i0, &BigInt::from(j2)))
    }

    /// LCS of the text prefix of length `l` against the pattern suffix
    /// `P[j..]`.
    pub fn prefix_suffix(&self, l: &BigUint, j: usize) -> Result<usize, SemilocalError> {
        if l > &self.m || j > self.n {
            return Err(SemilocalError::InvalidQuery(format!("prefix {l} / suffix from {j}")));
        }
        let j0 = BigInt::from(&self.m + self.n - l);
        Ok(self.n - j - self.count(&BigInt::from(j), &j0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn nz(pairs: &[(i64, i64)]) -> Vec<Nonzero> {
        let mut v: Vec<Nonzero> = pairs.iter().map(|&(i, j)| (i.into(), j.into())).collect();
        v.sort();
        v
    }

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn base_case_examples() {
        // (-1/2, 1/2), (1/2, 5/2), (3/2, 3/2)
        assert_eq!(base_case('a', &chars("ab")).unwrap().nonzeros(), nz(&[(-1, 0), (0, 2), (1, 1)]));
        // (1/2, 1/2), (3/2, 3/2), (-1/2, 5/2)
        assert_eq!(base_case('c', &chars("ab")).unwrap().nonzeros(), nz(&[(0, 0), (1, 1), (-1, 2)]));
        // (-1/2, 1/2), (1/2, 3/2)
        assert_eq!(base_case('a', &chars("a")).unwrap().nonzeros(), nz(&[(-1, 0), (0, 1)]));
        assert_eq!(base_case('a', &[]), Err(SemilocalError::EmptyPattern));
    }

    #[test]
    fn dump_format() {
        assert_eq!(base_case('a', &chars("ab")).unwrap().dump(), "-1,1\n1,5\n3,3\n");
    }

    #[test]
    fn concat_two_letters() {
        let p = chars("ab");
        let c = concat(&base_case('a', &p).unwrap(), &base_case('b', &p).unwrap()).unwrap();
        assert_eq!(*c.text_len(), BigUint::from(2u32));
        let idx = DominanceIndex::build(&c);
        assert_eq!(idx.string_substring(0, 2), Ok(2));
        assert_eq!(idx.string_substring(0, 1), Ok(1));
        assert_eq!(idx.string_substring(1, 2), Ok(1));
        assert!(c.nonzeros().len() >= 2 && c.nonzeros().len() <= 4);
    }

    #[test]
    fn concat_rejects_mismatch() {
        let a = base_case('a', &chars("ab")).unwrap();
        let b = base_case('a', &chars("abc")).unwrap();
        assert_eq!(concat(&a, &b), Err(SemilocalError::PatternMismatch(2, 3)));
    }

    #[test]
    fn index_counts() {
        let idx = DominanceIndex::build(&base_case('a', &chars("ab")).unwrap());
        assert_eq!(idx.count(&0.into(), &2.into()), 1);
        for j0 in -3..6 {
            assert_eq!(idx.count(&2.into(), &j0.into()), 0);
        }
    }

    #[test]
    fn index_matches_scan() {
        // brute force over a handful of random-ish point sets
        for seed in 0..40u64 {
            let n = 1 + (seed as usize % 9);
            let pattern: Vec<char> = (0..n).map(|k| ['a', 'b', 'c'][((seed >> k) as usize + k) % 3]).collect();
            let mut psm = base_case('a', &pattern).unwrap();
            for step in 0..(seed % 5) {
                let c = ['a', 'b', 'c'][(seed + step) as usize % 3];
                psm = concat(&psm, &base_case(c, &pattern).unwrap()).unwrap();
            }
            let idx = DominanceIndex::build(&psm);
            let m = psm.text_len().to_i64().unwrap();
            for i0 in -m - 1..=n as i64 + 1 {
                for j0 in -1..=m + n as i64 + 1 {
                    let scan =
                        psm.nonzeros().iter().filter(|(i, j)| BigInt::from(i0) <= *i && *j < BigInt::from(j0)).count();
                    assert_eq!(idx.count(&i0.into(), &j0.into()), scan);
                }
            }
        }
    }

    #[test]
    fn query_argument_errors() {
        let idx = DominanceIndex::build(&base_case('a', &chars("ab")).unwrap());
        assert!(idx.string_substring(2, 1).is_err());
        assert!(idx.string_substring(0, 3).is_err());
        assert!(idx.suffix_prefix(&BigUint::from(2u32), 1).is_err());
        assert!(idx.prefix_suffix(&BigUint::from(2u32), 0).is_err());
        assert_eq!(idx.suffix_prefix(&BigUint::zero(), 2), Ok(0));
        assert_eq!(idx.prefix_suffix(&BigUint::zero(), 0), Ok(0));
        assert_eq!(idx.string_substring(1, 1), Ok(0));
    }

    #[test]
    fn from_nonzeros_checks() {
        let m = BigUint::one();
        assert!(PartialScoreMatrix::from_nonzeros(m.clone(), 1, nz(&[(-1, 0), (0, 1)])).is_ok());
        // repeated column
        assert!(PartialScoreMatrix::from_nonzeros(m.clone(), 1, nz(&[(-1, 0), (0, 0)])).is_err());
        // below diagonal
        assert!(PartialScoreMatrix::from_nonzeros(m.clone(), 2, nz(&[(1, 0), (0, 1)])).is_err());
        // outside the core
        assert!(PartialScoreMatrix::from_nonzeros(m, 1, nz(&[(-5, 0), (0, 1)])).is_err());
    }
}
