//! Permutation matrices over half-integer indices and the (min,+) product of
//! their distribution matrices.
//!
//! A half-integer index `r + 1/2` is stored as the integer rank `r`. For a
//! permutation `P` of size `N`, the distribution matrix is
//!
//! ```text
//! d(i0, j0) = #{ r : r >= i0, P[r] < j0 }      for i0, j0 in 0..=N
//! ```
//!
//! and the product `P_C = P_A (.) P_B` is the unique permutation whose
//! distribution matrix is `d_C(i, k) = min_j d_A(i, j) + d_B(j, k)`.
//! [`mul_dist_oracle`] evaluates this definition directly; [`mul_dist_fast`]
//! computes the same result by divide and conquer in `O(N log N)`.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeaweedError {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("not a permutation: {0}")]
    NotPermutation(String),
    #[error("index ({0}, {1}) out of range for size {2}")]
    OutOfRange(usize, usize, usize),
    #[error("duplicate coordinate in {0} component")]
    DuplicateCoordinate(&'static str),
}

/// A permutation matrix of size `N`, stored row-to-column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeaweedPerm {
    row_to_col: Vec<usize>,
}

impl SeaweedPerm {
    pub fn new(row_to_col: Vec<usize>) -> Result<Self, SeaweedError> {
        let n = row_to_col.len();
        let mut seen = vec![false; n];
        for (r, &c) in row_to_col.iter().enumerate() {
            if c >= n || seen[c] {
                return Err(SeaweedError::NotPermutation(format!("row {r} maps to column {c}")));
            }
            seen[c] = true;
        }
        Ok(SeaweedPerm { row_to_col })
    }

    pub fn identity(n: usize) -> Self {
        SeaweedPerm { row_to_col: (0..n).collect() }
    }

    pub fn reversal(n: usize) -> Self {
        SeaweedPerm { row_to_col: (0..n).rev().collect() }
    }

    pub fn size(&self) -> usize {
        self.row_to_col.len()
    }

    pub fn row_to_col(&self) -> &[usize] {
        &self.row_to_col
    }

    pub fn col_to_row(&self) -> Vec<usize> {
        inverse(&self.row_to_col)
    }

    /// Nonzeros as `(row, col)` rank pairs, in row order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.row_to_col.iter().copied().enumerate()
    }
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (r, &c) in p.iter().enumerate() {
        inv[c] = r;
    }
    inv
}

/// Distribution value `d(i0, j0)` by a linear scan.
pub fn dist_value(perm: &SeaweedPerm, i0: usize, j0: usize) -> Result<usize, SeaweedError> {
    let n = perm.size();
    if i0 > n || j0 > n {
        return Err(SeaweedError::OutOfRange(i0, j0, n));
    }
    Ok(perm.nonzeros().filter(|&(r, c)| r >= i0 && c < j0).count())
}

/// Full `(N+1) x (N+1)` distribution matrix.
pub fn distribution(perm: &SeaweedPerm) -> Vec<Vec<u32>> {
    let n = perm.size();
    let mut d = vec![vec![0u32; n + 1]; n + 1];
    for i0 in (0..n).rev() {
        let c = perm.row_to_col[i0];
        let (upper, lower) = d.split_at_mut(i0 + 1);
        for (j0, (cell, below)) in upper[i0].iter_mut().zip(&lower[0]).enumerate() {
            *cell = below + u32::from(c < j0);
        }
    }
    d
}

/// Inverts [`distribution`] with the 2x2 density stencil. Fails unless the
/// density is a permutation matrix.
pub fn density(d: &[Vec<u32>]) -> Result<SeaweedPerm, SeaweedError> {
    let n = d.len().saturating_sub(1);
    let mut row_to_col = vec![usize::MAX; n];
    for (i, slot) in row_to_col.iter_mut().enumerate() {
        for j in 0..n {
            let v = i64::from(d[i][j + 1]) - i64::from(d[i][j]) - i64::from(d[i + 1][j + 1]) + i64::from(d[i + 1][j]);
            match v {
                0 => {}
                1 if *slot == usize::MAX => *slot = j,
                _ => return Err(SeaweedError::NotPermutation(format!("density {v} at ({i}, {j})"))),
            }
        }
        if *slot == usize::MAX {
            return Err(SeaweedError::NotPermutation(format!("empty row {i}")));
        }
    }
    SeaweedPerm::new(row_to_col)
}

/// Reference product: materializes both distribution matrices and takes the
/// (min,+) product cell by cell. `O(N^3)` time, `O(N^2)` memory.
pub fn mul_dist_oracle(a: &SeaweedPerm, b: &SeaweedPerm) -> Result<SeaweedPerm, SeaweedError> {
    if a.size() != b.size() {
        return Err(SeaweedError::SizeMismatch(a.size(), b.size()));
    }
    let n = a.size();
    let da = distribution(a);
    let db = distribution(b);
    let mut dc = vec![vec![0u32; n + 1]; n + 1];
    for i in 0..=n {
        for k in 0..=n {
            dc[i][k] = (0..=n).map(|j| da[i][j] + db[j][k]).min().unwrap();
        }
    }
    density(&dc)
}

/// Fast product, equal to [`mul_dist_oracle`].
pub fn mul_dist_fast(a: &SeaweedPerm, b: &SeaweedPerm) -> Result<SeaweedPerm, SeaweedError> {
    if a.size() != b.size() {
        return Err(SeaweedError::SizeMismatch(a.size(), b.size()));
    }
    Ok(SeaweedPerm { row_to_col: multiply(&a.row_to_col, &b.row_to_col) })
}

// Divide and conquer on the shared middle index. Middle ranks [0, h) and
// [h, n) give two half-size subproblems whose products C_lo, C_hi together
// cover every row and column once. For a corner (i0, k0) the true value is
// min(L, R) where
//
//   L = d_lo(i0, k0) + #{hi: col < k0}     (best middle index <= h)
//   R = d_hi(i0, k0) + #{lo: row >= i0}    (best middle index >= h)
//
// and L - R = #{hi: row < i0, col < k0} - #{lo: row >= i0, col >= k0} is
// nondecreasing in both coordinates. Cells wholly on the L side keep their
// C_lo nonzero, cells wholly on the R side keep C_hi; the O(n) cells the
// boundary staircase passes through are evaluated with the stencil.
fn multiply(a: &[usize], b: &[usize]) -> Vec<usize> {
    let n = a.len();
    if n <= 1 {
        return a.to_vec();
    }
    let h = n / 2;

    let mut a_lo_rows = Vec::with_capacity(h);
    let mut a_lo = Vec::with_capacity(h);
    let mut a_hi_rows = Vec::with_capacity(n - h);
    let mut a_hi = Vec::with_capacity(n - h);
    for (i, &j) in a.iter().enumerate() {
        if j < h {
            a_lo_rows.push(i);
            a_lo.push(j);
        } else {
            a_hi_rows.push(i);
            a_hi.push(j - h);
        }
    }

    let mut col_is_lo = vec![false; n];
    for &k in &b[..h] {
        col_is_lo[k] = true;
    }
    let mut lo_cols = Vec::with_capacity(h);
    let mut hi_cols = Vec::with_capacity(n - h);
    let mut col_rank = vec![0; n];
    for k in 0..n {
        if col_is_lo[k] {
            col_rank[k] = lo_cols.len();
            lo_cols.push(k);
        } else {
            col_rank[k] = hi_cols.len();
            hi_cols.push(k);
        }
    }
    let b_lo: Vec<usize> = b[..h].iter().map(|&k| col_rank[k]).collect();
    let b_hi: Vec<usize> = b[h..].iter().map(|&k| col_rank[k]).collect();
    drop(col_rank);

    let c_lo = multiply(&a_lo, &b_lo);
    let c_hi = multiply(&a_hi, &b_hi);

    let mut row_to_col = vec![0; n];
    let mut hi_row = vec![false; n];
    for (r, &c) in c_lo.iter().enumerate() {
        row_to_col[a_lo_rows[r]] = lo_cols[c];
    }
    for (r, &c) in c_hi.iter().enumerate() {
        row_to_col[a_hi_rows[r]] = hi_cols[c];
        hi_row[a_hi_rows[r]] = true;
    }
    merge(&row_to_col, &hi_row)
}

/// Corner counters for the merge, movable one step at a time.
struct Cursor<'a> {
    row_to_col: &'a [usize],
    col_to_row: &'a [usize],
    hi_row: &'a [bool],
    i0: usize,
    k0: usize,
    lo_ge_lt: i64,
    hi_ge_lt: i64,
    lo_rows_ge: i64,
    hi_cols_lt: i64,
}

impl<'a> Cursor<'a> {
    fn new(row_to_col: &'a [usize], col_to_row: &'a [usize], hi_row: &'a [bool]) -> Self {
        Cursor {
            row_to_col,
            col_to_row,
            hi_row,
            i0: row_to_col.len(),
            k0: 0,
            lo_ge_lt: 0,
            hi_ge_lt: 0,
            lo_rows_ge: 0,
            hi_cols_lt: 0,
        }
    }

    fn lo_side(&self) -> i64 {
        self.lo_ge_lt + self.hi_cols_lt
    }

    fn hi_side(&self) -> i64 {
        self.hi_ge_lt + self.lo_rows_ge
    }

    /// L - R at the current corner.
    fn delta(&self) -> i64 {
        self.lo_side() - self.hi_side()
    }

    fn value(&self) -> i64 {
        self.lo_side().min(self.hi_side())
    }

    fn row_step(&mut self, r: usize, sign: i64) {
        let lt = self.row_to_col[r] < self.k0;
        if self.hi_row[r] {
            if lt {
                self.hi_ge_lt += sign;
            }
        } else {
            self.lo_rows_ge += sign;
            if lt {
                self.lo_ge_lt += sign;
            }
        }
    }

    fn col_step(&mut self, c: usize, sign: i64) {
        let r = self.col_to_row[c];
        let ge = r >= self.i0;
        if self.hi_row[r] {
            self.hi_cols_lt += sign;
            if ge {
                self.hi_ge_lt += sign;
            }
        } else if ge {
            self.lo_ge_lt += sign;
        }
    }

    fn up(&mut self) {
        self.i0 -= 1;
        self.row_step(self.i0, 1);
    }

    fn down(&mut self) {
        self.row_step(self.i0, -1);
        self.i0 += 1;
    }

    fn right(&mut self) {
        self.col_step(self.k0, 1);
        self.k0 += 1;
    }

    fn move_to_row(&mut self, i0: usize) {
        while self.i0 > i0 {
            self.up();
        }
        while self.i0 < i0 {
            self.down();
        }
    }
}

fn merge(row_to_col: &[usize], hi_row: &[bool]) -> Vec<usize> {
    let n = row_to_col.len();
    let col_to_row = inverse(row_to_col);

    // boundary[k0] = least i0 with L >= R at (i0, k0); nonincreasing in k0.
    let mut boundary = vec![0usize; n + 1];
    let mut cur = Cursor::new(row_to_col, &col_to_row, hi_row);
    for (k0, slot) in boundary.iter_mut().enumerate() {
        while cur.i0 > 0 {
            cur.up();
            if cur.delta() < 0 {
                cur.down();
                break;
            }
        }
        *slot = cur.i0;
        if k0 < n {
            cur.right();
        }
    }

    let mut out = vec![usize::MAX; n];
    for r in 0..n {
        let c = row_to_col[r];
        let keep = if hi_row[r] { r >= boundary[c] } else { r + 1 < boundary[c + 1] };
        if keep {
            out[r] = c;
        }
    }

    // Mixed cells in column k: rows max(boundary[k+1], 1) - 1 ..= boundary[k] - 1.
    let mut cur = Cursor::new(row_to_col, &col_to_row, hi_row);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for k in 0..n {
        let top = boundary[k];
        if top == 0 {
            break;
        }
        let bottom = boundary[k + 1].max(1) - 1;
        // corners i0 in bottom..=top at k0 = k and k0 = k + 1
        left.clear();
        right.clear();
        cur.move_to_row(top);
        for i0 in (bottom..=top).rev() {
            cur.move_to_row(i0);
            left.push(cur.value());
        }
        cur.right();
        for i0 in bottom..=top {
            cur.move_to_row(i0);
            right.push(cur.value());
        }
        left.reverse();
        for x in 0..top - bottom {
            let dens = right[x] - left[x] - right[x + 1] + left[x + 1];
            debug_assert!(dens == 0 || dens == 1, "density {dens}");
            if dens == 1 {
                out[bottom + x] = k;
            }
        }
    }
    debug_assert!(out.iter().all(|&c| c != usize::MAX));
    out
}

/// Coordinate maps produced by [`compress_ranks`]: sorted distinct original
/// row and column coordinates, indexed by rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankMaps<T> {
    pub rows: Vec<T>,
    pub cols: Vec<T>,
}

/// Maps points with pairwise distinct rows and pairwise distinct columns to a
/// rank-space permutation, preserving order in both coordinates.
pub fn compress_ranks<T: Ord + Clone>(points: &[(T, T)]) -> Result<(SeaweedPerm, RankMaps<T>), SeaweedError> {
    let mut rows: Vec<T> = points.iter().map(|p| p.0.clone()).collect();
    let mut cols: Vec<T> = points.iter().map(|p| p.1.clone()).collect();
    rows.sort_unstable();
    cols.sort_unstable();
    if rows.windows(2).any(|w| w[0] == w[1]) {
        return Err(SeaweedError::DuplicateCoordinate("row"));
    }
    if cols.windows(2).any(|w| w[0] == w[1]) {
        return Err(SeaweedError::DuplicateCoordinate("column"));
    }
    let mut row_to_col = vec![0; points.len()];
    for (r, c) in points {
        let ri = rows.binary_search(r).unwrap();
        row_to_col[ri] = cols.binary_search(c).unwrap();
    }
    Ok((SeaweedPerm { row_to_col }, RankMaps { rows, cols }))
}
