//! Bit-packed linear algebra over the two-element field.
//!
//! A matrix row is a single `u64`, which caps the width at 64 columns and
//! makes row elimination a handful of word XORs. Everything downstream
//! (minimum ranks, congruence certificates, Gram factors) funnels through
//! this module.

use crate::error::{Error, Result};

/// Hard cap on matrix width and height: one machine word per row.
pub const MAX_DIM: usize = 64;

fn col_mask(ncols: usize) -> u64 {
    if ncols >= 64 {
        !0
    } else {
        (1u64 << ncols) - 1
    }
}

/// Dense 0/1 matrix with at most 64 columns, one `u64` word per row.
///
/// Invariant: every stored bit at column index `>= ncols` is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.nrows, self.ncols)?;
        for r in &self.rows {
            for c in 0..self.ncols {
                write!(f, "{}", (r >> c) & 1)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl Gf2Matrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        assert!(nrows <= MAX_DIM && ncols <= MAX_DIM, "matrix too large");
        Gf2Matrix {
            nrows,
            ncols,
            rows: vec![0; nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.rows[i] = 1 << i;
        }
        m
    }

    /// Builds a matrix from raw row words; bits beyond `ncols` are masked off.
    pub fn from_rows(ncols: usize, rows: Vec<u64>) -> Self {
        assert!(rows.len() <= MAX_DIM && ncols <= MAX_DIM, "matrix too large");
        let mask = col_mask(ncols);
        let nrows = rows.len();
        Gf2Matrix {
            nrows,
            ncols,
            rows: rows.into_iter().map(|r| r & mask).collect(),
        }
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zero(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                if f(i, j) {
                    m.rows[i] |= 1 << j;
                }
            }
        }
        m
    }

    /// Parses rows given as 0/1 strings, e.g. `&["01", "10"]`.
    pub fn from_bit_strings(rows: &[&str]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(rows.len(), ncols, |i, j| {
            rows[i].as_bytes()[j] == b'1'
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.nrows && j < self.ncols);
        (self.rows[i] >> j) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.nrows && j < self.ncols);
        if value {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        debug_assert!(i < self.nrows && j < self.ncols);
        self.rows[i] ^= 1 << j;
    }

    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    /// Column `j` gathered into a bit word (bit `i` = entry `(i, j)`).
    pub fn col(&self, j: usize) -> u64 {
        let mut out = 0;
        for (i, r) in self.rows.iter().enumerate() {
            out |= ((r >> j) & 1) << i;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.nrows {
            for j in i + 1..self.ncols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Diagonal of a square matrix as a bit word.
    pub fn diag(&self) -> u64 {
        debug_assert!(self.is_square());
        let mut d = 0;
        for i in 0..self.nrows {
            d |= ((self.rows[i] >> i) & 1) << i;
        }
        d
    }

    /// Copy with the diagonal replaced by the given bit word.
    pub fn with_diag(&self, diag: u64) -> Self {
        debug_assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..m.nrows {
            m.rows[i] &= !(1u64 << i);
            m.rows[i] |= ((diag >> i) & 1) << i;
        }
        m
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self.get(j, i))
    }

    /// Matrix product; panics on dimension mismatch.
    pub fn mul(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.ncols, rhs.nrows, "mul: inner dimensions differ");
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut acc = 0u64;
                let mut bits = r;
                while bits != 0 {
                    let k = bits.trailing_zeros() as usize;
                    acc ^= rhs.rows[k];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        Gf2Matrix {
            nrows: self.nrows,
            ncols: rhs.ncols,
            rows,
        }
    }

    /// Sub-block with the given row and column ranges.
    pub fn submatrix(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> Gf2Matrix {
        assert!(rows.end <= self.nrows && cols.end <= self.ncols);
        let ncols = cols.len();
        let shift = cols.start;
        let mask = col_mask(ncols);
        Gf2Matrix {
            nrows: rows.len(),
            ncols,
            rows: self.rows[rows].iter().map(|r| (r >> shift) & mask).collect(),
        }
    }

    /// Keeps the first `k` columns.
    pub fn keep_cols(&self, k: usize) -> Gf2Matrix {
        self.submatrix(0..self.nrows, 0..k)
    }

    /// Widens to `ncols` columns by appending zero columns.
    pub fn pad_cols(&self, ncols: usize) -> Gf2Matrix {
        assert!(ncols >= self.ncols && ncols <= MAX_DIM);
        Gf2Matrix {
            nrows: self.nrows,
            ncols,
            rows: self.rows.clone(),
        }
    }

    /// Relabels rows and columns of a square matrix: entry `(i, j)` moves to
    /// `(perm[i], perm[j])`.
    pub fn permuted(&self, perm: &[usize]) -> Gf2Matrix {
        debug_assert!(self.is_square() && perm.len() == self.nrows);
        Self::from_fn(self.nrows, self.ncols, |i, j| {
            let pi = perm.iter().position(|&p| p == i).unwrap();
            let pj = perm.iter().position(|&p| p == j).unwrap();
            self.get(pi, pj)
        })
    }

    pub fn row_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                (0..self.ncols)
                    .map(|c| if (r >> c) & 1 == 1 { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    /// Row rank over the two-element field. The matrix itself is untouched.
    pub fn rank(&self) -> usize {
        self.rank_bounded(MAX_DIM).expect("rank cannot exceed MAX_DIM")
    }

    /// Exact rank if it is at most `bound`, `None` once it provably exceeds
    /// the bound. Forward elimination, pivoting on the first set bit of each
    /// column, bailing out as soon as `bound + 1` pivots have been found.
    pub fn rank_bounded(&self, bound: usize) -> Option<usize> {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.ncols {
            let mask = 1u64 << col;
            let Some(p) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for r in rows.iter_mut().skip(rank + 1) {
                if *r & mask != 0 {
                    *r ^= pivot;
                }
            }
            rank += 1;
            if rank > bound {
                return None;
            }
        }
        Some(rank)
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<Gf2Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.nrows;
        // Augmented rows: matrix in the low word half, identity in the high.
        let mut aug: Vec<u128> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, &r)| r as u128 | (1u128 << (64 + i)))
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&i| (aug[i] >> col) & 1 == 1)?;
            aug.swap(col, p);
            let pivot = aug[col];
            for (i, r) in aug.iter_mut().enumerate() {
                if i != col && (*r >> col) & 1 == 1 {
                    *r ^= pivot;
                }
            }
        }
        Some(Gf2Matrix {
            nrows: n,
            ncols: n,
            rows: aug.into_iter().map(|r| (r >> 64) as u64).collect(),
        })
    }
}

/// Assembles the symmetric block matrix `[[A, C], [C^T, B]]`.
pub fn block_compose(a: &Gf2Matrix, b: &Gf2Matrix, c: &Gf2Matrix) -> Result<Gf2Matrix> {
    if !a.is_symmetric() || !b.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = a.nrows();
    let m = b.nrows();
    if c.nrows() != n || c.ncols() != m {
        return Err(Error::Dimension(format!(
            "cross block is {}x{}, expected {}x{}",
            c.nrows(),
            c.ncols(),
            n,
            m
        )));
    }
    if n + m > MAX_DIM {
        return Err(Error::LimitExceeded(format!(
            "block matrix would have {} rows",
            n + m
        )));
    }
    let mut rows = Vec::with_capacity(n + m);
    for i in 0..n {
        rows.push(a.row(i) | (c.row(i) << n));
    }
    for j in 0..m {
        rows.push(c.col(j) | (b.row(j) << n));
    }
    Ok(Gf2Matrix {
        nrows: n + m,
        ncols: n + m,
        rows,
    })
}

/// Whether entries are non-decreasing down each column and non-increasing
/// along each row, i.e. the ones form a staircase in the bottom-left corner.
pub fn is_staircase(c: &Gf2Matrix) -> bool {
    for i in 0..c.nrows() {
        for j in 1..c.ncols() {
            if c.get(i, j) && !c.get(i, j - 1) {
                return false;
            }
        }
    }
    for j in 0..c.ncols() {
        for i in 1..c.nrows() {
            if c.get(i - 1, j) && !c.get(i, j) {
                return false;
            }
        }
    }
    true
}

/// Which of the three structural conclusions hold for a block matrix
/// `[[A, C], [C^T, B]]` with a staircase cross block and `m >= rank(A) + 1`.
/// Several may hold at once; at least one always does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct StaircaseConclusion {
    /// `rank(M) >= rank(A) + 1`.
    pub rank_up: bool,
    /// Two adjacent columns of `B` carry the same entries.
    pub twin_columns: bool,
    /// The final column of `B` is all zero.
    pub zero_last_column: bool,
}

impl StaircaseConclusion {
    pub fn any(&self) -> bool {
        self.rank_up || self.twin_columns || self.zero_last_column
    }
}

/// Evaluates the three-way conclusion for `m` split as an `n + m` block
/// matrix. Errors on a violated precondition, and with
/// [`Error::StaircaseConclusionViolated`] if no conclusion holds (which
/// would falsify the underlying statement; it is never expected).
pub fn staircase_conclusion(m: &Gf2Matrix, n: usize, mcols: usize) -> Result<StaircaseConclusion> {
    if m.nrows() != n + mcols || !m.is_square() {
        return Err(Error::StaircasePrecondition(format!(
            "matrix is {}x{}, expected square of side {}",
            m.nrows(),
            m.ncols(),
            n + mcols
        )));
    }
    if !m.is_symmetric() {
        return Err(Error::StaircasePrecondition("matrix not symmetric".into()));
    }
    let a = m.submatrix(0..n, 0..n);
    let b = m.submatrix(n..n + mcols, n..n + mcols);
    let c = m.submatrix(0..n, n..n + mcols);
    if !is_staircase(&c) {
        return Err(Error::StaircasePrecondition(
            "cross block is not a staircase".into(),
        ));
    }
    let rank_a = a.rank();
    if mcols < rank_a + 1 {
        return Err(Error::StaircasePrecondition(format!(
            "m = {} but rank(A) + 1 = {}",
            mcols,
            rank_a + 1
        )));
    }
    let conclusion = StaircaseConclusion {
        rank_up: m.rank() >= rank_a + 1,
        twin_columns: (1..mcols).any(|j| b.col(j) == b.col(j - 1)),
        zero_last_column: b.col(mcols - 1) == 0,
    };
    if !conclusion.any() {
        return Err(Error::StaircaseConclusionViolated);
    }
    Ok(conclusion)
}

/// Result of symmetric congruence elimination.
///
/// When `alternating` is false, `transform * M * transform^T` equals
/// `I_rank (+) 0` bit-exactly and `transform` is invertible. `alternating`
/// is true only for nonzero symmetric matrices whose diagonal is entirely
/// zero; no diagonal form exists for those.
#[derive(Debug, Clone)]
pub struct CongruenceResult {
    pub transform: Gf2Matrix,
    pub rank: usize,
    pub alternating: bool,
}

/// Working state for congruence elimination: `m` is kept equal to
/// `p * M * p^T` through elementary symmetric operations.
struct Cong {
    m: Vec<u64>,
    p: Vec<u64>,
}

impl Cong {
    fn get(&self, i: usize, j: usize) -> bool {
        (self.m[i] >> j) & 1 == 1
    }

    /// Swaps basis vectors `a` and `b` (row and column swap).
    fn swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.m.swap(a, b);
        for r in self.m.iter_mut() {
            let x = ((*r >> a) ^ (*r >> b)) & 1;
            *r ^= (x << a) | (x << b);
        }
        self.p.swap(a, b);
    }

    /// Adds basis vector `src` into `dst` (row then column update).
    fn add(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        self.m[dst] ^= self.m[src];
        for r in self.m.iter_mut() {
            *r ^= ((*r >> src) & 1) << dst;
        }
        self.p[dst] ^= self.p[src];
    }
}

/// Symmetric congruence elimination over the two-element field.
///
/// For non-alternating input produces an invertible `P` with
/// `P M P^T = I_r (+) 0`, `r = rank(M)`. When a nonzero all-zero-diagonal
/// matrix is reached at the very first stage (the alternating case), no
/// diagonal congruence form exists and the result says so instead.
pub fn congruence_diagonalize(m: &Gf2Matrix) -> Result<CongruenceResult> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.nrows();
    let mut w = Cong {
        m: (0..n).map(|i| m.row(i)).collect(),
        p: (0..n).map(|i| 1u64 << i).collect(),
    };
    let mut t = 0;
    loop {
        if let Some(i) = (t..n).find(|&i| w.get(i, i)) {
            // Regular pivot: bring the diagonal one to the front of the
            // residual and clear its row and column.
            w.swap(t, i);
            for j in t + 1..n {
                if w.get(j, t) {
                    w.add(t, j);
                }
            }
            t += 1;
            continue;
        }
        if (t..n).all(|i| w.m[i] == 0) {
            let transform = Gf2Matrix::from_rows(n, w.p);
            return Ok(CongruenceResult {
                transform,
                rank: t,
                alternating: false,
            });
        }
        if t == 0 {
            // The whole matrix is nonzero with a zero diagonal.
            return Ok(CongruenceResult {
                transform: Gf2Matrix::identity(n),
                rank: m.rank(),
                alternating: true,
            });
        }
        // Zero-diagonal nonzero residual, but an earlier pivot exists.
        // Absorb a hyperbolic pair: with s a finished pivot and m[i][j] = 1
        // in the residual, rebase (e_s, e_i, e_j) to the orthonormal triple
        // (e_s + e_i, e_s + e_j, e_s + e_i + e_j), then scrub the entries
        // this leaves in row s. Afterwards both i and j carry diagonal ones
        // and the main loop resumes.
        let s = t - 1;
        let (i, j) = (t..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .find(|&(i, j)| w.get(i, j))
            .expect("nonzero residual has an off-diagonal one");
        w.add(i, s);
        w.add(j, i);
        w.add(s, i);
        w.add(s, j);
        for k in t..n {
            if k != i && k != j && w.get(k, s) {
                w.add(s, k);
            }
        }
        debug_assert!(w.get(i, i) && w.get(j, j));
    }
}

/// Factor `M = Phi * Phi^T` over the two-element field.
///
/// For non-alternating symmetric `M` the factor has exactly `rank(M)`
/// columns and the product is bit-exact. For alternating `M` no exact
/// rank-width factor exists; the returned factor has `rank(M) + 1` columns
/// and its Gram product agrees with `M` everywhere off the diagonal. It is
/// obtained by flipping one diagonal entry (the first nonzero row) and
/// factorizing that, padding with zero columns if the flip did not raise
/// the rank.
pub fn gram_factorize(m: &Gf2Matrix) -> Result<Gf2Matrix> {
    let cong = congruence_diagonalize(m)?;
    if !cong.alternating {
        let pinv = cong
            .transform
            .inverse()
            .expect("congruence transform is invertible");
        return Ok(pinv.keep_cols(cong.rank));
    }
    let i = (0..m.nrows())
        .find(|&i| m.row(i) != 0)
        .expect("alternating matrix is nonzero");
    let mut shifted = m.clone();
    shifted.flip(i, i);
    let phi = gram_factorize(&shifted)?;
    Ok(phi.pad_cols(cong.rank + 1))
}
