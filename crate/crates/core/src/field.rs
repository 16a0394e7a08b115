//! Exact linear algebra over prime fields `GF(p)`, `p < 2^31`.
//!
//! Elements are stored as `u32` values in `[0, p)`. Dense elimination is the
//! reference path for every rank in the crate; [`SparseMatrix`] is only a
//! storage format that splits into independent blocks before the dense
//! elimination runs.

use std::fmt;

use crate::error::{Error, Result};

/// Default modulus; a prime just below `2^15`.
pub const DEFAULT_PRIME: u32 = 31991;

/// A prime modulus together with the arithmetic of `Z/p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldContext {
    p: u32,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

impl Default for FieldContext {
    fn default() -> Self {
        FieldContext { p: DEFAULT_PRIME }
    }
}

/// Deterministic trial division; moduli are below `2^31` so this is at most
/// ~23k odd divisors.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldContext {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..1 << 31).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldContext { p: p as u32 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        let p = self.p as u64;
        (if s >= p { s - p } else { s }) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.p as i64, (a % self.p) as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u32 {
        (a % self.p as u64) as u32
    }

    #[inline]
    pub fn from_i64(&self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }
}

/// Dense row-major matrix over `GF(p)`.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixGF {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
    ctx: FieldContext,
}

impl fmt::Debug for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "MatrixGF {}x{} over {:?}",
            self.rows, self.cols, self.ctx
        )?;
        for r in 0..self.rows.min(16) {
            writeln!(f, "  {:?}", &self.row(r)[..self.cols.min(16)])?;
        }
        Ok(())
    }
}

impl MatrixGF {
    pub fn zeros(rows: usize, cols: usize, ctx: FieldContext) -> Self {
        MatrixGF {
            rows,
            cols,
            data: vec![0; rows * cols],
            ctx,
        }
    }

    pub fn identity(n: usize, ctx: FieldContext) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows of signed integers, reducing them mod `p`.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R], ctx: FieldContext) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&v| ctx.from_i64(v)));
        }
        MatrixGF {
            rows: rows.len(),
            cols,
            data,
            ctx,
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        ctx: FieldContext,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c) % ctx.p());
            }
        }
        MatrixGF {
            rows,
            cols,
            data,
            ctx,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> FieldContext {
        self.ctx
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.ctx.p());
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> MatrixGF {
        MatrixGF::from_fn(self.cols, self.rows, self.ctx, |r, c| self.get(c, r))
    }

    pub fn mul(&self, other: &MatrixGF) -> MatrixGF {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        assert_eq!(self.ctx, other.ctx, "field mismatch in product");
        let p = self.ctx.p() as u64;
        let mut out = MatrixGF::zeros(self.rows, other.cols, self.ctx);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (slot, &b) in acc.iter_mut().zip(other.row(k)) {
                    *slot = (*slot + a as u64 * b as u64) % p;
                }
            }
            for (c, &v) in acc.iter().enumerate() {
                out.data[r * other.cols + c] = v as u32;
            }
        }
        out
    }

    pub fn scale(&self, s: u32) -> MatrixGF {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v = self.ctx.mul(*v, s));
        out
    }

    /// Reduced row-echelon form with left-to-right pivot columns; in each
    /// column the lowest-index remaining row with a nonzero entry becomes
    /// the pivot row.
    pub fn rref(&self) -> (MatrixGF, Vec<usize>) {
        let ctx = self.ctx;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            m.swap_rows(pr, lead);
            let inv = ctx.inv(m.get(lead, c)).expect("pivot is nonzero");
            for v in &mut m.data[lead * m.cols + c..(lead + 1) * m.cols] {
                *v = ctx.mul(*v, inv);
            }
            let pivot_row: Vec<u32> = m.row(lead)[c..].to_vec();
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let f = m.get(r, c);
                if f == 0 {
                    continue;
                }
                let nf = ctx.neg(f);
                let row = &mut m.data[r * m.cols + c..(r + 1) * m.cols];
                for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                    *x = ((*x as u64 + nf as u64 * pv as u64) % ctx.p() as u64) as u32;
                }
            }
            pivots.push(c);
            lead += 1;
        }
        debug_assert!(pivots.len() + (m.cols - pivots.len()) == m.cols);
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    pub fn rank(&self) -> usize {
        let rank = echelon_rank(
            self.data.iter().map(|&v| v as u64).collect(),
            self.rows,
            self.cols,
            self.ctx,
        );
        assert!(rank <= self.rows.min(self.cols));
        rank
    }

    pub fn kernel_dim(&self) -> usize {
        let k = self.cols - self.rank();
        debug_assert!(k <= self.cols);
        k
    }

    /// Basis of the right kernel, one vector per free column of the RREF.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = self.ctx.neg(r.get(row, free));
            }
            basis.push(v);
        }
        assert_eq!(basis.len() + pivots.len(), self.cols, "rank-nullity");
        basis
    }
}

/// Forward elimination on a row-major copy. Rows are kept as `u64` and
/// reduced lazily: between two reductions a row can absorb `budget` updates
/// of size at most `(p-1)^2` without overflowing.
fn echelon_rank(mut a: Vec<u64>, rows: usize, cols: usize, ctx: FieldContext) -> usize {
    if rows == 0 || cols == 0 {
        return 0;
    }
    let p = ctx.p() as u64;
    let step = (p - 1) * (p - 1);
    let budget = ((u64::MAX - (p - 1)) / step.max(1)).max(1);
    let mut pending = vec![0u64; rows];
    let mut pivot = vec![0u32; cols];
    let mut rank = 0usize;

    for c in 0..cols {
        if rank == rows {
            break;
        }
        let mut found = None;
        for r in rank..rows {
            let v = a[r * cols + c] % p;
            a[r * cols + c] = v;
            if v != 0 {
                found = Some(r);
                break;
            }
        }
        let Some(pr) = found else { continue };
        if pr != rank {
            let (head, tail) = a.split_at_mut(pr * cols);
            head[rank * cols..(rank + 1) * cols].swap_with_slice(&mut tail[..cols]);
            pending.swap(pr, rank);
        }
        let inv = ctx
            .inv(a[rank * cols + c] as u32)
            .expect("pivot is nonzero") as u64;
        for j in c..cols {
            pivot[j] = ((a[rank * cols + j] % p) * inv % p) as u32;
        }
        let piv = &pivot[c..cols];
        for r in rank + 1..rows {
            let x = a[r * cols + c] % p;
            if x == 0 {
                a[r * cols + c] = 0;
                continue;
            }
            let row = &mut a[r * cols + c..(r + 1) * cols];
            if pending[r] >= budget {
                row.iter_mut().for_each(|v| *v %= p);
                pending[r] = 0;
            }
            let f = p - x;
            axpy(row, f, piv);
            pending[r] += 1;
        }
        rank += 1;
    }
    rank
}

#[inline]
fn axpy(row: &mut [u64], f: u64, piv: &[u32]) {
    let f = f as u32 as u64;
    for (x, &pv) in row.iter_mut().zip(piv) {
        *x = x.wrapping_add(f.wrapping_mul(pv as u64));
    }
}

/// Column-compressed sparse matrix over `GF(p)`. Entries inside a column are
/// sorted by row and nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    vals: Vec<u32>,
    ctx: FieldContext,
}

impl SparseMatrix {
    /// Builds from per-column entry lists; duplicate rows are summed and
    /// zeros dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, u32)>>, ctx: FieldContext) -> Self {
        let cols = columns.len();
        let mut col_ptr = Vec::with_capacity(cols + 1);
        let mut row_idx = Vec::new();
        let mut vals = Vec::new();
        col_ptr.push(0);
        for mut col in columns {
            col.sort_unstable_by_key(|&(r, _)| r);
            let mut last: Option<usize> = None;
            for (r, v) in col {
                assert!(r < rows, "row index {r} out of range {rows}");
                if last == Some(r) {
                    let slot = vals.last_mut().unwrap();
                    *slot = ctx.add(*slot, v % ctx.p());
                } else {
                    row_idx.push(r);
                    vals.push(v % ctx.p());
                    last = Some(r);
                }
            }
            // drop cancelled entries
            let start = *col_ptr.last().unwrap();
            let mut w = start;
            for k in start..vals.len() {
                if vals[k] != 0 {
                    vals[w] = vals[k];
                    row_idx[w] = row_idx[k];
                    w += 1;
                }
            }
            vals.truncate(w);
            row_idx.truncate(w);
            col_ptr.push(w);
        }
        SparseMatrix {
            rows,
            cols,
            col_ptr,
            row_idx,
            vals,
            ctx,
        }
    }

    pub fn from_dense(m: &MatrixGF) -> Self {
        let columns = (0..m.cols())
            .map(|c| {
                (0..m.rows())
                    .filter_map(|r| {
                        let v = m.get(r, c);
                        (v != 0).then_some((r, v))
                    })
                    .collect()
            })
            .collect();
        SparseMatrix::from_columns(m.rows(), columns, m.ctx())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> FieldContext {
        self.ctx
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        let range = self.col_ptr[c]..self.col_ptr[c + 1];
        self.row_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.vals[range].iter().copied())
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn to_dense(&self) -> MatrixGF {
        let mut m = MatrixGF::zeros(self.rows, self.cols, self.ctx);
        for c in 0..self.cols {
            for (r, v) in self.column(c) {
                m.set(r, c, v);
            }
        }
        m
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in sparse product");
        assert_eq!(self.ctx, rhs.ctx, "field mismatch in sparse product");
        let p = self.ctx.p() as u64;
        let mut acc = vec![0u64; self.rows];
        let mut seen = vec![false; self.rows];
        let mut touched = Vec::new();
        let mut columns = Vec::with_capacity(rhs.cols);
        for c in 0..rhs.cols {
            for (k, b) in rhs.column(c) {
                for (r, a) in self.column(k) {
                    if !seen[r] {
                        seen[r] = true;
                        touched.push(r);
                    }
                    acc[r] = (acc[r] + a as u64 * b as u64) % p;
                }
            }
            let mut col = Vec::with_capacity(touched.len());
            for &r in &touched {
                if acc[r] != 0 {
                    col.push((r, acc[r] as u32));
                }
                acc[r] = 0;
                seen[r] = false;
            }
            touched.clear();
            columns.push(col);
        }
        SparseMatrix::from_columns(self.rows, columns, self.ctx)
    }

    /// Rank by dense elimination on each connected block of the bipartite
    /// row/column incidence graph.
    pub fn rank(&self) -> usize {
        self.blocks().iter().map(|b| b.rank()).sum()
    }

    /// Independent diagonal blocks (after row/column permutation). Blocks
    /// with no nonzero entries are omitted.
    pub fn blocks(&self) -> Vec<MatrixGF> {
        let n = self.rows + self.cols;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for c in 0..self.cols {
            for (r, _) in self.column(c) {
                let a = find(&mut parent, r);
                let b = find(&mut parent, self.rows + c);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut block_of_root = vec![usize::MAX; n];
        let mut block_rows: Vec<Vec<usize>> = Vec::new();
        let mut block_cols: Vec<Vec<usize>> = Vec::new();
        let mut local = vec![0usize; n];
        for c in 0..self.cols {
            if self.col_ptr[c] == self.col_ptr[c + 1] {
                continue;
            }
            let root = find(&mut parent, self.rows + c);
            if block_of_root[root] == usize::MAX {
                block_of_root[root] = block_rows.len();
                block_rows.push(Vec::new());
                block_cols.push(Vec::new());
            }
            let b = block_of_root[root];
            local[self.rows + c] = block_cols[b].len();
            block_cols[b].push(c);
        }
        for r in 0..self.rows {
            let root = find(&mut parent, r);
            let b = block_of_root[root];
            if b != usize::MAX {
                local[r] = block_rows[b].len();
                block_rows[b].push(r);
            }
        }
        block_rows
            .iter()
            .zip(&block_cols)
            .map(|(rs, cs)| {
                let mut m = MatrixGF::zeros(rs.len(), cs.len(), self.ctx);
                for (lc, &c) in cs.iter().enumerate() {
                    for (r, v) in self.column(c) {
                        m.set(local[r], lc, v);
                    }
                }
                m
            })
            .collect()
    }
}
