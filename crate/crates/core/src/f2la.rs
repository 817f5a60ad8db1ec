//! Dense bit-packed linear algebra over F2.
//!
//! Rows are stored as runs of `u64` words, least significant bit first.
//! Padding bits past `cols` are always zero.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

#[inline]
fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// A vector over F2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    /// Builds a vector with ones at `support`.
    ///
    /// # Panics
    /// If an index is out of range.
    #[must_use]
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.toggle(i);
        }
        v
    }

    /// Builds a vector from 0/1 entries.
    #[must_use]
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        Self { len, words }
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.len
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[must_use]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[must_use]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[must_use]
    pub fn weight(&self) -> usize {
        popcount(&self.words)
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// # Panics
    /// If the lengths differ.
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        xor_into(&mut self.words, &other.words);
    }

    /// Parity of the overlap.
    #[must_use]
    pub fn dot(&self, other: &BitVec) -> bool {
        dot_words(&self.words, &other.words)
    }

    /// Indices of the set bits, ascending.
    #[must_use]
    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    /// Concatenation `self | other`.
    #[must_use]
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }
}

#[inline]
pub(crate) fn dot_words(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones()) & 1 == 1
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Dense matrix over F2 with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BinMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self { rows, cols, stride, data: vec![0; rows * stride] }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from per-row supports (0-based column indices).
    ///
    /// # Panics
    /// If a column index is out of range.
    #[must_use]
    pub fn from_supports<S: AsRef<[usize]>>(cols: usize, supports: &[S]) -> Self {
        let mut m = Self::zeros(supports.len(), cols);
        for (r, s) in supports.iter().enumerate() {
            for &c in s.as_ref() {
                m.toggle(r, c);
            }
        }
        m
    }

    /// Builds a matrix from dense 0/1 rows.
    ///
    /// # Panics
    /// If rows have different lengths.
    #[must_use]
    pub fn from_dense<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_dense_with_cols(cols, rows)
    }

    #[must_use]
    pub fn from_dense_with_cols<R: AsRef<[u8]>>(cols: usize, rows: &[R]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged dense rows");
            for (c, &b) in row.iter().enumerate() {
                if b & 1 == 1 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Stacks vectors of equal length as rows.
    ///
    /// # Panics
    /// If a vector's length differs from `cols`.
    #[must_use]
    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), cols, "row length mismatch");
            m.row_words_mut(r).copy_from_slice(v.words());
        }
        m
    }

    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[must_use]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[must_use]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range for {:?}", self.shape());
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range for {:?}", self.shape());
        let mask = 1u64 << (c % WORD);
        let w = &mut self.data[r * self.stride + c / WORD];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn toggle(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range for {:?}", self.shape());
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    #[must_use]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[must_use]
    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r).to_vec())
    }

    #[must_use]
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        self.row(r).support()
    }

    #[must_use]
    pub fn row_weight(&self, r: usize) -> usize {
        popcount(self.row_words(r))
    }

    #[must_use]
    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                w[c] += 1;
            }
        }
        w
    }

    /// Rows with a one in column `c`, ascending.
    #[must_use]
    pub fn col_support(&self, c: usize) -> Vec<usize> {
        (0..self.rows).filter(|&r| self.get(r, c)).collect()
    }

    #[must_use]
    pub fn max_row_weight(&self) -> usize {
        (0..self.rows).map(|r| self.row_weight(r)).max().unwrap_or(0)
    }

    #[must_use]
    pub fn max_col_weight(&self) -> usize {
        self.col_weights().into_iter().max().unwrap_or(0)
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// XORs row `src` into row `dst`.
    pub fn add_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            self.row_words_mut(dst).fill(0);
            return;
        }
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        xor_into(a, b);
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn push_row(&mut self, v: &BitVec) {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(v.words());
        self.rows += 1;
    }

    #[must_use]
    pub fn select_rows(&self, rows: &[usize]) -> BinMatrix {
        let mut m = BinMatrix::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            m.row_words_mut(i).copy_from_slice(self.row_words(r));
        }
        m
    }

    #[must_use]
    pub fn select_cols(&self, cols: &[usize]) -> BinMatrix {
        let mut m = BinMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (i, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    m.set(r, i, true);
                }
            }
        }
        m
    }

    #[must_use]
    pub fn transpose(&self) -> BinMatrix {
        let mut t = BinMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `self · v` as a vector of length `rows`.
    ///
    /// # Panics
    /// If `v.len() != cols`.
    #[must_use]
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "length mismatch in mul_vec");
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if dot_words(self.row_words(r), v.words()) {
                out.set(r, true);
            }
        }
        out
    }

    pub fn mat_mul(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape { op: "mat_mul", left: self.shape(), right: other.shape() });
        }
        let mut out = BinMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let ones: Vec<usize> = self.row(r).iter_ones().collect();
            let dst = out.row_words_mut(r);
            for k in ones {
                xor_into(dst, other.row_words(k));
            }
        }
        Ok(out)
    }

    pub fn hstack(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.rows != other.rows {
            return Err(Error::Shape { op: "hstack", left: self.shape(), right: other.shape() });
        }
        let mut out = BinMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            out.row_words_mut(r)[..self.stride].copy_from_slice(self.row_words(r));
            for c in other.row(r).iter_ones() {
                out.set(r, self.cols + c, true);
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.cols != other.cols {
            return Err(Error::Shape { op: "vstack", left: self.shape(), right: other.shape() });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(BinMatrix { rows: self.rows + other.rows, cols: self.cols, stride: self.stride, data })
    }

    #[must_use]
    pub fn direct_sum(&self, other: &BinMatrix) -> BinMatrix {
        let top = self.hstack(&BinMatrix::zeros(self.rows, other.cols)).expect("row counts agree by construction");
        let bottom = BinMatrix::zeros(other.rows, self.cols).hstack(other).expect("row counts agree by construction");
        top.vstack(&bottom).expect("column counts agree by construction")
    }

    /// Kronecker product; entry `(ia·b.rows + ib, ja·b.cols + jb)` is `a[ia][ja]·b[ib][jb]`.
    #[must_use]
    pub fn kron(&self, other: &BinMatrix) -> BinMatrix {
        let mut out = BinMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for ia in 0..self.rows {
            for ja in self.row(ia).iter_ones() {
                for ib in 0..other.rows {
                    for jb in other.row(ib).iter_ones() {
                        out.set(ia * other.rows + ib, ja * other.cols + jb, true);
                    }
                }
            }
        }
        out
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        RowBasis::new(self).rank()
    }

    /// Rows form a basis of `{v : self·v = 0}`.
    #[must_use]
    pub fn kernel_basis(&self) -> BinMatrix {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = BinMatrix::zeros(free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            out.set(i, f, true);
            for (r, &p) in pivots.iter().enumerate() {
                if m.get(r, f) {
                    out.set(i, p, true);
                }
            }
        }
        out
    }

    pub fn rowspace_contains(&self, v: &BitVec) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::Length { expected: self.cols, found: v.len() });
        }
        Ok(RowBasis::new(self).contains(v))
    }

    /// Reduced row echelon form in place; returns pivot columns in row order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else { continue };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.add_row(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

/// `dim ker(ker_of) − rank(rs_of)`, after checking `rs(rs_of) ⊆ ker(ker_of)`.
pub fn quotient_dim(ker_of: &BinMatrix, rs_of: &BinMatrix) -> Result<usize> {
    if ker_of.cols() != rs_of.cols() {
        return Err(Error::Shape { op: "quotient_dim", left: ker_of.shape(), right: rs_of.shape() });
    }
    let prod = ker_of.mat_mul(&rs_of.transpose())?;
    if !prod.is_zero() {
        let (r, c) = first_one(&prod).expect("nonzero product has a one");
        return Err(Error::NotContained { ker_row: r, rs_row: c });
    }
    Ok(ker_of.cols() - ker_of.rank() - rs_of.rank())
}

/// Position of the first one in row-major order.
#[must_use]
pub fn first_one(m: &BinMatrix) -> Option<(usize, usize)> {
    (0..m.rows()).find_map(|r| m.row(r).iter_ones().next().map(|c| (r, c)))
}

/// Incremental echelon basis of a row space, used for repeated membership tests
/// and reductions.
#[derive(Clone, Debug)]
pub struct RowBasis {
    cols: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl RowBasis {
    #[must_use]
    pub fn empty(cols: usize) -> Self {
        Self { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    #[must_use]
    pub fn new(m: &BinMatrix) -> Self {
        let mut b = Self::empty(m.cols());
        for r in 0..m.rows() {
            b.insert(&m.row(r));
        }
        b
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    #[must_use]
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    #[must_use]
    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns false if it was already contained.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        let red = self.reduce(v);
        let Some(p) = red.iter_ones().next() else { return false };
        for row in &mut self.rows {
            if row.get(p) {
                row.xor_assign(&red);
            }
        }
        self.rows.push(red);
        self.pivots.push(p);
        true
    }

    #[must_use]
    pub fn to_matrix(&self) -> BinMatrix {
        BinMatrix::from_rows(self.cols, &self.rows)
    }
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}
