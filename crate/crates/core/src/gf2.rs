//! Dense linear algebra over GF(2).
//!
//! Bits are packed 64 to a word, least significant bit first. Matrices are
//! stored row-major with every row padded to a whole number of words, so row
//! operations are word-parallel XORs. None of the public operations mutate
//! their inputs; elimination always runs on a copy.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of basis vectors accepted by [`enumerate_codewords`].
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = Self { len, words };
        v.clear_padding();
        v
    }

    fn clear_padding(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
        xor_into(&mut self.words, &other.words);
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(wi * WORD_BITS + bit)
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, ")")
    }
}

/// A dense `rows x cols` matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix whose rows are the given vectors.
    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length mismatch");
            m.row_mut(i).copy_from_slice(r.words());
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Self {
        Self::from_rows(rows, columns).transpose()
    }

    pub fn from_dense(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged dense matrix");
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b & 1 == 1);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    /// XORs row `src` into row `dst`.
    fn add_row(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        xor_into(b, a);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn row_vector(&self, r: usize) -> BitVector {
        BitVector::from_words(self.cols, self.row(r).to_vec())
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    /// Columns as vectors, computed through one transpose.
    pub fn columns(&self) -> Vec<BitVector> {
        let t = self.transpose();
        (0..t.rows).map(|r| t.row_vector(r)).collect()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            for (wi, &w) in row.iter().enumerate() {
                let mut word = w;
                while word != 0 {
                    let c = wi * WORD_BITS + word.trailing_zeros() as usize;
                    word &= word - 1;
                    t.data[c * t.stride + r / WORD_BITS] |= 1u64 << (r % WORD_BITS);
                }
            }
        }
        t
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let ones: u32 = self
                .row(r)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if ones & 1 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for (wi, &w) in self.row(r).iter().enumerate() {
                let mut word = w;
                while word != 0 {
                    let k = wi * WORD_BITS + word.trailing_zeros() as usize;
                    word &= word - 1;
                    let src = other.row(k).to_vec();
                    xor_into(out.row_mut(r), &src);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Reduces `self` in place to reduced row echelon form and returns the
    /// pivot column of each nonzero row, in row order. When `transform` is
    /// given, the same row operations are applied to it.
    fn reduce(&mut self, mut transform: Option<&mut BitMatrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(p, next);
            if let Some(t) = transform.as_deref_mut() {
                t.swap_rows(p, next);
            }
            for r in 0..self.rows {
                if r != next && self.get(r, c) {
                    self.add_row(next, r);
                    if let Some(t) = transform.as_deref_mut() {
                        t.add_row(next, r);
                    }
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{}", u8::from(self.get(r, c)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// GF(2) rank.
pub fn rank(m: &BitMatrix) -> usize {
    // Eliminate along the shorter side.
    if m.rows <= m.cols {
        m.clone().reduce(None).len()
    } else {
        m.transpose().reduce(None).len()
    }
}

/// True iff `m^T m = 0`, i.e. every pair of columns (a column with itself
/// included) overlaps on an even number of rows.
pub fn is_self_orthogonal(m: &BitMatrix) -> bool {
    let t = m.transpose();
    (0..t.rows).all(|i| {
        (i..t.rows).all(|j| {
            let ones: u32 = t.row(i).iter().zip(t.row(j)).map(|(a, b)| (a & b).count_ones()).sum();
            ones & 1 == 0
        })
    })
}

/// Returns the lowest-index set of columns of `m` that spans its column space,
/// as a `m.rows() x rank` matrix.
pub fn column_space_basis(m: &BitMatrix) -> BitMatrix {
    let columns = m.columns();
    let mut reduced: Vec<(usize, BitVector)> = Vec::new();
    let mut chosen = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut v = col.clone();
        for (pivot, b) in &reduced {
            if v.get(*pivot) {
                v.xor_assign(b);
            }
        }
        let pivot = v.iter_ones().next();
        if let Some(pivot) = pivot {
            reduced.push((pivot, v));
            chosen.push(j);
        }
    }
    let picked: Vec<BitVector> = chosen.into_iter().map(|j| columns[j].clone()).collect();
    BitMatrix::from_columns(m.rows, &picked)
}

/// Returns a basis of the right kernel `{v : m v = 0}` as the columns of a
/// `m.cols() x (m.cols() - rank)` matrix. Applied to `B^T` this is a basis of
/// the orthogonal complement of the column space of `B`.
pub fn nullspace_basis(m: &BitMatrix) -> BitMatrix {
    let mut r = m.clone();
    let pivots = r.reduce(None);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let basis: Vec<BitVector> = (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = BitVector::unit(m.cols, free);
            for (row, &p) in pivots.iter().enumerate() {
                if r.get(row, free) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect();
    BitMatrix::from_columns(m.cols, &basis)
}

/// Reduced row echelon basis of the row space of `m`: the nonzero rows of
/// the reduced matrix, each paired with its pivot column. Row `i` is the only
/// basis row with a one in column `pivots[i]`.
pub fn reduced_row_basis(m: &BitMatrix) -> (Vec<BitVector>, Vec<usize>) {
    let mut r = m.clone();
    let pivots = r.reduce(None);
    let rows = (0..pivots.len()).map(|i| r.row_vector(i)).collect();
    (rows, pivots)
}

/// Returns some `t` with `m t = x` if `x` lies in the column space of `m`.
pub fn solve_membership(m: &BitMatrix, x: &BitVector) -> Option<BitVector> {
    ColumnSolver::new(m).solve(x)
}

/// Precomputed elimination of a matrix for repeated `m t = x` solves.
#[derive(Clone, Debug)]
pub struct ColumnSolver {
    cols: usize,
    rows: usize,
    /// `transform * m` is in reduced row echelon form.
    transform: BitMatrix,
    pivots: Vec<usize>,
}

impl ColumnSolver {
    pub fn new(m: &BitMatrix) -> Self {
        let mut reduced = m.clone();
        let mut transform = BitMatrix::identity(m.rows);
        let pivots = reduced.reduce(Some(&mut transform));
        Self {
            cols: m.cols,
            rows: m.rows,
            transform,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// True iff `x` lies in the column space.
    pub fn contains(&self, x: &BitVector) -> bool {
        assert_eq!(x.len(), self.rows, "target length must equal row count");
        let y = self.transform.mul_vec(x);
        (self.pivots.len()..self.rows).all(|r| !y.get(r))
    }

    pub fn solve(&self, x: &BitVector) -> Option<BitVector> {
        assert_eq!(x.len(), self.rows, "target length must equal row count");
        let y = self.transform.mul_vec(x);
        if (self.pivots.len()..self.rows).any(|r| y.get(r)) {
            return None;
        }
        let mut t = BitVector::zeros(self.cols);
        for (row, &p) in self.pivots.iter().enumerate() {
            if y.get(row) {
                t.set(p, true);
            }
        }
        Some(t)
    }
}

/// Indices of basis vectors toggled along a reflected binary Gray code over
/// `k` bits: the i-th step (i = 1 .. 2^k - 1) toggles bit `trailing_zeros(i)`.
#[derive(Clone, Debug)]
pub struct GraySteps {
    next: u64,
    end: u64,
}

impl GraySteps {
    pub fn new(k: usize) -> Self {
        assert!(k < 64, "gray code width {k} too large");
        Self {
            next: 1,
            end: 1u64 << k,
        }
    }
}

impl Iterator for GraySteps {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.next >= self.end {
            return None;
        }
        let bit = self.next.trailing_zeros() as usize;
        self.next += 1;
        Some(bit)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

/// All codewords of the code spanned by the columns of a basis matrix.
///
/// The first item is the zero word; each later item differs from the previous
/// one by a single basis column, following [`GraySteps`].
#[derive(Clone, Debug)]
pub struct Codewords {
    basis: Vec<BitVector>,
    current: BitVector,
    steps: GraySteps,
    started: bool,
}

impl Codewords {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn count(&self) -> u64 {
        1u64 << self.basis.len()
    }
}

impl Iterator for Codewords {
    type Item = BitVector;

    fn next(&mut self) -> Option<BitVector> {
        if !self.started {
            self.started = true;
            return Some(self.current.clone());
        }
        let flip = self.steps.next()?;
        self.current.xor_assign(&self.basis[flip]);
        Some(self.current.clone())
    }
}

/// Enumerates the `2^k` codewords spanned by the `k` columns of `basis`, which
/// are assumed independent. Fails when `k > cap`.
pub fn enumerate_codewords(basis: &BitMatrix, cap: usize) -> Result<Codewords> {
    let k = basis.cols();
    if k > cap {
        return Err(Error::CapExceeded {
            what: "codeword enumeration basis size",
            required: k,
            cap,
        });
    }
    Ok(Codewords {
        basis: basis.columns(),
        current: BitVector::zeros(basis.rows()),
        steps: GraySteps::new(k),
        started: false,
    })
}
