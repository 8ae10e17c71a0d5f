//! Dense linear algebra over GF(2) on bit-packed machine words.
//!
//! Vectors and matrices store one bit per coordinate in `u64` words.
//! Addition is XOR, the coordinate-wise (Schur) product is AND, and whole-row
//! XOR is the elimination primitive. `LinearSystem::solve` returns the full
//! solution set of a consistent system as an [`AffineSolutionSpace`]:
//! a particular solution plus an independent null-space basis.

use std::fmt;

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A fixed-length vector of GF(2) values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters, coordinate 0 first.
    pub fn from_bitstring(s: &str) -> Option<Self> {
        let mut v = BitVector::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return None,
            }
        }
        Some(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    /// Coordinate-wise addition (XOR) of `other` into `self`.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor_assign");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    /// Coordinate-wise (Schur) product.
    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "length mismatch in and");
        BitVector {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Inner product over GF(2): the parity of the overlap.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Number of coordinates equal to 1.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Iterates over the indices of set coordinates, ascending.
    pub fn ones(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Concatenation: `self` occupies coordinates `0..self.len()`,
    /// `tail` the rest.
    pub fn concat(&self, tail: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + tail.len);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        for i in tail.ones() {
            out.set(self.len + i, true);
        }
        out
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_idx * WORD_BITS + bit)
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// A row-major matrix of GF(2) values.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Self {
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            m.set_row(i, r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        self.words[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        let mask = 1u64 << (c % WORD_BITS);
        let w = &mut self.words[r * self.stride + c / WORD_BITS];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    /// Copies row `r` out as a vector of length `cols`.
    pub fn row(&self, r: usize) -> BitVector {
        assert!(r < self.rows, "row {r} out of range");
        BitVector {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn set_row(&mut self, r: usize, v: &BitVector) {
        assert!(r < self.rows, "row {r} out of range");
        assert_eq!(v.len(), self.cols, "row length mismatch");
        let stride = self.stride;
        self.words[r * stride..(r + 1) * stride].copy_from_slice(&v.words);
    }

    /// Parity of the overlap between row `r` and `v`.
    pub fn row_dot(&self, r: usize, v: &BitVector) -> bool {
        assert!(r < self.rows, "row {r} out of range");
        assert_eq!(v.len(), self.cols, "length mismatch in row_dot");
        let mut acc = 0u64;
        for (a, b) in self.row_words(r).iter().zip(&v.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Size of the overlap between row `r` and `v`, as a count.
    pub fn row_and_count(&self, r: usize, v: &BitVector) -> usize {
        assert!(r < self.rows, "row {r} out of range");
        assert_eq!(v.len(), self.cols, "length mismatch in row_and_count");
        self.row_words(r)
            .iter()
            .zip(&v.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.words.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        for w in 0..self.stride {
            let v = self.words[src * self.stride + w];
            self.words[dst * self.stride + w] ^= v;
        }
    }

    /// GF(2) row rank by elimination. `rank + nullity = cols`.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for col in 0..work.cols {
            let Some(pivot) = (rank..work.rows).find(|&r| work.get(r, col)) else {
                continue;
            };
            work.swap_rows(rank, pivot);
            for r in 0..work.rows {
                if r != rank && work.get(r, col) {
                    work.xor_rows(r, rank);
                }
            }
            rank += 1;
            if rank == work.rows {
                break;
            }
        }
        rank
    }

    /// Determinant over GF(2); 1 exactly when the matrix has full rank.
    pub fn determinant(&self) -> bool {
        assert_eq!(self.rows, self.cols, "determinant requires a square matrix");
        self.rank() == self.rows
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// A nonhomogeneous linear system `coeffs · x = rhs` over GF(2).
#[derive(Clone, Debug)]
pub struct LinearSystem {
    coeffs: BitMatrix,
    rhs: BitVector,
}

impl LinearSystem {
    pub fn new(coeffs: BitMatrix, rhs: BitVector) -> Self {
        assert_eq!(
            coeffs.rows(),
            rhs.len(),
            "right-hand side length must equal the row count"
        );
        LinearSystem { coeffs, rhs }
    }

    pub fn coeffs(&self) -> &BitMatrix {
        &self.coeffs
    }

    pub fn rhs(&self) -> &BitVector {
        &self.rhs
    }

    pub fn num_variables(&self) -> usize {
        self.coeffs.cols()
    }

    /// Checks a candidate assignment by re-substitution.
    pub fn is_solution(&self, x: &BitVector) -> bool {
        (0..self.coeffs.rows()).all(|r| self.coeffs.row_dot(r, x) == self.rhs.get(r))
    }

    /// Gauss-Jordan elimination with full solution-space output.
    ///
    /// Returns `None` when the system is inconsistent (a zero row with
    /// right-hand side 1 after elimination). Otherwise the returned space
    /// holds exactly the solution set; its dimension is `cols - rank`.
    /// Pivoting is first-nonzero-in-column order and the particular solution
    /// sets every free variable to 0, so the output is canonical.
    pub fn solve(&self) -> Option<AffineSolutionSpace> {
        let m = self.coeffs.rows();
        let v = self.coeffs.cols();

        // Augmented working copy; the right-hand side lives in column v.
        let mut work = BitMatrix::zeros(m, v + 1);
        for r in 0..m {
            for w in 0..self.coeffs.stride {
                work.words[r * work.stride + w] = self.coeffs.words[r * self.coeffs.stride + w];
            }
            if self.rhs.get(r) {
                work.set(r, v, true);
            }
        }

        let mut pivots: Vec<usize> = Vec::new();
        for col in 0..v {
            let Some(pivot) = (pivots.len()..m).find(|&r| work.get(r, col)) else {
                continue;
            };
            let dst = pivots.len();
            work.swap_rows(dst, pivot);
            for r in 0..m {
                if r != dst && work.get(r, col) {
                    work.xor_rows(r, dst);
                }
            }
            pivots.push(col);
            if pivots.len() == m {
                break;
            }
        }

        for r in pivots.len()..m {
            if work.get(r, v) {
                return None;
            }
        }

        let mut is_pivot = vec![false; v];
        for &c in &pivots {
            is_pivot[c] = true;
        }

        let mut particular = BitVector::zeros(v);
        for (i, &c) in pivots.iter().enumerate() {
            if work.get(i, v) {
                particular.set(c, true);
            }
        }

        // One basis vector per free column: set the free variable to 1 and
        // read the forced pivot values off the reduced rows.
        let mut basis = Vec::with_capacity(v - pivots.len());
        for free in (0..v).filter(|&c| !is_pivot[c]) {
            let mut b = BitVector::zeros(v);
            b.set(free, true);
            for (i, &c) in pivots.iter().enumerate() {
                if work.get(i, free) {
                    b.set(c, true);
                }
            }
            basis.push(b);
        }

        Some(AffineSolutionSpace { particular, basis })
    }
}

/// All solutions of a consistent linear system: `particular + span(basis)`.
#[derive(Clone, Debug)]
pub struct AffineSolutionSpace {
    particular: BitVector,
    basis: Vec<BitVector>,
}

impl AffineSolutionSpace {
    pub fn new(particular: BitVector, basis: Vec<BitVector>) -> Self {
        for b in &basis {
            assert_eq!(b.len(), particular.len(), "basis vector length mismatch");
        }
        AffineSolutionSpace { particular, basis }
    }

    pub fn particular(&self) -> &BitVector {
        &self.particular
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Number of members, `2^dimension`.
    pub fn member_count(&self) -> u128 {
        assert!(self.basis.len() < 128, "solution space too large to count");
        1u128 << self.basis.len()
    }

    /// Yields every member exactly once: member `i` adds the basis vectors
    /// selected by the binary digits of `i`, for `i = 0, 1, ..., 2^d - 1`.
    pub fn enumerate(&self) -> SolutionIter<'_> {
        SolutionIter {
            space: self,
            index: 0,
            total: self.member_count(),
            current: self.particular.clone(),
        }
    }
}

pub struct SolutionIter<'a> {
    space: &'a AffineSolutionSpace,
    index: u128,
    total: u128,
    current: BitVector,
}

impl Iterator for SolutionIter<'_> {
    type Item = BitVector;

    fn next(&mut self) -> Option<BitVector> {
        if self.index == self.total {
            return None;
        }
        let out = self.current.clone();
        // Incremental step to the next binary count: XOR each basis vector
        // whose selector bit flips.
        let flips = self.index ^ (self.index + 1);
        for (j, b) in self.space.basis.iter().enumerate() {
            if flips >> j & 1 == 1 {
                self.current.xor_assign(b);
            }
        }
        self.index += 1;
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.index) as usize;
        (left, Some(left))
    }
}
