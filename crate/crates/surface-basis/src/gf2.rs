//! Packed bit-vector and bit-matrix arithmetic over GF(2).
//!
//! Vectors are stored as little-endian `u64` words; all operations are
//! deterministic. The matrix inverse uses Gaussian elimination with
//! pivoting on the first set bit, which is all the support-vector update
//! `A = Y · X⁻¹` needs at the sizes this crate works with.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    /// The matrix handed to [`BitMatrix::inverse`] has no inverse. In the
    /// support-vector recursion this signals a violated invariant upstream:
    /// the X block is provably invertible when the selected cycles are.
    #[error("matrix is singular over GF(2)")]
    Singular,
}

/// A fixed-length vector over GF(2), packed 64 bits per word.
///
/// Trailing pad bits in the last word are kept at zero so that equality,
/// hashing, and `is_zero` can work word-wise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    /// The unit vector with only `bit` set.
    pub fn unit(len: usize, bit: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(bit, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the first set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    /// GF(2) dot product: the parity of the bitwise AND.
    ///
    /// Panics on length mismatch.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// First `n` bits as a new vector.
    pub fn prefix(&self, n: usize) -> BitVec {
        assert!(n <= self.len);
        let mut v = BitVec::zeros(n);
        for i in 0..n {
            if self.get(i) {
                v.set(i, true);
            }
        }
        v
    }

    /// Renders as a bit string, index 0 leftmost. Empty vectors print `-`.
    pub fn to_bit_string(&self) -> String {
        if self.len == 0 {
            return "-".to_string();
        }
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    pub fn from_bit_string(s: &str) -> Option<BitVec> {
        if s == "-" {
            return Some(BitVec::zeros(0));
        }
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => v.set(i, true),
                '0' => {}
                _ => return None,
            }
        }
        Some(v)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self.to_bit_string())
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVec>) -> Self {
        let cols = rows.first().map_or(0, BitVec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        BitMatrix { rows, cols }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut BitVec {
        &mut self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v);
    }

    /// GF(2) matrix product. Panics if inner dimensions disagree.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(
            self.cols,
            other.n_rows(),
            "dimension mismatch: {}x{} * {}x{}",
            self.n_rows(),
            self.cols,
            other.n_rows(),
            other.n_cols()
        );
        let mut out = BitMatrix::zeros(self.n_rows(), other.n_cols());
        for (i, row) in self.rows.iter().enumerate() {
            // Row-times-matrix as an XOR of the rows of `other` selected by
            // the set bits of `row`; word-packed, no per-bit inner loop.
            for j in row.iter_ones() {
                out.rows[i].xor_assign(&other.rows[j]);
            }
        }
        out
    }

    /// Inverse over GF(2) by Gauss-Jordan elimination, pivoting on the first
    /// set bit of each candidate row.
    pub fn inverse(&self) -> Result<BitMatrix, Gf2Error> {
        let n = self.n_rows();
        assert_eq!(n, self.cols, "inverse of a non-square matrix");
        let mut work = self.clone();
        let mut inv = BitMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| work.rows[r].get(col)).ok_or(Gf2Error::Singular)?;
            work.rows.swap(col, pivot);
            inv.rows.swap(col, pivot);
            for r in 0..n {
                if r != col && work.rows[r].get(col) {
                    let (target, source) = split_rows(&mut work.rows, r, col);
                    target.xor_assign(source);
                    let (target, source) = split_rows(&mut inv.rows, r, col);
                    target.xor_assign(source);
                }
            }
        }
        Ok(inv)
    }

    /// Rank by destructive elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<BitVec> = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) {
                rows.swap(rank, p);
                for r in 0..rows.len() {
                    if r != rank && rows[r].get(col) {
                        let (target, source) = split_rows(&mut rows, r, rank);
                        target.xor_assign(source);
                    }
                }
                rank += 1;
            }
        }
        rank
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.n_rows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {}", r.to_bit_string())?;
        }
        Ok(())
    }
}

fn split_rows(rows: &mut [BitVec], target: usize, source: usize) -> (&mut BitVec, &BitVec) {
    assert_ne!(target, source);
    if target < source {
        let (lo, hi) = rows.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(target);
        (&mut hi[0], &lo[source])
    }
}

/// Incremental GF(2) row space, used for rank bookkeeping by the greedy
/// oracle and the basis verifiers.
#[derive(Clone)]
pub struct RowSpace {
    // Reduced rows paired with their pivot column.
    rows: Vec<(usize, BitVec)>,
    width: usize,
}

impl RowSpace {
    pub fn new(width: usize) -> Self {
        RowSpace { rows: Vec::new(), width }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current rows; returns the residue.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.width);
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v` if independent of the span. Returns true when the rank grew.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let residue = self.reduce(v);
        match residue.first_one() {
            None => false,
            Some(pivot) => {
                self.rows.push((pivot, residue));
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_dot(a: &BitVec, b: &BitVec) -> bool {
        let mut acc = false;
        for i in 0..a.len() {
            acc ^= a.get(i) && b.get(i);
        }
        acc
    }

    fn naive_mul(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(a.n_rows(), b.n_cols());
        for i in 0..a.n_rows() {
            for j in 0..b.n_cols() {
                let mut acc = false;
                for k in 0..a.n_cols() {
                    acc ^= a.get(i, k) && b.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    fn rng_matrix(rows: usize, cols: usize, seed: u64) -> BitMatrix {
        // Tiny xorshift so the tests need no RNG dependency here.
        let mut state = seed.wrapping_mul(2654435769).max(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, next() & 1 == 1);
            }
        }
        m
    }

    /// Invertible by construction: random row operations applied to I.
    fn random_invertible(n: usize, seed: u64) -> BitMatrix {
        let mut state = seed.wrapping_mul(6364136223846793005).max(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut m = BitMatrix::identity(n);
        for _ in 0..n * 8 {
            let a = (next() % n as u64) as usize;
            let b = (next() % n as u64) as usize;
            if a != b {
                let (target, source) = split_rows(&mut m.rows, a, b);
                target.xor_assign(source);
            }
        }
        m
    }

    #[test]
    fn dot_examples() {
        let a = BitVec::from_bit_string("1010").unwrap();
        assert!(!a.dot(&a));
        let b = BitVec::from_bit_string("1000").unwrap();
        assert!(a.dot(&b));
    }

    #[test]
    fn dot_matches_naive_on_random_256_bit_pair() {
        let m = rng_matrix(2, 256, 99);
        assert_eq!(m.row(0).dot(m.row(1)), naive_dot(m.row(0), m.row(1)));
    }

    #[test]
    #[should_panic(expected = "length mismatch")]
    fn dot_length_mismatch_panics() {
        let _ = BitVec::zeros(3).dot(&BitVec::zeros(4));
    }

    #[test]
    fn mul_identity_and_involution() {
        let a = rng_matrix(5, 5, 7);
        assert_eq!(a.mul(&BitMatrix::identity(5)), a);
        // [[1,1],[0,1]] squares to I over GF(2).
        let mut m = BitMatrix::identity(2);
        m.set(0, 1, true);
        assert_eq!(m.mul(&m), BitMatrix::identity(2));
    }

    #[test]
    fn mul_matches_naive_64x64() {
        let a = rng_matrix(64, 64, 1);
        let b = rng_matrix(64, 64, 2);
        assert_eq!(a.mul(&b), naive_mul(&a, &b));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(BitMatrix::identity(4).inverse().unwrap(), BitMatrix::identity(4));
        // The swap permutation is its own inverse.
        let mut p = BitMatrix::zeros(2, 2);
        p.set(0, 1, true);
        p.set(1, 0, true);
        assert_eq!(p.inverse().unwrap(), p);
        for seed in 0..8 {
            let m = random_invertible(32, seed);
            let inv = m.inverse().unwrap();
            assert_eq!(m.mul(&inv), BitMatrix::identity(32));
            assert_eq!(inv.inverse().unwrap(), m);
        }
    }

    #[test]
    fn singular_matrix_is_detected() {
        let mut m = BitMatrix::zeros(3, 3);
        m.set(0, 0, true);
        m.set(1, 1, true);
        m.set(2, 0, true); // row 2 duplicates row 0 shape in column 0 only
        m.set(2, 1, true); // row2 = row0 + row1
        assert_eq!(m.inverse(), Err(Gf2Error::Singular));
    }

    #[test]
    fn row_space_tracks_rank() {
        let mut space = RowSpace::new(4);
        assert!(space.insert(&BitVec::from_bit_string("1100").unwrap()));
        assert!(space.insert(&BitVec::from_bit_string("0110").unwrap()));
        assert!(!space.insert(&BitVec::from_bit_string("1010").unwrap()));
        assert_eq!(space.rank(), 2);
        assert!(space.contains(&BitVec::from_bit_string("1010").unwrap()));
    }

    proptest! {
        #[test]
        fn dot_is_bilinear(seed in 0u64..5000) {
            let m = rng_matrix(3, 96, seed);
            let (u, v, w) = (m.row(0), m.row(1), m.row(2));
            prop_assert_eq!(u.xor(v).dot(w), u.dot(w) ^ v.dot(w));
        }

        #[test]
        fn mul_is_associative_16x16(seed in 0u64..500) {
            let a = rng_matrix(16, 16, seed.wrapping_add(1));
            let b = rng_matrix(16, 16, seed.wrapping_add(2));
            let c = rng_matrix(16, 16, seed.wrapping_add(3));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }
}
