//! Support-vector maintenance for the incremental basis algorithms.
//!
//! The engine owns vectors `S_1 ... S_K` (initially unit vectors) and an
//! ordered list of committed cycle signatures. The balanced recursion
//! `extend(j, k)` commits the first half, re-orthogonalizes the second half
//! in one block via `A = Y · X^{-1}`, then commits the rest. The simple
//! recursion re-orthogonalizes pending vectors one committed cycle at a
//! time. Both keep two invariants, asserted in debug builds after every
//! update: the vectors stay a basis of GF(2)^K, and every pending vector is
//! orthogonal to every committed signature.

use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec, Gf2Error};

#[derive(Debug, Error, PartialEq)]
pub enum SupportError {
    /// The X block of an update was singular. X is invertible whenever the
    /// committed cycles were genuine minima, so this flags internal
    /// corruption rather than bad input.
    #[error("support-vector update produced a singular X block")]
    SingularUpdate(#[from] Gf2Error),
    #[error("selected cycle is not odd against its support vector")]
    NotOdd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recursion {
    Balanced,
    Simple,
}

pub struct SupportEngine {
    k: usize,
    vectors: Vec<BitVec>,
    committed: Vec<BitVec>,
}

impl SupportEngine {
    pub fn new(k: usize) -> SupportEngine {
        SupportEngine {
            k,
            vectors: (0..k).map(|i| BitVec::unit(k, i)).collect(),
            committed: Vec::new(),
        }
    }

    /// Runs the recursion; `select(j, S_j)` must return the signature of the
    /// minimum-weight cycle with `<S_j, sig> = 1` and record the cycle.
    pub fn run<F>(&mut self, recursion: Recursion, select: &mut F) -> Result<(), SupportError>
    where
        F: FnMut(usize, &BitVec) -> Result<BitVec, SupportError>,
    {
        if self.k == 0 {
            return Ok(());
        }
        match recursion {
            Recursion::Balanced => self.extend_balanced(0, self.k, select),
            Recursion::Simple => self.extend_simple(select),
        }
    }

    fn commit<F>(&mut self, j: usize, select: &mut F) -> Result<(), SupportError>
    where
        F: FnMut(usize, &BitVec) -> Result<BitVec, SupportError>,
    {
        debug_assert_eq!(j, self.committed.len());
        let sig = select(j, &self.vectors[j])?;
        if !self.vectors[j].dot(&sig) {
            return Err(SupportError::NotOdd);
        }
        self.committed.push(sig);
        Ok(())
    }

    fn extend_balanced<F>(&mut self, j: usize, k: usize, select: &mut F) -> Result<(), SupportError>
    where
        F: FnMut(usize, &BitVec) -> Result<BitVec, SupportError>,
    {
        if k == 1 {
            return self.commit(j, select);
        }
        let half = k / 2;
        self.extend_balanced(j, half, select)?;
        self.update(j, k)?;
        self.extend_balanced(j + half, k - half, select)
    }

    /// Makes `S_{j+k/2} .. S_{j+k-1}` orthogonal to the signatures committed
    /// at positions `j .. j+k/2`.
    fn update(&mut self, j: usize, k: usize) -> Result<(), SupportError> {
        let half = k / 2;
        let rest = k - half;
        let mut x = BitMatrix::zeros(half, half);
        for r in 0..half {
            for c in 0..half {
                x.set(r, c, self.vectors[j + r].dot(&self.committed[j + c]));
            }
        }
        let mut y = BitMatrix::zeros(rest, half);
        for r in 0..rest {
            for c in 0..half {
                y.set(r, c, self.vectors[j + half + r].dot(&self.committed[j + c]));
            }
        }
        let a = y.mul(&x.inverse()?);
        for r in 0..rest {
            // S'_{j'} = S_{j'} + sum of alpha-selected block vectors.
            let mut acc = self.vectors[j + half + r].clone();
            for c in a.row(r).iter_ones() {
                acc.xor_assign(&self.vectors[j + c].clone());
            }
            self.vectors[j + half + r] = acc;
        }
        #[cfg(debug_assertions)]
        self.audit(j + half, j + k);
        Ok(())
    }

    fn extend_simple<F>(&mut self, select: &mut F) -> Result<(), SupportError>
    where
        F: FnMut(usize, &BitVec) -> Result<BitVec, SupportError>,
    {
        for j in 0..self.k {
            self.commit(j, select)?;
            let sig = self.committed[j].clone();
            for jp in j + 1..self.k {
                if self.vectors[jp].dot(&sig) {
                    let (lo, hi) = self.vectors.split_at_mut(jp);
                    hi[0].xor_assign(&lo[j]);
                }
            }
            #[cfg(debug_assertions)]
            self.audit(j + 1, self.k);
        }
        Ok(())
    }

    /// Checks full rank and the orthogonality of pending vectors in
    /// `[pending_lo, pending_hi)` against all committed signatures.
    pub fn audit(&self, pending_lo: usize, pending_hi: usize) {
        let rank = BitMatrix::from_rows(self.vectors.clone()).rank();
        assert_eq!(rank, self.k, "support vectors must stay a basis");
        for jp in pending_lo..pending_hi {
            for sig in &self.committed {
                assert!(
                    !self.vectors[jp].dot(sig),
                    "pending support vector {jp} not orthogonal to a committed cycle"
                );
            }
        }
    }

    pub fn committed(&self) -> &[BitVec] {
        &self.committed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A selector backed by a fixed candidate pool: always picks the first
    /// candidate with odd product, mimicking a weight-ordered pool.
    fn pool_selector(pool: Vec<BitVec>) -> impl FnMut(usize, &BitVec) -> Result<BitVec, SupportError> {
        move |_, s| {
            pool.iter()
                .find(|c| s.dot(c))
                .cloned()
                .ok_or(SupportError::NotOdd)
        }
    }

    fn unit_pool(k: usize) -> Vec<BitVec> {
        (0..k).map(|i| BitVec::unit(k, i)).collect()
    }

    #[test]
    fn both_recursions_commit_k_cycles() {
        for recursion in [Recursion::Balanced, Recursion::Simple] {
            let mut engine = SupportEngine::new(6);
            engine.run(recursion, &mut pool_selector(unit_pool(6))).unwrap();
            assert_eq!(engine.committed().len(), 6);
            engine.audit(0, 0);
        }
    }

    #[test]
    fn committed_signatures_span_the_space() {
        // A pool of mixed vectors: the recursion must still pick a basis.
        let mut pool = unit_pool(5);
        pool[2] = BitVec::from_bit_string("11100").unwrap();
        pool[4] = BitVec::from_bit_string("10111").unwrap();
        for recursion in [Recursion::Balanced, Recursion::Simple] {
            let mut engine = SupportEngine::new(5);
            engine.run(recursion, &mut pool_selector(pool.clone())).unwrap();
            let rank = BitMatrix::from_rows(engine.committed().to_vec()).rank();
            assert_eq!(rank, 5, "committed cycles must be independent");
        }
    }

    #[test]
    fn zero_dimension_is_a_no_op() {
        let mut engine = SupportEngine::new(0);
        engine
            .run(Recursion::Balanced, &mut |_, _| panic!("no selection expected"))
            .unwrap();
        assert!(engine.committed().is_empty());
    }
}
