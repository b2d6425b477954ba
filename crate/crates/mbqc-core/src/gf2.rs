//! Dense linear algebra over GF(2).
//!
//! Matrices are bit-packed with one machine word per row, so column counts
//! are limited to 64 — matching the crate-wide vertex cap. Elimination always
//! pivots on the lowest-index nonzero row and column, and underdetermined
//! solves fix free variables to zero, so every result is reproducible.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::MAX_VERTICES;

/// Dense matrix over the two-element field.
///
/// Row and column labels, when attached, name the vertices the rows/columns
/// stand for (used by induced adjacency matrices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    /// One word per row; bit `c` of `data[r]` is the entry at `(r, c)`.
    data: Vec<u64>,
    row_labels: Option<Vec<usize>>,
    col_labels: Option<Vec<usize>>,
}

impl BitMatrix {
    /// All-zero matrix. Fails above 64 columns (the bit-packing width).
    pub fn zero(rows: usize, cols: usize) -> Result<Self> {
        if cols > MAX_VERTICES {
            return Err(Error::dimension(format!("{cols} columns exceed the {MAX_VERTICES}-bit row width")));
        }
        Ok(BitMatrix { rows, cols, data: vec![0; rows], row_labels: None, col_labels: None })
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zero(n, n)?;
        for i in 0..n {
            m.data[i] = 1u64 << i;
        }
        Ok(m)
    }

    /// Builds from explicit rows given as column bit masks.
    pub fn from_rows(rows: &[u64], cols: usize) -> Result<Self> {
        let mut m = Self::zero(rows.len(), cols)?;
        let mask = width_mask(cols);
        for (r, &w) in rows.iter().enumerate() {
            if w & !mask != 0 {
                return Err(Error::dimension(format!("row {r} has bits beyond column {cols}")));
            }
            m.data[r] = w;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r] >> c) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        if value {
            self.data[r] |= 1u64 << c;
        } else {
            self.data[r] &= !(1u64 << c);
        }
    }

    /// Row `r` as a column bit mask.
    pub fn row(&self, r: usize) -> u64 {
        self.data[r]
    }

    /// Column `c` as a row bit mask (defined because rows ≤ 64 throughout this crate).
    pub fn col(&self, c: usize) -> u64 {
        debug_assert!(self.rows <= 64);
        let mut out = 0u64;
        for r in 0..self.rows {
            out |= (((self.data[r] >> c) & 1) as u64) << r;
        }
        out
    }

    /// Attaches vertex labels to rows (one per row).
    pub fn with_row_labels(mut self, labels: Vec<usize>) -> Self {
        debug_assert_eq!(labels.len(), self.rows);
        self.row_labels = Some(labels);
        self
    }

    /// Attaches vertex labels to columns (one per column).
    pub fn with_col_labels(mut self, labels: Vec<usize>) -> Self {
        debug_assert_eq!(labels.len(), self.cols);
        self.col_labels = Some(labels);
        self
    }

    pub fn row_labels(&self) -> Option<&[usize]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[usize]> {
        self.col_labels.as_deref()
    }

    /// Matrix product with XOR accumulation.
    pub fn multiply(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::dimension(format!(
                "product of {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zero(self.rows, other.cols)?;
        for r in 0..self.rows {
            let mut acc = 0u64;
            let mut w = self.data[r];
            while w != 0 {
                let j = w.trailing_zeros() as usize;
                acc ^= other.data[j];
                w &= w - 1;
            }
            out.data[r] = acc;
        }
        out.row_labels = self.row_labels.clone();
        out.col_labels = other.col_labels.clone();
        Ok(out)
    }

    /// Mirrored entries; labels swap roles.
    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zero(self.cols, self.rows).expect("rows fit: every matrix is built with cols <= 64, and transpose is only used on matrices with rows <= 64");
        for r in 0..self.rows {
            let mut w = self.data[r];
            while w != 0 {
                let c = w.trailing_zeros() as usize;
                out.data[c] |= 1u64 << r;
                w &= w - 1;
            }
        }
        out.row_labels = self.col_labels.clone();
        out.col_labels = self.row_labels.clone();
        out
    }

    /// GF(2) row rank.
    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| (work[r] >> c) & 1 == 1) else {
                continue;
            };
            work.swap(rank, p);
            let pivot = work[rank];
            for (r, w) in work.iter_mut().enumerate() {
                if r != rank && (*w >> c) & 1 == 1 {
                    *w ^= pivot;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Some `x` with `self · x = b`, or `None` when the system is
    /// inconsistent. Free variables are fixed to zero. `b` is a bit vector
    /// over rows (so this requires rows ≤ 64, which holds crate-wide).
    pub fn solve(&self, b: u64) -> Option<u64> {
        debug_assert!(self.rows <= 64);
        let mut work = self.data.clone();
        let mut rhs: Vec<bool> = (0..self.rows).map(|r| (b >> r) & 1 == 1).collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| (work[r] >> c) & 1 == 1) else {
                continue;
            };
            work.swap(rank, p);
            rhs.swap(rank, p);
            let (pivot_row, pivot_rhs) = (work[rank], rhs[rank]);
            for r in 0..self.rows {
                if r != rank && (work[r] >> c) & 1 == 1 {
                    work[r] ^= pivot_row;
                    rhs[r] ^= pivot_rhs;
                }
            }
            pivots.push((rank, c));
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        if (rank..self.rows).any(|r| rhs[r]) {
            return None; // zero row with nonzero right-hand side
        }
        let mut x = 0u64;
        for &(r, c) in &pivots {
            // After full Jordan elimination the pivot row reads
            // x_c + (free terms) = rhs; free variables are zero.
            if rhs[r] {
                x |= 1u64 << c;
            }
        }
        Some(x)
    }

    /// Two-sided inverse, or `None` when singular. Errors on non-square input.
    pub fn invert(&self) -> Result<Option<BitMatrix>> {
        if self.rows != self.cols {
            return Err(Error::dimension(format!("inverse of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut left = self.data.clone();
        let mut right: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        let mut rank = 0;
        for c in 0..n {
            let Some(p) = (rank..n).find(|&r| (left[r] >> c) & 1 == 1) else {
                return Ok(None);
            };
            left.swap(rank, p);
            right.swap(rank, p);
            let (lp, rp) = (left[rank], right[rank]);
            for r in 0..n {
                if r != rank && (left[r] >> c) & 1 == 1 {
                    left[r] ^= lp;
                    right[r] ^= rp;
                }
            }
            rank += 1;
        }
        // Jordan elimination with all pivots found leaves the left block as I.
        let mut inv = BitMatrix::zero(n, n)?;
        inv.data = right;
        inv.row_labels = self.col_labels.clone();
        inv.col_labels = self.row_labels.clone();
        Ok(Some(inv))
    }
}

fn width_mask(cols: usize) -> u64 {
    if cols == 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_matrix(rng: &mut ChaCha12Rng, rows: usize, cols: usize) -> BitMatrix {
        let data: Vec<u64> = (0..rows).map(|_| rng.next_u64() & width_mask(cols)).collect();
        BitMatrix::from_rows(&data, cols).unwrap()
    }

    #[test]
    fn multiply_identity_and_self_inverse() {
        let i3 = BitMatrix::identity(3).unwrap();
        assert_eq!(i3.multiply(&i3).unwrap(), i3);

        // [[1,1],[0,1]] squared is the identity over GF(2).
        let a = BitMatrix::from_rows(&[0b11, 0b10], 2).unwrap();
        assert_eq!(a.multiply(&a).unwrap(), BitMatrix::identity(2).unwrap());
    }

    #[test]
    fn multiply_rejects_dimension_mismatch() {
        let a = BitMatrix::zero(2, 3).unwrap();
        let b = BitMatrix::zero(2, 2).unwrap();
        assert!(a.multiply(&b).is_err());
    }

    #[test]
    fn path_graph_induced_matrix_self_check() {
        // Path v1-v2-v3 with I={v1}, O={v3}: the induced matrix (rows {v1,v2},
        // columns {v2,v3}) is the identity, hence its own inverse.
        let m = BitMatrix::from_rows(&[0b01, 0b10], 2).unwrap();
        let inv = m.invert().unwrap().unwrap();
        assert_eq!(m.multiply(&inv).unwrap(), BitMatrix::identity(2).unwrap());
    }

    #[test]
    fn rank_basics() {
        assert_eq!(BitMatrix::zero(3, 3).unwrap().rank(), 0);
        assert_eq!(BitMatrix::identity(4).unwrap().rank(), 4);
        let same_rows = BitMatrix::from_rows(&[0b11, 0b11], 2).unwrap();
        assert_eq!(same_rows.rank(), 1);
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..200 {
            let rows = 1 + (rng.next_u32() as usize) % 7;
            let cols = 1 + (rng.next_u32() as usize) % 7;
            let a = random_matrix(&mut rng, rows, cols);
            assert_eq!(a.rank(), a.transpose().rank());
        }
    }

    #[test]
    fn solve_examples() {
        let i2 = BitMatrix::identity(2).unwrap();
        assert_eq!(i2.solve(0b01), Some(0b01));

        // Underdetermined [[1,1]]: free variable goes to zero.
        let wide = BitMatrix::from_rows(&[0b11], 2).unwrap();
        assert_eq!(wide.solve(0b1), Some(0b01));

        // Inconsistent system.
        let tall = BitMatrix::from_rows(&[0b01, 0b01], 2).unwrap();
        assert_eq!(tall.solve(0b01), None);
    }

    #[test]
    fn solve_agrees_with_rank_criterion() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..300 {
            let rows = 1 + (rng.next_u32() as usize) % 6;
            let cols = 1 + (rng.next_u32() as usize) % 6;
            let a = random_matrix(&mut rng, rows, cols);
            let b = rng.next_u64() & width_mask(rows);
            match a.solve(b) {
                Some(x) => {
                    // Verify a · x = b by explicit row parity.
                    for r in 0..rows {
                        let lhs = (a.row(r) & x).count_ones() % 2;
                        assert_eq!(lhs as u64, (b >> r) & 1);
                    }
                }
                None => {
                    let mut aug_rows: Vec<u64> = (0..rows).map(|r| a.row(r)).collect();
                    for (r, w) in aug_rows.iter_mut().enumerate() {
                        *w |= ((b >> r) & 1) << cols;
                    }
                    let aug = BitMatrix::from_rows(&aug_rows, cols + 1).unwrap();
                    assert!(aug.rank() > a.rank());
                }
            }
        }
    }

    #[test]
    fn invert_examples() {
        let i5 = BitMatrix::identity(5).unwrap();
        assert_eq!(i5.invert().unwrap().unwrap(), i5);

        let swap = BitMatrix::from_rows(&[0b10, 0b01], 2).unwrap();
        assert_eq!(swap.invert().unwrap().unwrap(), swap);

        let singular = BitMatrix::from_rows(&[0b11, 0b11], 2).unwrap();
        assert_eq!(singular.invert().unwrap(), None);

        assert!(BitMatrix::zero(2, 3).unwrap().invert().is_err());
    }

    #[test]
    fn invert_is_two_sided() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let mut seen_invertible = 0;
        for _ in 0..300 {
            let n = 1 + (rng.next_u32() as usize) % 6;
            let a = random_matrix(&mut rng, n, n);
            if let Some(inv) = a.invert().unwrap() {
                seen_invertible += 1;
                let id = BitMatrix::identity(n).unwrap();
                assert_eq!(a.multiply(&inv).unwrap(), id);
                assert_eq!(inv.multiply(&a).unwrap(), id);
            }
        }
        assert!(seen_invertible > 20);
    }

    #[test]
    fn transpose_shapes_and_involution() {
        assert_eq!(BitMatrix::identity(3).unwrap().transpose(), BitMatrix::identity(3).unwrap());
        let z = BitMatrix::zero(2, 3).unwrap();
        let zt = z.transpose();
        assert_eq!((zt.rows(), zt.cols()), (3, 2));

        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let a = random_matrix(&mut rng, 5, 7);
        assert_eq!(a.transpose().transpose(), a);
    }
}
