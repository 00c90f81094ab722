//! Bit-packed square 0-1 matrices.
//!
//! Row `i` is a `u32` whose bit `j` is entry `(i, j)`. Entries of `B Cᵀ` and
//! `Bᵀ C` are population counts of row/row and column/column intersections.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::MAX_ORDER;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryMatrix {
    order: usize,
    rows: Vec<u32>,
}

/// Row sums, column sums and their off-diagonal parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowColProfile {
    pub r: Vec<usize>,
    pub c: Vec<usize>,
    pub r_off: Vec<usize>,
    pub c_off: Vec<usize>,
}

impl RowColProfile {
    /// Row sums equal column sums, both in full and off the diagonal.
    pub fn is_balanced(&self) -> bool {
        self.r == self.c && self.r_off == self.c_off
    }
}

/// Dense matrix of nonnegative integers, the result of products of 0-1 matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountMatrix {
    pub order: usize,
    pub entries: Vec<u32>,
}

impl CountMatrix {
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.order + j]
    }

    pub fn add(&self, other: &CountMatrix) -> CountMatrix {
        CountMatrix {
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

fn mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl BinaryMatrix {
    pub(crate) fn from_row_bits(order: usize, rows: Vec<u32>) -> Self {
        debug_assert_eq!(rows.len(), order);
        BinaryMatrix { order, rows }
    }

    /// Builds a matrix from rows of 0/1 values.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > MAX_ORDER {
            return Err(Error::domain(format!("order {n} outside 1..={MAX_ORDER}")));
        }
        let mut bits = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::malformed(i + 1, 1, format!("row {} has {} entries, expected {n}", i + 1, row.len())));
            }
            let mut word = 0u32;
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => word |= 1 << j,
                    _ => return Err(Error::malformed(i + 1, j + 1, format!("entry {v} is not 0 or 1"))),
                }
            }
            bits.push(word);
        }
        Ok(BinaryMatrix { order: n, rows: bits })
    }

    /// Decodes a row-major cell mask (bit `i*n + j` is entry `(i, j)`), `n ≤ 8`.
    pub fn from_cell_mask(order: usize, cells: u64) -> Self {
        assert!(order <= 8, "cell masks cover orders up to 8");
        let rows = (0..order)
            .map(|i| ((cells >> (i * order)) as u32) & mask(order))
            .collect();
        BinaryMatrix { order, rows }
    }

    /// Row-major cell mask, `n ≤ 8`.
    pub fn to_cell_mask(&self) -> u64 {
        assert!(self.order <= 8, "cell masks cover orders up to 8");
        self.rows
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &r)| acc | ((r as u64) << (i * self.order)))
    }

    pub fn zeros(order: usize) -> Self {
        BinaryMatrix { order, rows: vec![0; order] }
    }

    /// `J_n`.
    pub fn all_ones(order: usize) -> Self {
        BinaryMatrix { order, rows: vec![mask(order); order] }
    }

    pub fn identity(order: usize) -> Self {
        BinaryMatrix { order, rows: (0..order).map(|i| 1 << i).collect() }
    }

    /// `self ⊕ other`, block diagonal.
    pub fn direct_sum(&self, other: &BinaryMatrix) -> Result<Self> {
        let n = self.order + other.order;
        if n > MAX_ORDER {
            return Err(Error::capacity(format!("direct sum order {n} exceeds {MAX_ORDER}")));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().map(|r| r << self.order));
        Ok(BinaryMatrix { order: n, rows })
    }

    /// Pads with a zero block to order `n`.
    pub fn pad_to(&self, n: usize) -> Result<Self> {
        if n < self.order {
            return Err(Error::domain(format!("cannot pad order {} down to {n}", self.order)));
        }
        if n == self.order {
            return Ok(self.clone());
        }
        self.direct_sum(&BinaryMatrix::zeros(n - self.order))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn row_bits(&self) -> &[u32] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let n = self.order;
        let mut rows = vec![0u32; n];
        for (i, &r) in self.rows.iter().enumerate() {
            for (j, out) in rows.iter_mut().enumerate() {
                *out |= (r >> j & 1) << i;
            }
        }
        BinaryMatrix { order: n, rows }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn or(&self, other: &BinaryMatrix) -> BinaryMatrix {
        BinaryMatrix {
            order: self.order,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn is_disjoint(&self, other: &BinaryMatrix) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & b == 0)
    }

    /// `f(B)`.
    pub fn ones_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn row_col_profile(&self) -> RowColProfile {
        let n = self.order;
        let cols = self.transpose();
        let diag = |i: usize| self.get(i, i) as usize;
        let r: Vec<usize> = self.rows.iter().map(|x| x.count_ones() as usize).collect();
        let c: Vec<usize> = cols.rows.iter().map(|x| x.count_ones() as usize).collect();
        let r_off = (0..n).map(|i| r[i] - diag(i)).collect();
        let c_off = (0..n).map(|i| c[i] - diag(i)).collect();
        RowColProfile { r, c, r_off, c_off }
    }

    /// `self · rhs` with exact integer entries.
    pub fn product(&self, rhs: &BinaryMatrix) -> Result<CountMatrix> {
        if self.order != rhs.order {
            return Err(Error::domain(format!(
                "order mismatch: {} vs {}",
                self.order, rhs.order
            )));
        }
        let cols = rhs.transpose();
        Ok(row_intersections(&self.rows, &cols.rows))
    }

    /// `self · selfᵀ`.
    pub fn gram_rows(&self) -> CountMatrix {
        row_intersections(&self.rows, &self.rows)
    }

    /// `selfᵀ · self`.
    pub fn gram_cols(&self) -> CountMatrix {
        let cols = self.transpose();
        row_intersections(&cols.rows, &cols.rows)
    }

    /// Applies a simultaneous permutation: entry `(i, j)` moves to
    /// `(perm[i], perm[j])`.
    pub fn permute(&self, perm: &[usize]) -> Result<BinaryMatrix> {
        crate::pattern::check_permutation(perm, self.order)?;
        let mut out = BinaryMatrix::zeros(self.order);
        for i in 0..self.order {
            for j in 0..self.order {
                if self.get(i, j) {
                    out.set(perm[i], perm[j], true);
                }
            }
        }
        Ok(out)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }
}

/// Entry `(p, q)` is `|a[p] ∧ b[q]|`.
fn row_intersections(a: &[u32], b: &[u32]) -> CountMatrix {
    let n = a.len();
    let mut entries = Vec::with_capacity(n * n);
    for &x in a {
        for &y in b {
            entries.push((x & y).count_ones());
        }
    }
    CountMatrix { order: n, entries }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix{:?}", self.to_rows())
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_rows() {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_count_examples() {
        assert_eq!(BinaryMatrix::all_ones(3).ones_count(), 9);
        let m = BinaryMatrix::identity(2).pad_to(5).unwrap();
        assert_eq!(m.ones_count(), 2);
        assert_eq!(BinaryMatrix::all_ones(32).ones_count(), 1024);
    }

    #[test]
    fn profile_of_single_off_diagonal_one() {
        let b = BinaryMatrix::from_rows(&[vec![0, 1], vec![0, 0]]).unwrap();
        let p = b.row_col_profile();
        assert_eq!(p.r, vec![1, 0]);
        assert_eq!(p.c, vec![0, 1]);
        assert_eq!(p.r_off, vec![1, 0]);
        assert!(!p.is_balanced());
    }

    #[test]
    fn rejects_non_binary_and_ragged() {
        assert!(BinaryMatrix::from_rows(&[vec![0, 2], vec![0, 0]]).is_err());
        assert!(BinaryMatrix::from_rows(&[vec![0, 1], vec![0]]).is_err());
        assert!(BinaryMatrix::from_rows(&[]).is_err());
    }

    #[test]
    fn products_match_naive() {
        let a = BinaryMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 0]]).unwrap();
        let b = BinaryMatrix::from_rows(&[vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        let p = a.product(&b).unwrap();
        let ar = a.to_rows();
        let br = b.to_rows();
        for (i, a_row) in ar.iter().enumerate() {
            for j in 0..3 {
                let naive: u32 = a_row.iter().zip(&br).map(|(&x, b_row)| (x * b_row[j]) as u32).sum();
                assert_eq!(p.get(i, j), naive);
            }
        }
        assert_eq!(a.gram_rows(), a.product(&a.transpose()).unwrap());
        assert_eq!(a.gram_cols(), a.transpose().product(&a).unwrap());
        assert!(a.product(&BinaryMatrix::identity(2)).is_err());
    }

    #[test]
    fn cell_mask_round_trip() {
        let a = BinaryMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 0]]).unwrap();
        assert_eq!(BinaryMatrix::from_cell_mask(3, a.to_cell_mask()), a);
        assert_eq!(a.to_cell_mask(), 0b001_110_011);
    }

    #[test]
    fn direct_sum_layout() {
        let p = BinaryMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        let m = p.direct_sum(&BinaryMatrix::identity(1)).unwrap();
        assert_eq!(m.to_rows(), vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        assert_eq!(m.transpose(), m);
    }
}
