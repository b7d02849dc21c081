//! Dense matrices over the rationals with exact elimination.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(n_rows, n_cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n_cols, "ragged row {i}");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigRational::from_integer(BigInt::from(v)));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigRational) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Nonzero entries as `(row, col, value)` in row-major order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    /// Reorders rows and columns: entry `(i, j)` of the result is entry
    /// `(row_order[i], col_order[j])` of `self`.
    pub fn permuted(&self, row_order: &[usize], col_order: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        for (i, &src_i) in row_order.iter().enumerate() {
            for (j, &src_j) in col_order.iter().enumerate() {
                out.set(i, j, self.get(src_i, src_j).clone());
            }
        }
        out
    }

    /// Rank by fraction-exact Gaussian elimination. The pivot in each column
    /// is the candidate with the largest `|numerator * denominator|`.
    pub fn rank(&self) -> usize {
        let mut work: Vec<Vec<BigRational>> = (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let pivot = (rank..self.rows)
                .filter(|&r| !work[r][col].is_zero())
                .max_by_key(|&r| (work[r][col].numer() * work[r][col].denom()).abs());
            let Some(pivot) = pivot else { continue };
            work.swap(rank, pivot);
            let pivot_row = work[rank].clone();
            let pivot_value = pivot_row[col].clone();
            for row in work.iter_mut().skip(rank + 1) {
                if row[col].is_zero() {
                    continue;
                }
                let factor = &row[col] / &pivot_value;
                for (c, pv) in pivot_row.iter().enumerate().skip(col) {
                    if !pv.is_zero() {
                        row[c] -= &factor * pv;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(RationalMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(RationalMatrix::zeros(0, 4).rank(), 0);
        assert_eq!(RationalMatrix::zeros(4, 0).rank(), 0);
        let tree = RationalMatrix::from_rows(&[vec![1, 0], vec![-1, 1], vec![0, -1]]);
        assert_eq!(tree.rank(), 2);
        let dependent = RationalMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(dependent.rank(), 2);
    }

    #[test]
    fn rank_with_fractions() {
        let mut m = RationalMatrix::zeros(2, 2);
        m.set(0, 0, BigRational::new(1.into(), 3.into()));
        m.set(0, 1, BigRational::new(1.into(), 2.into()));
        m.set(1, 0, BigRational::new(2.into(), 3.into()));
        m.set(1, 1, BigRational::from_integer(1.into()));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn product_and_nonzeros() {
        let a = RationalMatrix::from_rows(&[vec![1, -1, 0], vec![0, 1, -1]]);
        let b = RationalMatrix::from_rows(&[vec![1], vec![1], vec![1]]);
        assert!((&a * &b).is_zero());
        let nz: Vec<(usize, usize)> = a.nonzeros().map(|(i, j, _)| (i, j)).collect();
        assert_eq!(nz, vec![(0, 0), (0, 1), (1, 1), (1, 2)]);
    }
}
