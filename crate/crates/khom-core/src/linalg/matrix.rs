//! Dense matrices over the integers with arbitrary-precision entries.
//!
//! Everything downstream (boundary maps, Smith normal form, group
//! presentations) is built on this type, so it is deliberately plain:
//! row-major `Vec<BigInt>`, no sparsity tricks, exact arithmetic only.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

/// An exact integer matrix. Dimensions may be zero in either direction;
/// a `0 x n` or `m x 0` matrix is a legitimate (empty) linear map.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix from rows of `i64` literals. Panics on ragged input.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        IntMatrix::from_fn(nrows, ncols, |r, c| BigInt::from(rows[r][c]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        self.entries[r * self.cols + c] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> Vec<BigInt> {
        (0..self.cols).map(|c| self.get(r, c).clone()).collect()
    }

    /// Matrix-vector product. Errors when the vector length does not match.
    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c) * &v[c])
                    .sum::<BigInt>()
            })
            .collect())
    }

    pub fn pow(&self, exp: u32) -> IntMatrix {
        assert_eq!(self.rows, self.cols, "pow requires a square matrix");
        let mut acc = IntMatrix::identity(self.rows);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Determinant by fraction-free (Bareiss) elimination. Exact, with sign.
    pub fn determinant(&self) -> Result<BigInt, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| self.row(r)).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * a[n - 1][n - 1].clone())
    }

    /// Swap rows `i` and `j`.
    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// Row operation `R_i += q * R_j`.
    pub(crate) fn add_row_multiple(&mut self, i: usize, j: usize, q: &BigInt) {
        for c in 0..self.cols {
            let delta = q * self.get(j, c);
            let v = self.get(i, c) + delta;
            self.set(i, c, v);
        }
    }

    /// Column operation `C_i += q * C_j`.
    pub(crate) fn add_col_multiple(&mut self, i: usize, j: usize, q: &BigInt) {
        for r in 0..self.rows {
            let delta = q * self.get(r, j);
            let v = self.get(r, i) + delta;
            self.set(r, i, v);
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.get(i, c).clone();
            self.set(i, c, v);
        }
    }

    pub(crate) fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }

    /// Largest absolute value of any entry; zero for empty matrices.
    pub fn max_abs(&self) -> BigInt {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;

    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch"
        );
        IntMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) + rhs.get(r, c))
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;

    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch"
        );
        IntMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) - rhs.get(r, c))
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        IntMatrix::from_fn(self.rows, rhs.cols, |r, c| {
            (0..self.cols).map(|k| self.get(r, k) * rhs.get(k, c)).sum()
        })
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
