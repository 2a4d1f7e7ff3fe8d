//! Smith normal form over the integers with unimodular transform tracking.
//!
//! `smith(A)` produces `U`, `V` (and their inverses) with `U * A * V = D`,
//! where `D` is diagonal, its entries are nonnegative, and each divides the
//! next. Pivoting is deterministic: the smallest nonzero absolute value in
//! the trailing submatrix wins, ties broken in row-major order, so generator
//! expressions derived from the transforms are reproducible.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// The result of diagonalizing an integer matrix by unimodular row and
/// column operations.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `d_1, d_2, ...` including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Position of the smallest nonzero absolute value in the trailing
/// submatrix starting at `(k, k)`, scanning row-major.
fn pivot_position(b: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in k..b.rows() {
        for j in k..b.cols() {
            let e = b.get(i, j);
            if e.is_zero() {
                continue;
            }
            let a = e.abs();
            match &best {
                Some((m, _, _)) if *m <= a => {}
                _ => best = Some((a, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn smith(a: &IntMatrix) -> SmithDecomposition {
    let m = a.rows();
    let n = a.cols();
    let mut b = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    // Elementary operations, applied to B and mirrored on the transforms.
    macro_rules! row_swap {
        ($i:expr, $j:expr) => {{
            b.swap_rows($i, $j);
            u.swap_rows($i, $j);
            u_inv.swap_cols($i, $j);
        }};
    }
    macro_rules! col_swap {
        ($i:expr, $j:expr) => {{
            b.swap_cols($i, $j);
            v.swap_cols($i, $j);
            v_inv.swap_rows($i, $j);
        }};
    }
    macro_rules! row_add {
        // R_i += q * R_j
        ($i:expr, $j:expr, $q:expr) => {{
            let q: BigInt = $q;
            b.add_row_multiple($i, $j, &q);
            u.add_row_multiple($i, $j, &q);
            u_inv.add_col_multiple($j, $i, &(-q));
        }};
    }
    macro_rules! col_add {
        // C_j += q * C_k
        ($j:expr, $k:expr, $q:expr) => {{
            let q: BigInt = $q;
            b.add_col_multiple($j, $k, &q);
            v.add_col_multiple($j, $k, &q);
            v_inv.add_row_multiple($k, $j, &(-q));
        }};
    }

    for k in 0..m.min(n) {
        'reduce: loop {
            let Some((pi, pj)) = pivot_position(&b, k) else {
                break 'reduce;
            };
            row_swap!(k, pi);
            col_swap!(k, pj);
            if b.get(k, k).is_negative() {
                b.negate_row(k);
                u.negate_row(k);
                u_inv.negate_col(k);
            }

            // Clear the column below the pivot by division with remainder.
            for i in k + 1..m {
                if !b.get(i, k).is_zero() {
                    let q = b.get(i, k) / b.get(k, k);
                    if !q.is_zero() {
                        row_add!(i, k, -q);
                    }
                }
            }
            if (k + 1..m).any(|i| !b.get(i, k).is_zero()) {
                // A remainder strictly smaller than the pivot survives;
                // the next pass will promote it.
                continue 'reduce;
            }

            // Clear the row to the right of the pivot.
            for j in k + 1..n {
                if !b.get(k, j).is_zero() {
                    let q = b.get(k, j) / b.get(k, k);
                    if !q.is_zero() {
                        col_add!(j, k, -q);
                    }
                }
            }
            if (k + 1..n).any(|j| !b.get(k, j).is_zero()) {
                continue 'reduce;
            }

            // Pivot must divide every trailing entry for the divisibility
            // chain; fold an offending row into the pivot row and retry.
            let offender = (k + 1..m)
                .flat_map(|i| (k + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !(b.get(i, j) % b.get(k, k)).is_zero());
            match offender {
                Some((i, _)) => {
                    row_add!(k, i, BigInt::from(1));
                    continue 'reduce;
                }
                None => break 'reduce,
            }
        }
    }

    SmithDecomposition {
        u,
        u_inv,
        v,
        v_inv,
        d: b,
    }
}

/// A basis of the integer kernel `{x : Ax = 0}`, read off the columns of
/// `V` that map to zero diagonal entries. Empty for injective matrices.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let dec = smith(a);
    let diag_len = a.rows().min(a.cols());
    (0..a.cols())
        .filter(|&j| j >= diag_len || dec.d.get(j, j).is_zero())
        .map(|j| dec.v.column(j))
        .collect()
}
