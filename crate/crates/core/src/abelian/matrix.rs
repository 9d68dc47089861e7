//! Dense integer matrices with arbitrary-precision entries.
//!
//! These back every presentation-level computation (Smith/Hermite reduction,
//! cokernel presentations, adjugate transport of linking data). The hot
//! search loops never touch this type; they work in fixed-width residues.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A `rows x cols` matrix of [`BigInt`] entries in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    /// The zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    /// The `n x n` identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from whole rows. Every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows: expected uniform length {ncols}"
        );
        IntMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor for literals in tests and small inputs.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Builds a diagonal matrix from the given entries.
    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = IntMatrix::zero(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// The `i`-th row as a fresh vector.
    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    /// The `j`-th column as a fresh vector.
    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Matrix product; panics on shape mismatch (programming error).
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let term = a * &rhs[(k, j)];
                    out[(i, j)] += term;
                }
            }
        }
        out
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }

    /// `row[dst] += c * row[src]`.
    pub fn row_axpy(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        assert_ne!(dst, src);
        for j in 0..self.cols {
            let term = c * &self[(src, j)];
            self[(dst, j)] += term;
        }
    }

    /// `col[dst] += c * col[src]`.
    pub fn col_axpy(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        assert_ne!(dst, src);
        for i in 0..self.rows {
            let term = c * &self[(i, src)];
            self[(i, dst)] += term;
        }
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    ///
    /// Runs on a scratch copy; every intermediate division is exact, so the
    /// result is the true integer determinant for any square matrix.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                // find a pivot row below and swap it in
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev; // exact by Bareiss' identity
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Adjugate matrix: `adj(A) * A = A * adj(A) = det(A) * I`.
    ///
    /// Computed entrywise from cofactors; fine for the presentation-sized
    /// matrices this library deals in.
    pub fn adjugate(&self) -> IntMatrix {
        assert!(self.is_square(), "adjugate of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return IntMatrix::zero(0, 0);
        }
        let mut adj = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.delete_row_col(i, j).det();
                adj[(j, i)] = if (i + j) % 2 == 0 { minor } else { -minor };
            }
        }
        adj
    }

    fn delete_row_col(&self, row: usize, col: usize) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows - 1, self.cols - 1);
        let mut oi = 0;
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let mut oj = 0;
            for j in 0..self.cols {
                if j == col {
                    continue;
                }
                out[(oi, oj)] = self[(i, j)].clone();
                oj += 1;
            }
            oi += 1;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Rows as owned vectors (useful when feeding generators elsewhere).
    pub fn into_row_vecs(self) -> Vec<Vec<BigInt>> {
        let cols = self.cols;
        if cols == 0 {
            return vec![Vec::new(); self.rows];
        }
        self.data
            .chunks(cols)
            .map(|c| c.to_vec())
            .collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strings: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_string()).collect())
            .collect();
        let width = strings
            .iter()
            .flatten()
            .map(String::len)
            .max()
            .unwrap_or(1);
        for (i, row) in strings.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, s) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{s:>width$}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// True when the matrix is square with determinant `+1` or `-1`.
pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.is_square() && m.det().abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_known_matrices() {
        assert_eq!(IntMatrix::identity(4).det(), BigInt::from(1));
        assert_eq!(IntMatrix::from_i64_rows(&[&[2, 1], &[1, 2]]).det(), BigInt::from(3));
        assert_eq!(
            IntMatrix::from_i64_rows(&[&[0, 2], &[3, 0]]).det(),
            BigInt::from(-6)
        );
        // det(diag(3,3,3,-3,-3,-3)) = -729
        let d = IntMatrix::diagonal(&[3, 3, 3, -3, -3, -3].map(BigInt::from));
        assert_eq!(d.det(), BigInt::from(-729));
        // singular
        assert_eq!(
            IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]).det(),
            BigInt::from(0)
        );
        // 0x0 matrix has determinant 1 (empty product)
        assert_eq!(IntMatrix::zero(0, 0).det(), BigInt::from(1));
    }

    #[test]
    fn det_needs_row_swap() {
        // leading zero pivot forces a swap; det = -(1*1) * det[[1]] arrangement
        let m = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.det(), BigInt::from(-1));
    }

    #[test]
    fn adjugate_times_matrix_is_det_identity() {
        let a = IntMatrix::from_i64_rows(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]);
        let det = a.det();
        let prod = a.adjugate().mul(&a);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { det.clone() } else { BigInt::zero() };
                assert_eq!(prod[(i, j)], expect, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn row_and_col_ops_track_products() {
        let mut m = IntMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        m.row_axpy(1, 0, &BigInt::from(-3));
        assert_eq!(m, IntMatrix::from_i64_rows(&[&[1, 2], &[0, -2]]));
        m.col_axpy(1, 0, &BigInt::from(-2));
        assert_eq!(m, IntMatrix::from_i64_rows(&[&[1, 0], &[0, -2]]));
        m.negate_row(1);
        assert_eq!(m, IntMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]));
    }

    #[test]
    fn unimodularity_check() {
        assert!(is_unimodular(&IntMatrix::identity(3)));
        assert!(is_unimodular(&IntMatrix::from_i64_rows(&[&[1, 5], &[0, -1]])));
        assert!(!is_unimodular(&IntMatrix::from_i64_rows(&[&[2, 0], &[0, 1]])));
    }
}
