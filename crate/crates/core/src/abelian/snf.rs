//! Smith normal form over the integers.
//!
//! `smith_normal_form` returns unimodular `U`, `V` and diagonal `D` with
//! `U * A * V = D`, the diagonal nonnegative and each entry dividing the
//! next. Pivot selection always takes a smallest-magnitude nonzero entry of
//! the remaining block, which keeps intermediate entries small on the
//! ill-conditioned presentation matrices surgery descriptions produce.
//! `U^{-1}` is tracked alongside `U` by applying the inverse column
//! operations, so callers that transport data along the presentation (such
//! as the linking-form construction) never invert a matrix after the fact.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// The result of a Smith normal form computation: `u * a * v = d`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    /// Unimodular row-operation accumulator.
    pub u: IntMatrix,
    /// The diagonal form, same shape as the input.
    pub d: IntMatrix,
    /// Unimodular column-operation accumulator.
    pub v: IntMatrix,
    u_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Exact inverse of `u`, tracked during the reduction.
    pub fn u_inv(&self) -> &IntMatrix {
        &self.u_inv
    }

    /// The diagonal entries `d_0, d_1, ...` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

/// Smallest-magnitude nonzero entry of the block at `(k.., k..)`, if any.
fn smallest_nonzero(b: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..b.rows() {
        for j in k..b.cols() {
            if b[(i, j)].is_zero() {
                continue;
            }
            match best {
                Some(p) if b[p].abs() <= b[(i, j)].abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Computes the Smith normal form of `a`.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut b = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    // Elementary row operations, mirrored on `u` and inverted on `u_inv`.
    // (Column operations touch only `v`; its inverse is never needed.)
    macro_rules! swap_rows {
        ($x:expr, $y:expr) => {{
            b.swap_rows($x, $y);
            u.swap_rows($x, $y);
            u_inv.swap_cols($x, $y);
        }};
    }
    macro_rules! negate_row {
        ($x:expr) => {{
            b.negate_row($x);
            u.negate_row($x);
            u_inv.negate_col($x);
        }};
    }
    macro_rules! row_axpy {
        ($dst:expr, $src:expr, $c:expr) => {{
            let c: BigInt = $c;
            b.row_axpy($dst, $src, &c);
            u.row_axpy($dst, $src, &c);
            u_inv.col_axpy($src, $dst, &(-c));
        }};
    }

    for k in 0..m.min(n) {
        let placed = loop {
            let Some((pi, pj)) = smallest_nonzero(&b, k) else {
                break false; // remaining block is zero; diagonal ends here
            };
            swap_rows!(k, pi);
            b.swap_cols(k, pj);
            v.swap_cols(k, pj);
            if b[(k, k)].is_negative() {
                negate_row!(k);
            }

            // Reduce column k below and row k to the right by the pivot.
            // Truncated quotients leave remainders strictly smaller than the
            // pivot, so if anything survives, the next round finds a smaller
            // pivot; the minimum magnitude strictly decreases and the loop
            // terminates.
            for i in k + 1..m {
                let q = &b[(i, k)] / &b[(k, k)];
                row_axpy!(i, k, -q);
            }
            for j in k + 1..n {
                let q = &b[(k, j)] / &b[(k, k)];
                if !q.is_zero() {
                    b.col_axpy(j, k, &(-&q));
                    v.col_axpy(j, k, &(-q));
                }
            }
            let col_clean = (k + 1..m).all(|i| b[(i, k)].is_zero());
            let row_clean = (k + 1..n).all(|j| b[(k, j)].is_zero());
            if !col_clean || !row_clean {
                continue;
            }

            // Divisibility pass: the pivot must divide the whole remaining
            // block. Pull the first offending entry into row k and retry.
            let offender = (k + 1..m)
                .flat_map(|i| (k + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !(&b[(i, j)] % &b[(k, k)]).is_zero());
            match offender {
                Some((i, _)) => {
                    row_axpy!(k, i, BigInt::from(1));
                }
                None => break true,
            }
        };
        if !placed {
            break;
        }
    }

    debug_assert_eq!(u.mul(a).mul(&v), b, "U*A*V must equal D");
    debug_assert_eq!(u.mul(&u_inv), IntMatrix::identity(m), "U * U^-1 must be I");

    SmithDecomposition { u, d: b, v, u_inv }
}
