#![allow(clippy::needless_range_loop)]

//! Small dense linear solves shared by the witness synthesis and the
//! local optimizers. Sizes here never exceed a few dozen rows.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when the matrix is numerically singular.
pub(crate) fn solve_real(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite"))?;
        if a[pivot][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut sum = b[col];
        for k in col + 1..n {
            sum -= a[col][k] * x[k];
        }
        x[col] = sum / a[col][col];
    }
    Some(x)
}

pub(crate) enum HermitianSolve {
    Solved(Vec<Complex64>),
    /// The system is rank-deficient and `b` has a component outside the
    /// range of the matrix; `row` indexes the inconsistent equation.
    Inconsistent {
        row: usize,
    },
}

/// Solves `m x = b` for Hermitian positive-semidefinite `m`, pivoting on
/// the largest remaining diagonal entry. Rank-deficient but consistent
/// systems get the solution with the free components set to zero.
pub(crate) fn solve_hermitian_psd(
    mut m: Vec<Vec<Complex64>>,
    mut b: Vec<Complex64>,
    tol: f64,
) -> HermitianSolve {
    let n = b.len();
    debug_assert!(m.len() == n && m.iter().all(|row| row.len() == n));
    let scale = (0..n).map(|i| m[i][i].re).fold(1.0_f64, f64::max);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rank = n;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][i].re.partial_cmp(&m[j][j].re).expect("finite"))
            .expect("nonempty");
        if m[pivot][pivot].re <= tol * scale {
            rank = col;
            break;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        perm.swap(col, pivot);
        for row in 0..n {
            m[row].swap(col, pivot);
        }
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in col..n {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
            }
            let sub = factor * b[col];
            b[row] -= sub;
        }
    }
    // Residual rows must have vanished right-hand sides or the system has
    // no solution at all.
    for row in rank..n {
        if b[row].norm() > tol * (1.0 + scale) {
            return HermitianSolve::Inconsistent { row: perm[row] };
        }
    }
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for col in (0..rank).rev() {
        let mut sum = b[col];
        for k in col + 1..rank {
            sum -= m[col][k] * y[k];
        }
        y[col] = sum / m[col][col];
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for (slot, value) in perm.into_iter().zip(y) {
        x[slot] = value;
    }
    HermitianSolve::Solved(x)
}
