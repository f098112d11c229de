//! Partial-pivot Gaussian elimination.

use num_complex::Complex;

use super::{max_abs, CMatrix, CVector};
use crate::{OtfsError, Result, Scalar};

/// Relative pivot threshold; a pivot below `PIVOT_TOL·‖A‖_max` is singular.
pub const PIVOT_TOL: f64 = 1e-12;

/// `PA = LU` with unit-diagonal `L` and `U` packed into one matrix.
#[derive(Debug, Clone)]
pub struct LuFactorization<T> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> LuFactorization<T> {
    pub fn new(a: &CMatrix<T>) -> Result<Self> {
        let (rows, cols) = a.dim();
        if rows == 0 {
            return Err(OtfsError::Empty);
        }
        if rows != cols {
            return Err(OtfsError::dims("square matrix", format!("{rows}x{cols}")));
        }
        let n = rows;
        let tol = T::of(PIVOT_TOL) * max_abs(a);
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[[i, k]].norm()))
                .fold((k, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot.is_nan() || pivot <= tol {
                return Err(OtfsError::Singular {
                    pivot: pivot.as_f64(),
                    tolerance: tol.as_f64(),
                });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    lu.swap([p, j], [k, j]);
                }
            }
            let inv = Complex::new(T::one(), T::zero()) / lu[[k, k]];
            for i in k + 1..n {
                let f = lu[[i, k]] * inv;
                lu[[i, k]] = f;
                if f.re == T::zero() && f.im == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[[k, j]];
                    lu[[i, j]] = lu[[i, j]] - f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, b: &CVector<T>) -> Result<CVector<T>> {
        let n = self.dim();
        if b.len() != n {
            return Err(OtfsError::dims(n, b.len()));
        }
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            x[i] = (0..i).fold(x[i], |acc, j| acc - self.lu[[i, j]] * x[j]);
        }
        for i in (0..n).rev() {
            x[i] = (i + 1..n).fold(x[i], |acc, j| acc - self.lu[[i, j]] * x[j]) / self.lu[[i, i]];
        }
        Ok(CVector::from(x))
    }
}

/// Solve `A x = b` for square `A`.
pub fn solve_dense<T: Scalar>(a: &CMatrix<T>, b: &CVector<T>) -> Result<CVector<T>> {
    if b.len() != a.nrows() {
        return Err(OtfsError::dims(a.nrows(), b.len()));
    }
    LuFactorization::new(a)?.solve(b)
}
