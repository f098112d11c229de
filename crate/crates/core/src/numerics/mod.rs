//! Complex linear-algebra kernels shared by the modems, channel and detectors.

mod conv;
mod counter;
mod fft;
mod solve;

pub use conv::circ_conv2d;
pub use counter::CmCounter;
pub use fft::{dft, dft_columns, dft_matrix, dft_rows, DftPlan, Direction};
pub use solve::{solve_dense, LuFactorization};

use ndarray::{s, Array1, Array2};
use num_complex::Complex;

use crate::{OtfsError, Result, Scalar};

pub type CMatrix<T> = Array2<Complex<T>>;
pub type CVector<T> = Array1<Complex<T>>;

#[inline]
pub(crate) fn czero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Scalar>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

/// `e^{jθ}` evaluated in `f64` and narrowed to `T`.
#[inline]
pub(crate) fn cis<T: Scalar>(theta: f64) -> Complex<T> {
    Complex::new(T::of(theta.cos()), T::of(theta.sin()))
}

/// Column-major vectorization: `vec(A)[m + M·n] = A[m][n]`.
pub fn vec<T: Scalar>(a: &CMatrix<T>) -> CVector<T> {
    a.t().iter().copied().collect()
}

/// Inverse of [`vec`].
pub fn unvec<T: Scalar>(v: &CVector<T>, rows: usize, cols: usize) -> Result<CMatrix<T>> {
    if rows == 0 || cols == 0 {
        return Err(OtfsError::Empty);
    }
    if v.len() != rows * cols {
        return Err(OtfsError::dims(format!("{rows}x{cols} = {}", rows * cols), v.len()));
    }
    Ok(CMatrix::from_shape_fn((rows, cols), |(m, n)| v[m + rows * n]))
}

pub fn identity<T: Scalar>(size: usize) -> CMatrix<T> {
    CMatrix::from_shape_fn((size, size), |(i, j)| if i == j { cone() } else { czero() })
}

pub fn diag<T: Scalar>(d: &[Complex<T>]) -> CMatrix<T> {
    CMatrix::from_shape_fn((d.len(), d.len()), |(i, j)| if i == j { d[i] } else { czero() })
}

/// Conjugate transpose.
pub fn adjoint<T: Scalar>(a: &CMatrix<T>) -> CMatrix<T> {
    a.t().mapv(|z| z.conj())
}

pub fn kron<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    ndarray::linalg::kron(a, b)
}

/// Circulant matrix whose first column is `c`.
pub fn circulant<T: Scalar>(c: &[Complex<T>]) -> CMatrix<T> {
    let n = c.len();
    CMatrix::from_shape_fn((n, n), |(i, j)| c[(i + n - j) % n])
}

/// Largest entry magnitude.
pub fn max_abs<T: Scalar>(a: &CMatrix<T>) -> T {
    a.iter().fold(T::zero(), |m, z| m.max(z.norm()))
}

pub fn frobenius<T: Scalar>(a: &CMatrix<T>) -> T {
    a.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt()
}

/// Largest entrywise distance between two equally shaped matrices.
pub fn max_abs_diff<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |m, (x, y)| m.max((*x - *y).norm()))
}

/// Largest distance of a square block from the circulant matrix built on its
/// first column.
pub fn circulant_deviation<T: Scalar>(a: &CMatrix<T>) -> T {
    let n = a.nrows();
    let mut dev = T::zero();
    for ((i, j), z) in a.indexed_iter() {
        dev = dev.max((*z - a[[(i + n - j) % n, 0]]).norm());
    }
    dev
}

/// Assemble the block-circulant matrix whose block `(r, c)` is
/// `blocks[(r - c) mod N]`.
pub fn block_circulant_assemble<T: Scalar>(blocks: &[CMatrix<T>]) -> Result<CMatrix<T>> {
    let first = blocks.first().ok_or(OtfsError::Empty)?;
    let m = first.nrows();
    if m == 0 {
        return Err(OtfsError::Empty);
    }
    for b in blocks {
        if b.dim() != (m, m) {
            return Err(OtfsError::dims(format!("{m}x{m} block"), format!("{:?}", b.dim())));
        }
    }
    let n = blocks.len();
    let mut out = CMatrix::from_elem((m * n, m * n), czero());
    for r in 0..n {
        for c in 0..n {
            out.slice_mut(s![r * m..(r + 1) * m, c * m..(c + 1) * m])
                .assign(&blocks[(r + n - c) % n]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMatrix<f64> {
        CMatrix::from_shape_fn((r, c), |_| {
            Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn vec_stacks_columns() {
        let a = ndarray::array![[c(1.0), c(3.0)], [c(2.0), c(4.0)]];
        let v = vec(&a);
        assert_eq!(v.to_vec(), vec![c(1.0), c(2.0), c(3.0), c(4.0)]);
    }

    #[test]
    fn vec_index_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = random_matrix(&mut rng, 3, 4);
        let v = vec(&a);
        for m in 0..3 {
            for n in 0..4 {
                assert_eq!(v[m + 3 * n], a[[m, n]]);
            }
        }
    }

    #[test]
    fn unvec_rejects_bad_length() {
        let v = CVector::<f64>::from_elem(7, czero());
        assert!(matches!(unvec(&v, 2, 3), Err(OtfsError::DimensionMismatch { .. })));
    }

    proptest! {
        #[test]
        fn unvec_inverts_vec(rows in 1usize..8, cols in 1usize..8, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&mut rng, rows, cols);
            prop_assert_eq!(unvec(&vec(&a), rows, cols).unwrap(), a);
        }
    }

    #[test]
    fn unvec_round_trip_5x7() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(&mut rng, 5, 7);
        assert_eq!(unvec(&vec(&a), 5, 7).unwrap(), a);
    }

    #[test]
    fn single_block_is_itself() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = random_matrix(&mut rng, 3, 3);
        assert_eq!(block_circulant_assemble(std::slice::from_ref(&a)).unwrap(), a);
    }

    #[test]
    fn two_block_circulant() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_matrix(&mut rng, 2, 2);
        let b = random_matrix(&mut rng, 2, 2);
        let bc = block_circulant_assemble(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(bc.slice(s![0..2, 0..2]), a);
        assert_eq!(bc.slice(s![0..2, 2..4]), b);
        assert_eq!(bc.slice(s![2..4, 0..2]), b);
        assert_eq!(bc.slice(s![2..4, 2..4]), a);
    }

    #[test]
    fn block_circulant_matches_block_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for n_blocks in [3usize, 4, 5] {
            let m = 2;
            let blocks: Vec<_> = (0..n_blocks).map(|_| random_matrix(&mut rng, m, m)).collect();
            let x = random_matrix(&mut rng, m, n_blocks);
            let got = block_circulant_assemble(&blocks).unwrap().dot(&vec(&x));
            for n in 0..n_blocks {
                let mut col = CVector::from_elem(m, czero());
                for k in 0..n_blocks {
                    col = col + blocks[(n + n_blocks - k) % n_blocks].dot(&x.column(k));
                }
                for i in 0..m {
                    assert!((got[n * m + i] - col[i]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn inconsistent_blocks_rejected() {
        let a = identity::<f64>(2);
        let b = identity::<f64>(3);
        assert!(block_circulant_assemble(&[a, b]).is_err());
        assert!(matches!(block_circulant_assemble::<f64>(&[]), Err(OtfsError::Empty)));
    }

    #[test]
    fn circulant_has_zero_deviation() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let col: Vec<_> = random_matrix(&mut rng, 6, 1).iter().copied().collect();
        let c = circulant(&col);
        assert_eq!(circulant_deviation(&c), 0.0);
        assert!(circulant_deviation(&random_matrix(&mut rng, 6, 6)) > 0.1);
    }
}
