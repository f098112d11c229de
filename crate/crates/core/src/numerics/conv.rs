use num_complex::Complex;

use super::{dft_columns, dft_rows, CMatrix, CmCounter, Direction};
use crate::{OtfsError, Result, Scalar};

/// 2D circular convolution,
/// `C[k][l] = Σ_p Σ_q A[p][q]·B[(k−p) mod M][(l−q) mod N]`.
///
/// Evaluated through the convolution theorem with unitary 2D DFTs.
pub fn circ_conv2d<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<CMatrix<T>> {
    if a.dim() != b.dim() {
        return Err(OtfsError::dims(format!("{:?}", a.dim()), format!("{:?}", b.dim())));
    }
    let (m, n) = a.dim();
    if m == 0 || n == 0 {
        return Err(OtfsError::Empty);
    }
    let mut cm = CmCounter::new();
    let to_freq = |x: &CMatrix<T>, cm: &mut CmCounter| -> Result<CMatrix<T>> {
        let mut f = x.clone();
        dft_columns(&mut f, Direction::Forward, "conv", cm)?;
        dft_rows(&mut f, Direction::Forward, "conv", cm)?;
        Ok(f)
    };
    let fa = to_freq(a, &mut cm)?;
    let fb = to_freq(b, &mut cm)?;
    let gain = T::of_usize(m * n).sqrt();
    let mut c = ndarray::Zip::from(&fa)
        .and(&fb)
        .map_collect(|x: &Complex<T>, y: &Complex<T>| (*x * *y).scale(gain));
    dft_columns(&mut c, Direction::Inverse, "conv", &mut cm)?;
    dft_rows(&mut c, Direction::Inverse, "conv", &mut cm)?;
    Ok(c)
}
