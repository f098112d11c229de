use super::EffectiveSystem;
use crate::grids::DopplerDelayGrid;
use crate::numerics::{adjoint, max_abs, unvec, vec, CMatrix, LuFactorization};
use crate::{OtfsError, Result, Scalar};

/// Zero forcing: solves `H_eff d̂ = d̃` through a stored LU factorization.
#[derive(Debug, Clone)]
pub struct ZfDetector<T> {
    lu: LuFactorization<T>,
    dims: (usize, usize),
}

impl<T: Scalar> ZfDetector<T> {
    pub fn new(sys: &EffectiveSystem<T>) -> Result<Self> {
        Ok(Self {
            lu: LuFactorization::new(sys.h_eff()?)?,
            dims: (sys.config().m, sys.config().n),
        })
    }

    pub fn detect(&self, received: &DopplerDelayGrid<T>) -> Result<DopplerDelayGrid<T>> {
        check_dims(received, self.dims)?;
        let d = self.lu.solve(&vec(received.as_matrix()))?;
        Ok(DopplerDelayGrid::from_matrix_unchecked(unvec(
            &d,
            self.dims.0,
            self.dims.1,
        )?))
    }
}

/// Linear MMSE for unit-energy symbols: `d̂ = H_effᴴ (H_eff H_effᴴ + C_ṽ)⁻¹ d̃`.
#[derive(Debug, Clone)]
pub struct MmseDetector<T> {
    lu: LuFactorization<T>,
    h_adj: CMatrix<T>,
    dims: (usize, usize),
}

impl<T: Scalar> MmseDetector<T> {
    pub fn new(sys: &EffectiveSystem<T>) -> Result<Self> {
        let h = sys.h_eff()?;
        let cov = sys.noise_covariance()?;
        if !is_hermitian_psd(cov) {
            return Err(OtfsError::NotPositiveSemiDefinite);
        }
        let h_adj = adjoint(h);
        let gram = h.dot(&h_adj) + cov;
        Ok(Self {
            lu: LuFactorization::new(&gram)?,
            h_adj,
            dims: (sys.config().m, sys.config().n),
        })
    }

    pub fn detect(&self, received: &DopplerDelayGrid<T>) -> Result<DopplerDelayGrid<T>> {
        check_dims(received, self.dims)?;
        let u = self.lu.solve(&vec(received.as_matrix()))?;
        let d = self.h_adj.dot(&u);
        Ok(DopplerDelayGrid::from_matrix_unchecked(unvec(
            &d,
            self.dims.0,
            self.dims.1,
        )?))
    }
}

pub fn zf_detect<T: Scalar>(received: &DopplerDelayGrid<T>, sys: &EffectiveSystem<T>) -> Result<DopplerDelayGrid<T>> {
    ZfDetector::new(sys)?.detect(received)
}

pub fn mmse_detect<T: Scalar>(received: &DopplerDelayGrid<T>, sys: &EffectiveSystem<T>) -> Result<DopplerDelayGrid<T>> {
    MmseDetector::new(sys)?.detect(received)
}

fn check_dims<T: Scalar>(g: &DopplerDelayGrid<T>, dims: (usize, usize)) -> Result<()> {
    if g.dim() != dims {
        return Err(OtfsError::dims(format!("{dims:?} grid"), format!("{:?}", g.dim())));
    }
    Ok(())
}

/// Hermitian check plus a Cholesky factorization of `C + δI`, with `δ` a
/// small multiple of the largest entry.
pub(crate) fn is_hermitian_psd<T: Scalar>(c: &CMatrix<T>) -> bool {
    let n = c.nrows();
    if c.ncols() != n {
        return false;
    }
    let scale = max_abs(c).max(T::min_positive_value());
    let tol = T::of(1e-10) * scale;
    for i in 0..n {
        for j in 0..n {
            if (c[[i, j]] - c[[j, i]].conj()).norm() > tol {
                return false;
            }
        }
    }
    let mut l = c.clone();
    for i in 0..n {
        l[[i, i]].re = l[[i, i]].re + tol;
    }
    for j in 0..n {
        let mut d = l[[j, j]].re;
        for k in 0..j {
            d = d - l[[j, k]].norm_sqr();
        }
        if d.is_nan() || d <= T::zero() {
            return false;
        }
        let d = d.sqrt();
        l[[j, j]] = num_complex::Complex::new(d, T::zero());
        for i in j + 1..n {
            let mut s = l[[i, j]];
            for k in 0..j {
                s = s - l[[i, k]] * l[[j, k]].conj();
            }
            l[[i, j]] = s.unscale(d);
        }
    }
    true
}
