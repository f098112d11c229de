//! Block-circulant solve by 2D DFT diagonalization.
//!
//! When every block `W̄ᶜ𝓗_k` is circulant, `H_eff` is block circulant with
//! circulant blocks and `d̃ = H_eff d` is the 2D circular convolution
//! `X̃ = 𝓗_DD,w ⊛ X`. Its eigenvalues are the unnormalized 2D DFT of
//! `𝓗_DD,w`, so ZF reduces to a pointwise division in the 2D DFT domain.

use num_complex::Complex;

use super::EffectiveSystem;
use crate::grids::DopplerDelayGrid;
use crate::numerics::{circulant_deviation, dft_columns, dft_rows, CMatrix, CmCounter, Direction};
use crate::{OtfsError, Result, Scalar};

/// Largest tolerated entry deviation of a block from circulant structure.
pub const CIRCULANT_TOL: f64 = 1e-10;
/// Relative threshold under which an eigenvalue counts as zero.
const EIG_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct FastBlockSolver<T> {
    /// Eigenvalues of `H_eff` laid out on the `M×N` 2D DFT grid.
    eigenvalues: CMatrix<T>,
}

impl<T: Scalar> FastBlockSolver<T> {
    pub fn new(sys: &EffectiveSystem<T>) -> Result<Self> {
        let cfg = sys.config();
        let (m, n) = (cfg.m, cfg.n);
        let wbar = if sys.window().is_freq_rectangular() {
            None
        } else {
            Some(sys.window().freq_transformed())
        };
        let mut dd = CMatrix::from_elem((m, n), Complex::new(T::zero(), T::zero()));
        for (k, tap) in sys.taps().iter().enumerate() {
            let block = match &wbar {
                Some(wb) => wb.dot(tap),
                None => tap.clone(),
            };
            let deviation = circulant_deviation(&block).as_f64();
            if deviation > CIRCULANT_TOL {
                return Err(OtfsError::NotCirculant { block: k, deviation });
            }
            dd.column_mut(k).assign(&block.column(0));
        }
        let mut cm = CmCounter::new();
        dft_columns(&mut dd, Direction::Forward, "fast_solve", &mut cm)?;
        dft_rows(&mut dd, Direction::Forward, "fast_solve", &mut cm)?;
        let gain = T::of_usize(m * n).sqrt();
        dd.mapv_inplace(|z| z.scale(gain));
        let largest = dd.iter().fold(T::zero(), |a, z| a.max(z.norm()));
        let tol = T::of(EIG_TOL) * largest;
        if let Some(small) = dd.iter().map(|z| z.norm()).find(|&v| v.is_nan() || v <= tol) {
            return Err(OtfsError::Singular {
                pivot: small.as_f64(),
                tolerance: tol.as_f64(),
            });
        }
        Ok(Self { eigenvalues: dd })
    }

    pub fn eigenvalues(&self) -> &CMatrix<T> {
        &self.eigenvalues
    }

    pub fn solve(&self, received: &DopplerDelayGrid<T>) -> Result<DopplerDelayGrid<T>> {
        if received.dim() != self.eigenvalues.dim() {
            return Err(OtfsError::dims(
                format!("{:?} grid", self.eigenvalues.dim()),
                format!("{:?}", received.dim()),
            ));
        }
        let mut cm = CmCounter::new();
        let mut x = received.as_matrix().clone();
        dft_columns(&mut x, Direction::Forward, "fast_solve", &mut cm)?;
        dft_rows(&mut x, Direction::Forward, "fast_solve", &mut cm)?;
        x.zip_mut_with(&self.eigenvalues, |v, e| *v = *v / *e);
        dft_columns(&mut x, Direction::Inverse, "fast_solve", &mut cm)?;
        dft_rows(&mut x, Direction::Inverse, "fast_solve", &mut cm)?;
        Ok(DopplerDelayGrid::from_matrix_unchecked(x))
    }
}

pub fn fast_block_solve<T: Scalar>(
    received: &DopplerDelayGrid<T>,
    sys: &EffectiveSystem<T>,
) -> Result<DopplerDelayGrid<T>> {
    FastBlockSolver::new(sys)?.solve(received)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{assemble_test_channel, BlockFadingChannel, LtvChannel};
    use crate::detect::{assemble_effective, zf_detect};
    use crate::grids::{make_window, ModemConfig, SeparableWindow, WindowKind};
    use crate::numerics::max_abs_diff;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rc(rng: &mut ChaCha8Rng) -> Complex<f64> {
        Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }

    #[test]
    fn matches_dense_zf_on_block_fading() {
        let mut rng = ChaCha8Rng::seed_from_u64(120);
        let cfg = ModemConfig::new(16, 8, 4).unwrap();
        for kind in [WindowKind::Rectangular, WindowKind::TimeTapered { rolloff: 0.5 }] {
            let ch = BlockFadingChannel::<f64>::random(&mut rng, &cfg, 4).unwrap();
            let w = make_window::<f64>(kind, 16, 8).unwrap();
            let sys = assemble_effective(&ch, &w, &cfg).unwrap();
            let y = DopplerDelayGrid::from_fn(16, 8, |_| rc(&mut rng));
            let dense = zf_detect(&y, &sys).unwrap();
            let fast = fast_block_solve(&y, &sys).unwrap();
            assert!(max_abs_diff(dense.as_matrix(), fast.as_matrix()) < 1e-9);
        }
    }

    #[test]
    fn identity_channel_is_identity_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(121);
        let cfg = ModemConfig::new(8, 4, 1).unwrap();
        let sys = assemble_effective(&LtvChannel::identity(), &SeparableWindow::rectangular(8, 4), &cfg).unwrap();
        let y = DopplerDelayGrid::from_fn(8, 4, |_| rc(&mut rng));
        assert!(max_abs_diff(fast_block_solve(&y, &sys).unwrap().as_matrix(), y.as_matrix()) < 1e-14);
    }

    #[test]
    fn rejects_within_symbol_variation() {
        let mut rng = ChaCha8Rng::seed_from_u64(122);
        let cfg = ModemConfig::new(8, 4, 2).unwrap();
        let ch = assemble_test_channel(&mut rng, &cfg);
        let sys = assemble_effective(&ch, &SeparableWindow::rectangular(8, 4), &cfg).unwrap();
        assert!(matches!(
            FastBlockSolver::new(&sys),
            Err(OtfsError::NotCirculant { .. })
        ));
    }

    #[test]
    fn circulant_frequency_window_is_accepted() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let cfg = ModemConfig::new(8, 4, 2).unwrap();
        let ch = BlockFadingChannel::<f64>::random(&mut rng, &cfg, 3).unwrap();
        let freq: Vec<f64> = (0..8).map(|i| 0.5 + 0.1 * i as f64).collect();
        let w = SeparableWindow::from_real(&freq, &[1.0, 0.8, 0.8, 1.0]).unwrap();
        let sys = assemble_effective(&ch, &w, &cfg).unwrap();
        let y = DopplerDelayGrid::from_fn(8, 4, |_| rc(&mut rng));
        let dense = zf_detect(&y, &sys).unwrap();
        assert!(max_abs_diff(fast_block_solve(&y, &sys).unwrap().as_matrix(), dense.as_matrix()) < 1e-9);
    }
}
