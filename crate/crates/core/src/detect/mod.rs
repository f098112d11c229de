//! Linear detection over `d̃ = (𝓦̄ᶜ 𝓗_BC) d + vec(Ṽ)`.
//!
//! [`EffectiveSystem`] holds the genie channel in Doppler-tap form, the dense
//! effective matrix and the exact covariance of the windowed noise. The
//! detectors are standard ZF and linear MMSE plus a 2D-DFT diagonalizing
//! solver for the block-fading regime where every block is circulant.

mod ber;
mod fast;
mod linear;

pub use ber::{ber, write_ber_csv, BerRow, BitErrorRate};
pub use fast::{fast_block_solve, FastBlockSolver};
pub use linear::{mmse_detect, zf_detect, MmseDetector, ZfDetector};

use num_complex::Complex;

use crate::channel::{build_doppler_taps, Channel};
use crate::grids::{DopplerDelayGrid, ModemConfig, SeparableWindow};
use crate::numerics::{block_circulant_assemble, circulant, czero, kron, unvec, vec, CMatrix};
use crate::{OtfsError, Result, Scalar};

/// Largest `M·N` for which dense `MN×MN` matrices are materialized.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Clone)]
pub struct EffectiveSystem<T> {
    cfg: ModemConfig,
    window: SeparableWindow<T>,
    taps: Vec<CMatrix<T>>,
    dense: Option<DenseParts<T>>,
}

#[derive(Debug, Clone)]
struct DenseParts<T> {
    h_eff: CMatrix<T>,
    noise_cov: CMatrix<T>,
}

/// Build the effective system for `ch` seen through window `w` at the noise
/// level in `cfg`. Dense parts are skipped above [`DENSE_LIMIT`].
pub fn assemble_effective<T: Scalar, C: Channel<T> + ?Sized>(
    ch: &C,
    w: &SeparableWindow<T>,
    cfg: &ModemConfig,
) -> Result<EffectiveSystem<T>> {
    cfg.validate()?;
    if w.dims() != (cfg.m, cfg.n) {
        return Err(OtfsError::dims(
            format!("{}x{} window", cfg.m, cfg.n),
            format!("{:?}", w.dims()),
        ));
    }
    let taps = build_doppler_taps(ch, w.time(), cfg)?;
    EffectiveSystem::from_taps(taps, w.clone(), *cfg)
}

impl<T: Scalar> EffectiveSystem<T> {
    /// Assemble from precomputed Doppler taps `𝓗_k`.
    pub fn from_taps(taps: Vec<CMatrix<T>>, window: SeparableWindow<T>, cfg: ModemConfig) -> Result<Self> {
        if taps.len() != cfg.n || taps.iter().any(|t| t.dim() != (cfg.m, cfg.m)) {
            return Err(OtfsError::dims(
                format!("{} taps of {}x{}", cfg.n, cfg.m, cfg.m),
                format!("{} taps", taps.len()),
            ));
        }
        let dense = if cfg.symbols_per_frame() <= DENSE_LIMIT {
            let wbar = window.freq_transformed();
            let h_bc = block_circulant_assemble(&taps)?;
            let mut h_eff = h_bc;
            // (I_N ⊗ W̄ᶜ)·𝓗_BC, one block row at a time.
            let m = cfg.m;
            for r in 0..cfg.n {
                let rows = h_eff.slice(ndarray::s![r * m..(r + 1) * m, ..]).to_owned();
                let mixed = wbar.dot(&rows);
                h_eff.slice_mut(ndarray::s![r * m..(r + 1) * m, ..]).assign(&mixed);
            }
            let noise_cov = noise_covariance(&window, cfg.noise_variance);
            Some(DenseParts { h_eff, noise_cov })
        } else {
            None
        };
        Ok(Self {
            cfg,
            window,
            taps,
            dense,
        })
    }

    pub fn config(&self) -> &ModemConfig {
        &self.cfg
    }

    pub fn window(&self) -> &SeparableWindow<T> {
        &self.window
    }

    /// Doppler taps `𝓗_0 … 𝓗_{N−1}`.
    pub fn taps(&self) -> &[CMatrix<T>] {
        &self.taps
    }

    fn dense(&self) -> Result<&DenseParts<T>> {
        self.dense.as_ref().ok_or_else(|| {
            OtfsError::Unsupported(format!(
                "dense system needs M·N ≤ {DENSE_LIMIT}, got {}",
                self.cfg.symbols_per_frame()
            ))
        })
    }

    /// `𝓦̄ᶜ 𝓗_BC`.
    pub fn h_eff(&self) -> Result<&CMatrix<T>> {
        Ok(&self.dense()?.h_eff)
    }

    /// Covariance of `vec(Ṽ)`.
    pub fn noise_covariance(&self) -> Result<&CMatrix<T>> {
        Ok(&self.dense()?.noise_cov)
    }

    /// Noise-free receiver output for data grid `x`.
    pub fn apply(&self, x: &DopplerDelayGrid<T>) -> Result<DopplerDelayGrid<T>> {
        x.check(&self.cfg)?;
        let d = self.h_eff()?.dot(&vec(x.as_matrix()));
        Ok(DopplerDelayGrid::from_matrix_unchecked(unvec(
            &d, self.cfg.m, self.cfg.n,
        )?))
    }
}

/// `σ²·(Ŵʳ ⊗ Qᶜ)` with `Qᶜ = F_Mᴴ Wᶜ Wᶜᴴ F_M` and `Ŵʳ` circulant with first
/// column `c[n] = (1/N) Σ_i |wʳ_i|² e^{−j2πni/N}`.
pub fn noise_covariance<T: Scalar>(w: &SeparableWindow<T>, noise_variance: f64) -> CMatrix<T> {
    let power: Vec<Complex<T>> = w.freq().iter().map(|z| Complex::new(z.norm_sqr(), T::zero())).collect();
    let q = SeparableWindow::new(power, vec![Complex::new(T::one(), T::zero())])
        .expect("non-empty finite window")
        .freq_transformed();
    let n = w.time().len();
    let first_col: Vec<Complex<T>> = (0..n)
        .map(|k| {
            w.time().iter().enumerate().fold(czero::<T>(), |acc, (i, z)| {
                let theta = -std::f64::consts::TAU * ((k * i) % n) as f64 / n as f64;
                acc + crate::numerics::cis::<T>(theta).scale(z.norm_sqr())
            }) / T::of_usize(n)
        })
        .collect();
    let time_part = circulant(&first_col);
    kron(&time_part, &q).mapv(|z| z.scale(T::of(noise_variance)))
}
