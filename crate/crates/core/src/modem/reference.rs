//! Reference OTFS modem: `S = A_CP F_Mᴴ Y` with `Y = SFFT⁻¹(X)`, and at the
//! receiver `Z` from per-symbol CP removal and M-point DFTs, followed by the
//! windowed `SFFT`.

use ndarray::s;

use super::{add_cp_and_serialize, remove_cp, STAGE_OFDM};
use crate::grids::{
    sfft_inv, sfft_windowed, DopplerDelayGrid, FrameSignal, ModemConfig, SeparableWindow, TimeFrequencyGrid,
};
use crate::numerics::{cone, czero, dft_columns, CMatrix, CmCounter, Direction};
use crate::{OtfsError, Result, Scalar};

/// Dense CP addition/removal matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct CpMatrices<T> {
    /// `(M + M_CP)×M`, `[G_CPᵀ, I_Mᵀ]ᵀ`.
    pub add: CMatrix<T>,
    /// `M×(M + M_CP)`, `[0, I_M]`.
    pub remove: CMatrix<T>,
    /// `M_CP×M`, the last `M_CP` rows of `I_M`.
    pub prefix: CMatrix<T>,
}

impl<T: Scalar> CpMatrices<T> {
    pub fn new(m: usize, cp: usize) -> Result<Self> {
        if m == 0 {
            return Err(OtfsError::Empty);
        }
        if cp > m {
            return Err(OtfsError::param("M_CP", format!("must not exceed M = {m}, got {cp}")));
        }
        let unit = |on: bool| if on { cone() } else { czero() };
        let prefix = CMatrix::from_shape_fn((cp, m), |(i, j)| unit(j == m - cp + i));
        let mut add = CMatrix::from_elem((m + cp, m), czero());
        add.slice_mut(s![..cp, ..]).assign(&prefix);
        for i in 0..m {
            add[[cp + i, i]] = cone();
        }
        let remove = CMatrix::from_shape_fn((m, m + cp), |(i, j)| unit(j == cp + i));
        Ok(Self { add, remove, prefix })
    }
}

/// OFDM modulation of a time-frequency grid: per-column M-point IDFT, CP
/// insertion and serialization.
pub fn modulate_ofdm<T: Scalar>(
    y: &TimeFrequencyGrid<T>,
    cfg: &ModemConfig,
    cm: &mut CmCounter,
) -> Result<FrameSignal<T>> {
    y.check(cfg)?;
    let mut body = y.as_matrix().clone();
    dft_columns(&mut body, Direction::Inverse, STAGE_OFDM, cm)?;
    Ok(add_cp_and_serialize(&body, cfg))
}

pub fn modulate_reference<T: Scalar>(
    x: &DopplerDelayGrid<T>,
    cfg: &ModemConfig,
    cm: &mut CmCounter,
) -> Result<FrameSignal<T>> {
    x.check(cfg)?;
    let y = sfft_inv(x, cm)?;
    modulate_ofdm(&y, cfg, cm)
}

/// Column `n` of the result is `F_M R_CP` applied to symbol `n` of `r`.
pub fn demodulate_ofdm<T: Scalar>(
    r: &FrameSignal<T>,
    cfg: &ModemConfig,
    cm: &mut CmCounter,
) -> Result<TimeFrequencyGrid<T>> {
    let mut z = remove_cp(r, cfg)?;
    dft_columns(&mut z, Direction::Forward, STAGE_OFDM, cm)?;
    Ok(TimeFrequencyGrid::from_matrix_unchecked(z))
}

pub fn demodulate_reference<T: Scalar>(
    r: &FrameSignal<T>,
    w: &SeparableWindow<T>,
    cfg: &ModemConfig,
    cm: &mut CmCounter,
) -> Result<DopplerDelayGrid<T>> {
    let z = demodulate_ofdm(r, cfg, cm)?;
    sfft_windowed(&z, w, cm)
}
