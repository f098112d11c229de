//! OFDM-based OTFS modulators and demodulators.
//!
//! [`reference`] follows the textbook cascade: `SFFT⁻¹` then an OFDM
//! modulator at the transmitter, OFDM demodulator then windowed `SFFT` at the
//! receiver. [`fast`] exploits that the OFDM IDFT cancels the M-point DFT of
//! `SFFT⁻¹` (and the DFT at the receiver cancels the IDFT of `SFFT`), which
//! leaves only N-point transforms along the grid rows.
//!
//! Both serialize the `(M + M_CP)×N` signal matrix column by column.

pub mod fast;
pub mod reference;

pub use fast::{demodulate_fast, modulate_fast};
pub use reference::{demodulate_ofdm, demodulate_reference, modulate_ofdm, modulate_reference, CpMatrices};

use ndarray::s;

use crate::grids::{FrameSignal, ModemConfig};
use crate::numerics::{czero, CMatrix, CVector};
use crate::{Result, Scalar};

/// Stage label of the OFDM M-point transforms.
pub const STAGE_OFDM: &str = "ofdm";
/// Stage label of the row transforms in the reduced structures.
pub const STAGE_ROWS: &str = "rows";

/// Prepend the last `M_CP` samples of each column and serialize column-major.
pub(crate) fn add_cp_and_serialize<T: Scalar>(body: &CMatrix<T>, cfg: &ModemConfig) -> FrameSignal<T> {
    let (m, cp) = (cfg.m, cfg.cp);
    let len = cfg.symbol_len();
    let mut frame = CVector::from_elem(cfg.frame_len(), czero());
    for (n, col) in body.columns().into_iter().enumerate() {
        let mut sym = frame.slice_mut(s![n * len..(n + 1) * len]);
        sym.slice_mut(s![..cp]).assign(&col.slice(s![m - cp..]));
        sym.slice_mut(s![cp..]).assign(&col);
    }
    FrameSignal::from_vector_unchecked(frame)
}

/// Drop each symbol's prefix and stack the remaining `M` samples as columns.
pub(crate) fn remove_cp<T: Scalar>(r: &FrameSignal<T>, cfg: &ModemConfig) -> Result<CMatrix<T>> {
    r.check(cfg)?;
    let mut body = CMatrix::from_elem((cfg.m, cfg.n), czero());
    for (n, mut col) in body.columns_mut().into_iter().enumerate() {
        col.assign(&r.symbol(cfg, n).slice(s![cfg.cp..]));
    }
    Ok(body)
}
