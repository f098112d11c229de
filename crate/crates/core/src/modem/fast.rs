//! Reduced modem structure.
//!
//! Transmitter: `S = A_CP X F_Nᴴ`, i.e. `M` N-point IDFTs along the rows of
//! `X`, then a CP per column. Receiver (rectangular frequency window only):
//! CP removal, scaling of symbol `n` by `wʳ_n`, then `M` N-point DFTs along
//! the rows.

use super::{add_cp_and_serialize, remove_cp, STAGE_ROWS};
use crate::grids::{sfft::STAGE_WINDOW, DopplerDelayGrid, FrameSignal, ModemConfig, SeparableWindow};
use crate::numerics::{dft_rows, CmCounter, Direction};
use crate::{OtfsError, Result, Scalar};

pub fn modulate_fast<T: Scalar>(
    x: &DopplerDelayGrid<T>,
    cfg: &ModemConfig,
    cm: &mut CmCounter,
) -> Result<FrameSignal<T>> {
    x.check(cfg)?;
    let mut body = x.as_matrix().clone();
    dft_rows(&mut body, Direction::Inverse, STAGE_ROWS, cm)?;
    Ok(add_cp_and_serialize(&body, cfg))
}

/// Fails with [`OtfsError::Unsupported`] for a non-rectangular frequency window.
pub fn demodulate_fast<T: Scalar>(
    r: &FrameSignal<T>,
    w: &SeparableWindow<T>,
    cfg: &ModemConfig,
    cm: &mut CmCounter,
) -> Result<DopplerDelayGrid<T>> {
    if w.dims() != (cfg.m, cfg.n) {
        return Err(OtfsError::dims(
            format!("{}x{} window", cfg.m, cfg.n),
            format!("{:?}", w.dims()),
        ));
    }
    if !w.is_freq_rectangular() {
        return Err(OtfsError::Unsupported(
            "the reduced demodulator requires a rectangular frequency window".into(),
        ));
    }
    let mut body = remove_cp(r, cfg)?;
    for (mut col, &wn) in body.columns_mut().into_iter().zip(w.time()) {
        col.mapv_inplace(|z| z * wn);
    }
    let samples = (cfg.m * cfg.n) as u64;
    if w.is_real() {
        cm.charge_real_scaling(STAGE_WINDOW, samples);
    } else {
        cm.charge(STAGE_WINDOW, samples);
    }
    dft_rows(&mut body, Direction::Forward, STAGE_ROWS, cm)?;
    Ok(DopplerDelayGrid::from_matrix_unchecked(body))
}
