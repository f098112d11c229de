//! Per-symbol channel matrices `H_n`, Doppler taps `𝓗_k` and the windowed
//! Doppler-delay response `𝓗_DD,w`.

use std::io::Write;

use num_complex::Complex;

use super::{guard_interval_ok, Channel};
use crate::grids::{io::sci, ModemConfig, SeparableWindow};
use crate::numerics::{cis, czero, CMatrix};
use crate::{OtfsError, Result, Scalar};

/// `Ȟ_n`: the `(M+M_CP)×(M+M_CP)` banded convolution matrix of symbol `n`,
/// `Ȟ_n[a][b] = h(n(M+M_CP) + a, a − b)` for `0 ≤ a − b < L`.
///
/// Samples of symbol `n − 1` that the channel would smear into symbol `n`
/// are outside this matrix; they vanish after CP removal when `L − 1 ≤ M_CP`.
pub fn build_symbol_matrix<T: Scalar, C: Channel<T> + ?Sized>(
    ch: &C,
    n: usize,
    cfg: &ModemConfig,
) -> Result<CMatrix<T>> {
    if n >= cfg.n {
        return Err(OtfsError::param(
            "n",
            format!("symbol index {n} out of range 0..{}", cfg.n),
        ));
    }
    let len = cfg.symbol_len();
    let base = n * len;
    let taps = ch.len();
    Ok(CMatrix::from_shape_fn((len, len), |(a, b)| {
        if a >= b && a - b < taps {
            ch.gain(base + a, a - b)
        } else {
            czero()
        }
    }))
}

/// `H_n = R_CP Ȟ_n A_CP`, evaluated entrywise: column `j` collects the
/// direct path from body sample `j` plus, for `j ≥ M − M_CP`, the path from
/// its copy in the prefix.
pub fn build_hn<T: Scalar, C: Channel<T> + ?Sized>(ch: &C, n: usize, cfg: &ModemConfig) -> Result<CMatrix<T>> {
    if n >= cfg.n {
        return Err(OtfsError::param(
            "n",
            format!("symbol index {n} out of range 0..{}", cfg.n),
        ));
    }
    guard_interval_ok(ch, cfg);
    let (m, cp) = (cfg.m, cfg.cp);
    let base = n * cfg.symbol_len();
    let taps = ch.len();
    let breve = |a: usize, b: usize| {
        if a >= b && a - b < taps {
            ch.gain(base + a, a - b)
        } else {
            czero()
        }
    };
    Ok(CMatrix::from_shape_fn((m, m), |(i, j)| {
        let direct = breve(cp + i, cp + j);
        if j + cp >= m {
            direct + breve(cp + i, j + cp - m)
        } else {
            direct
        }
    }))
}

/// `𝓗_k = (1/N) Σ_i H_i wʳ_i e^{−j2πki/N}` from precomputed `H_i`.
pub fn doppler_taps_from_hn<T: Scalar>(hn: &[CMatrix<T>], time_window: &[Complex<T>]) -> Result<Vec<CMatrix<T>>> {
    let n = hn.len();
    if n == 0 {
        return Err(OtfsError::Empty);
    }
    if time_window.len() != n {
        return Err(OtfsError::dims(format!("time window of length {n}"), time_window.len()));
    }
    let dim = hn[0].dim();
    let inv_n = T::one() / T::of_usize(n);
    Ok((0..n)
        .map(|k| {
            let mut acc = CMatrix::from_elem(dim, czero());
            for (i, (h, &w)) in hn.iter().zip(time_window).enumerate() {
                let theta = -std::f64::consts::TAU * ((k * i) % n) as f64 / n as f64;
                let coef = (w * cis::<T>(theta)).scale(inv_n);
                acc.zip_mut_with(h, |a, &b| *a = *a + b * coef);
            }
            acc
        })
        .collect())
}

/// Doppler taps for `ch` under the time window `wʳ`.
pub fn build_doppler_taps<T: Scalar, C: Channel<T> + ?Sized>(
    ch: &C,
    time_window: &[Complex<T>],
    cfg: &ModemConfig,
) -> Result<Vec<CMatrix<T>>> {
    if time_window.len() != cfg.n {
        return Err(OtfsError::dims(
            format!("time window of length {}", cfg.n),
            time_window.len(),
        ));
    }
    let hn = (0..cfg.n).map(|n| build_hn(ch, n, cfg)).collect::<Result<Vec<_>>>()?;
    doppler_taps_from_hn(&hn, time_window)
}

/// `M×N` windowed Doppler-delay impulse response; column `l` is the first
/// column of `W̄ᶜ 𝓗_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct DopplerDelayResponse<T>(CMatrix<T>);

impl<T: Scalar> DopplerDelayResponse<T> {
    pub fn as_matrix(&self) -> &CMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.0
    }

    /// `(delay, Doppler)` bin of the largest magnitude.
    pub fn peak(&self) -> (usize, usize) {
        self.0
            .indexed_iter()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(idx, _)| idx)
            .unwrap_or((0, 0))
    }

    /// CSV dump with header `k,l,re,im,abs`, row-major.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "l", "re", "im", "abs"])?;
        for ((k, l), z) in self.0.indexed_iter() {
            w.write_record([k.to_string(), l.to_string(), sci(z.re), sci(z.im), sci(z.norm())])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn build_dd_response<T: Scalar>(taps: &[CMatrix<T>], w: &SeparableWindow<T>) -> Result<DopplerDelayResponse<T>> {
    let n = taps.len();
    if n == 0 {
        return Err(OtfsError::Empty);
    }
    let m = w.freq().len();
    if let Some(bad) = taps.iter().find(|t| t.dim() != (m, m)) {
        return Err(OtfsError::dims(
            format!("{m}x{m} Doppler tap"),
            format!("{:?}", bad.dim()),
        ));
    }
    let wbar = w.freq_transformed();
    let mut dd = CMatrix::from_elem((m, n), czero());
    for (l, tap) in taps.iter().enumerate() {
        let col: crate::numerics::CVector<T> = wbar.dot(&tap.column(0));
        dd.column_mut(l).assign(&col);
    }
    Ok(DopplerDelayResponse(dd))
}
