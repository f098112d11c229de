//! Signal-domain containers, QAM mapping, SFFT transforms and receive windows.
//!
//! Three domains appear along the modem chain:
//!
//! * [`DopplerDelayGrid`] is the `M×N` data grid `X`, entry `(k, l)` at delay bin
//!   `k` and Doppler bin `l`.
//! * [`TimeFrequencyGrid`] is the `M×N` grid `Y` (transmit) or `Z` (receive),
//!   entry `(m, n)` at subcarrier `m` of OFDM symbol `n`.
//! * [`FrameSignal`] is the serialized `(M + M_CP)·N` sample frame.

pub(crate) mod io;
mod qam;
pub(crate) mod sfft;
mod window;

pub use io::{read_grid_csv, write_grid_csv, GridAxes};
pub use qam::{qam_demap, qam_map, QamOrder};
pub use sfft::{sfft_inv, sfft_windowed};
pub use window::{make_window, raised_cosine_taper, SeparableWindow, WindowKind, DEFAULT_ROLLOFF};

use serde::{Deserialize, Serialize};

use crate::numerics::{czero, CMatrix, CVector};
use crate::{OtfsError, Result, Scalar};

/// Modem dimensions and link parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModemConfig {
    /// Subcarriers, equivalently delay bins.
    pub m: usize,
    /// OFDM symbols per frame, equivalently Doppler bins.
    pub n: usize,
    /// Cyclic-prefix length in samples.
    pub cp: usize,
    pub qam: QamOrder,
    /// Linear noise variance `σ²` per complex sample.
    pub noise_variance: f64,
}

impl ModemConfig {
    pub fn new(m: usize, n: usize, cp: usize) -> Result<Self> {
        let cfg = Self {
            m,
            n,
            cp,
            qam: QamOrder::Qam4,
            noise_variance: 0.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_qam(mut self, qam: QamOrder) -> Self {
        self.qam = qam;
        self
    }

    pub fn with_noise_variance(mut self, noise_variance: f64) -> Result<Self> {
        self.noise_variance = noise_variance;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(OtfsError::param("M", format!("must be at least 2, got {}", self.m)));
        }
        if self.n < 2 {
            return Err(OtfsError::param("N", format!("must be at least 2, got {}", self.n)));
        }
        if self.cp >= self.m {
            return Err(OtfsError::param(
                "M_CP",
                format!("must be below M = {}, got {}", self.m, self.cp),
            ));
        }
        if !self.noise_variance.is_finite() || self.noise_variance < 0.0 {
            return Err(OtfsError::param(
                "noise_variance",
                format!("must be finite and non-negative, got {}", self.noise_variance),
            ));
        }
        Ok(())
    }

    /// Samples per OFDM symbol including the prefix.
    pub fn symbol_len(&self) -> usize {
        self.m + self.cp
    }

    pub fn frame_len(&self) -> usize {
        self.symbol_len() * self.n
    }

    pub fn symbols_per_frame(&self) -> usize {
        self.m * self.n
    }

    pub fn bits_per_frame(&self) -> usize {
        self.symbols_per_frame() * self.qam.bits_per_symbol()
    }

    pub fn is_power_of_two(&self) -> bool {
        self.m.is_power_of_two() && self.n.is_power_of_two()
    }
}

fn check_matrix<T: Scalar>(a: &CMatrix<T>) -> Result<()> {
    if a.is_empty() {
        return Err(OtfsError::Empty);
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(OtfsError::param("grid", "entries must be finite"));
    }
    Ok(())
}

macro_rules! grid_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name<T>(CMatrix<T>);

        impl<T: Scalar> $name<T> {
            /// Wrap a matrix; rejects empty or non-finite input.
            pub fn new(matrix: CMatrix<T>) -> Result<Self> {
                check_matrix(&matrix)?;
                Ok(Self(matrix))
            }

            pub(crate) fn from_matrix_unchecked(matrix: CMatrix<T>) -> Self {
                Self(matrix)
            }

            pub fn zeros(rows: usize, cols: usize) -> Self {
                Self(CMatrix::from_elem((rows, cols), czero()))
            }

            pub fn from_fn(
                rows: usize,
                cols: usize,
                f: impl FnMut((usize, usize)) -> num_complex::Complex<T>,
            ) -> Self {
                Self(CMatrix::from_shape_fn((rows, cols), f))
            }

            pub fn as_matrix(&self) -> &CMatrix<T> {
                &self.0
            }

            pub fn into_matrix(self) -> CMatrix<T> {
                self.0
            }

            pub fn dim(&self) -> (usize, usize) {
                self.0.dim()
            }

            /// Errors unless the grid is `M×N` for `cfg`.
            pub fn check(&self, cfg: &ModemConfig) -> Result<()> {
                if self.0.dim() != (cfg.m, cfg.n) {
                    return Err(OtfsError::dims(
                        format!("{}x{}", cfg.m, cfg.n),
                        format!("{}x{}", self.0.nrows(), self.0.ncols()),
                    ));
                }
                Ok(())
            }
        }

        impl<T> std::ops::Index<(usize, usize)> for $name<T> {
            type Output = num_complex::Complex<T>;

            fn index(&self, (r, c): (usize, usize)) -> &Self::Output {
                &self.0[[r, c]]
            }
        }
    };
}

grid_type!(
    /// Doppler-delay data grid, entry `(k, l)`.
    DopplerDelayGrid
);
grid_type!(
    /// Time-frequency grid, entry `(m, n)`.
    TimeFrequencyGrid
);

/// Serialized transmit or receive frame, `vec` of the per-symbol columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSignal<T>(CVector<T>);

impl<T: Scalar> FrameSignal<T> {
    pub fn new(samples: CVector<T>) -> Result<Self> {
        if samples.is_empty() {
            return Err(OtfsError::Empty);
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(OtfsError::param("frame", "samples must be finite"));
        }
        Ok(Self(samples))
    }

    pub(crate) fn from_vector_unchecked(samples: CVector<T>) -> Self {
        Self(samples)
    }

    pub fn zeros(len: usize) -> Self {
        Self(CVector::from_elem(len, czero()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_vector(&self) -> &CVector<T> {
        &self.0
    }

    pub fn as_mut_vector(&mut self) -> &mut CVector<T> {
        &mut self.0
    }

    pub fn into_vector(self) -> CVector<T> {
        self.0
    }

    pub fn check(&self, cfg: &ModemConfig) -> Result<()> {
        if self.0.len() != cfg.frame_len() {
            return Err(OtfsError::dims(
                format!("frame of {} samples", cfg.frame_len()),
                self.0.len(),
            ));
        }
        Ok(())
    }

    /// The `M + M_CP` samples of OFDM symbol `n`.
    pub fn symbol(&self, cfg: &ModemConfig, n: usize) -> ndarray::ArrayView1<'_, num_complex::Complex<T>> {
        let len = cfg.symbol_len();
        self.0.slice(ndarray::s![n * len..(n + 1) * len])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(ModemConfig::new(8, 4, 2).is_ok());
        assert!(ModemConfig::new(1, 4, 0).is_err());
        assert!(ModemConfig::new(8, 1, 0).is_err());
        assert!(ModemConfig::new(8, 4, 8).is_err());
        let cfg = ModemConfig::new(8, 4, 2).unwrap();
        assert!(cfg.with_noise_variance(-1.0).is_err());
        assert!(cfg.with_noise_variance(f64::NAN).is_err());
        assert_eq!(cfg.frame_len(), 40);
        assert_eq!(cfg.with_qam(QamOrder::Qam16).bits_per_frame(), 128);
    }

    #[test]
    fn grids_reject_non_finite() {
        let mut a = CMatrix::<f64>::from_elem((2, 2), czero());
        assert!(DopplerDelayGrid::new(a.clone()).is_ok());
        a[[1, 1]].re = f64::INFINITY;
        assert!(DopplerDelayGrid::new(a).is_err());
        assert!(TimeFrequencyGrid::new(CMatrix::<f64>::from_elem((0, 2), czero())).is_err());
        assert!(FrameSignal::new(CVector::<f64>::from_elem(0, czero())).is_err());
    }

    #[test]
    fn dimension_check_against_config() {
        let cfg = ModemConfig::new(4, 2, 1).unwrap();
        assert!(DopplerDelayGrid::<f64>::zeros(4, 2).check(&cfg).is_ok());
        assert!(DopplerDelayGrid::<f64>::zeros(2, 4).check(&cfg).is_err());
        assert!(FrameSignal::<f64>::zeros(10).check(&cfg).is_ok());
        assert!(FrameSignal::<f64>::zeros(9).check(&cfg).is_err());
    }
}
