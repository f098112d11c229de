//! Separable receive windows `w_{m,n} = wᶜ_m · wʳ_n`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::numerics::{adjoint, cone, dft_matrix, diag, CMatrix, Direction};
use crate::{OtfsError, Result, Scalar};

pub const DEFAULT_ROLLOFF: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WindowKind {
    Rectangular,
    /// Rectangular in frequency, raised-cosine edges across OFDM symbols.
    TimeTapered {
        rolloff: f64,
    },
}

/// Frequency window `wᶜ` (length `M`) and time window `wʳ` (length `N`).
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableWindow<T> {
    freq: Vec<Complex<T>>,
    time: Vec<Complex<T>>,
}

impl<T: Scalar> SeparableWindow<T> {
    pub fn new(freq: Vec<Complex<T>>, time: Vec<Complex<T>>) -> Result<Self> {
        if freq.is_empty() || time.is_empty() {
            return Err(OtfsError::Empty);
        }
        if freq.iter().chain(&time).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(OtfsError::param("window", "coefficients must be finite"));
        }
        Ok(Self { freq, time })
    }

    /// Real-valued window from real coefficient slices.
    pub fn from_real(freq: &[T], time: &[T]) -> Result<Self> {
        let lift = |v: &[T]| v.iter().map(|&x| Complex::new(x, T::zero())).collect();
        Self::new(lift(freq), lift(time))
    }

    pub fn rectangular(m: usize, n: usize) -> Self {
        Self {
            freq: vec![cone(); m],
            time: vec![cone(); n],
        }
    }

    pub fn freq(&self) -> &[Complex<T>] {
        &self.freq
    }

    pub fn time(&self) -> &[Complex<T>] {
        &self.time
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.freq.len(), self.time.len())
    }

    pub fn weight(&self, m: usize, n: usize) -> Complex<T> {
        self.freq[m] * self.time[n]
    }

    pub fn is_freq_rectangular(&self) -> bool {
        self.freq.iter().all(|&z| z == cone())
    }

    pub fn is_rectangular(&self) -> bool {
        self.is_freq_rectangular() && self.time.iter().all(|&z| z == cone())
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.freq.iter().chain(&self.time).all(|z| z.im == T::zero())
    }

    /// Full `M×N` window matrix.
    pub fn matrix(&self) -> CMatrix<T> {
        CMatrix::from_shape_fn(self.dims(), |(m, n)| self.weight(m, n))
    }

    /// `Wᶜ = diag(wᶜ)`.
    pub fn freq_diag(&self) -> CMatrix<T> {
        diag(&self.freq)
    }

    /// `Wʳ = diag(wʳ)`.
    pub fn time_diag(&self) -> CMatrix<T> {
        diag(&self.time)
    }

    /// Delay-domain image of the frequency window, `W̄ᶜ = F_Mᴴ Wᶜ F_M`.
    pub fn freq_transformed(&self) -> CMatrix<T> {
        let f = dft_matrix::<T>(self.freq.len(), Direction::Forward);
        let mut wf = f.clone();
        for (mut row, w) in wf.rows_mut().into_iter().zip(&self.freq) {
            row.mapv_inplace(|z| z * *w);
        }
        adjoint(&f).dot(&wf)
    }
}

/// Raised-cosine edge taper of `len` points with roll-off `rho ∈ [0, 1]`.
///
/// `⌈ρ·len/2⌉` points at each end follow `sin²(π(i + ½)/(2T))`, the middle is
/// flat, and the result is scaled so that `Σ w² / len = 1`.
pub fn raised_cosine_taper<T: Scalar>(len: usize, rho: f64) -> Result<Vec<T>> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(OtfsError::param("rolloff", format!("must lie in [0, 1], got {rho}")));
    }
    if len == 0 {
        return Err(OtfsError::Empty);
    }
    let edge = (rho * len as f64 / 2.0).ceil() as usize;
    let raw: Vec<f64> = (0..len)
        .map(|i| {
            let d = i.min(len - 1 - i);
            if d < edge {
                let s = (std::f64::consts::PI * (d as f64 + 0.5) / (2.0 * edge as f64)).sin();
                s * s
            } else {
                1.0
            }
        })
        .collect();
    let energy = raw.iter().map(|w| w * w).sum::<f64>() / len as f64;
    let gain = energy.sqrt().recip();
    Ok(raw.into_iter().map(|w| T::of(w * gain)).collect())
}

/// Window of the given kind for an `M×N` grid. The frequency window is always
/// rectangular.
pub fn make_window<T: Scalar>(kind: WindowKind, m: usize, n: usize) -> Result<SeparableWindow<T>> {
    if m == 0 || n == 0 {
        return Err(OtfsError::Empty);
    }
    match kind {
        WindowKind::Rectangular => Ok(SeparableWindow::rectangular(m, n)),
        WindowKind::TimeTapered { rolloff } => {
            let time = raised_cosine_taper::<T>(n, rolloff)?;
            SeparableWindow::from_real(&vec![T::one(); m], &time)
        }
    }
}
