//! Baseband OFDM-based OTFS modem.
//!
//! The crate carries two modem structures that produce identical signals:
//! a reference pipeline that cascades the inverse symplectic finite Fourier
//! transform with an OFDM modulator (and the mirror image at the receiver),
//! and a reduced structure in which the M-point transforms cancel so that only
//! N-point transforms along the rows of the Doppler-delay grid remain.
//!
//! Around the modems sit an exact linear time-varying channel model, the
//! derived per-symbol and Doppler-tap channel matrices, ZF/MMSE detectors
//! over the resulting block-circulant linear system, and an instrumented
//! complex-multiplication count used by the [`audit`] module.
//!
//! All numerical code is generic over the real scalar type ([`Scalar`]);
//! the `*64` / `*32` aliases below fix it to `f64` / `f32`.

pub mod audit;
pub mod channel;
pub mod detect;
pub mod error;
pub mod grids;
pub mod modem;
pub mod numerics;
mod scalar;

pub use error::{OtfsError, Result};
pub use scalar::Scalar;

pub use num_complex::Complex;

pub type Complex64 = Complex<f64>;
pub type Complex32 = Complex<f32>;

pub type CMatrix64 = numerics::CMatrix<f64>;
pub type CVector64 = numerics::CVector<f64>;
pub type DopplerDelayGrid64 = grids::DopplerDelayGrid<f64>;
pub type DopplerDelayGrid32 = grids::DopplerDelayGrid<f32>;
pub type TimeFrequencyGrid64 = grids::TimeFrequencyGrid<f64>;
pub type TimeFrequencyGrid32 = grids::TimeFrequencyGrid<f32>;
pub type FrameSignal64 = grids::FrameSignal<f64>;
pub type FrameSignal32 = grids::FrameSignal<f32>;
pub type SeparableWindow64 = grids::SeparableWindow<f64>;
pub type LtvChannel64 = channel::LtvChannel<f64>;
pub type BlockFadingChannel64 = channel::BlockFadingChannel<f64>;
pub type EffectiveSystem64 = detect::EffectiveSystem<f64>;
