//! Linear time-varying channel: `r(κ) = Σ_ℓ h(κ,ℓ)·s(κ−ℓ) + ν(κ)`.
//!
//! The frame starts from a zero state (`s(κ) = 0` for `κ < 0`). Doppler is in
//! cycles per sample; see [`doppler_from_speed`] for the physical conversion.

mod matrices;
mod spec;

pub use matrices::{
    build_dd_response, build_doppler_taps, build_hn, build_symbol_matrix, doppler_taps_from_hn, DopplerDelayResponse,
};
pub use spec::{ChannelSpec, TapSpec};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::grids::{FrameSignal, ModemConfig};
use crate::numerics::{cis, czero, CVector};
use crate::{OtfsError, Result, Scalar};

const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Anything that yields a gain `h(κ, ℓ)` at absolute sample `κ` and delay `ℓ`.
pub trait Channel<T: Scalar> {
    /// Channel length `L`, one more than the largest delay.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn gain(&self, kappa: usize, ell: usize) -> Complex<T>;
}

/// One path of an [`LtvChannel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap<T> {
    pub delay: usize,
    pub gain: Complex<T>,
    /// Cycles per sample.
    pub doppler: T,
    /// Radians.
    pub phase: T,
}

/// Tap list with `h(κ,ℓ) = Σ_{p: ℓ_p = ℓ} a_p e^{j(2πν_p κ + θ_p)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LtvChannel<T> {
    taps: Vec<Tap<T>>,
}

impl<T: Scalar> LtvChannel<T> {
    pub fn new(taps: Vec<Tap<T>>) -> Result<Self> {
        if taps.is_empty() {
            return Err(OtfsError::param("taps", "channel needs at least one tap"));
        }
        for t in &taps {
            let finite = t.gain.re.is_finite() && t.gain.im.is_finite() && t.doppler.is_finite() && t.phase.is_finite();
            if !finite {
                return Err(OtfsError::param("taps", "tap parameters must be finite"));
            }
        }
        Ok(Self { taps })
    }

    /// Single unit tap at delay 0 without Doppler.
    pub fn identity() -> Self {
        Self {
            taps: vec![Tap {
                delay: 0,
                gain: Complex::new(T::one(), T::zero()),
                doppler: T::zero(),
                phase: T::zero(),
            }],
        }
    }

    /// `paths` taps with delays drawn from `0..=max_delay`, CN(0, 1/paths)
    /// gains, Dopplers uniform in `±max_doppler` and uniform phases.
    pub fn random<R: Rng>(rng: &mut R, paths: usize, max_delay: usize, max_doppler: f64) -> Result<Self> {
        let scale = (0.5 / paths.max(1) as f64).sqrt();
        let taps = (0..paths)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Tap {
                    delay: rng.random_range(0..=max_delay),
                    gain: Complex::new(T::of(re * scale), T::of(im * scale)),
                    doppler: T::of(if max_doppler > 0.0 {
                        rng.random_range(-max_doppler..=max_doppler)
                    } else {
                        0.0
                    }),
                    phase: T::of(rng.random_range(0.0..std::f64::consts::TAU)),
                }
            })
            .collect();
        Self::new(taps)
    }

    pub fn taps(&self) -> &[Tap<T>] {
        &self.taps
    }

    /// True when every tap has zero Doppler.
    pub fn is_time_invariant(&self) -> bool {
        self.taps.iter().all(|t| t.doppler == T::zero())
    }
}

impl<T: Scalar> Channel<T> for LtvChannel<T> {
    fn len(&self) -> usize {
        1 + self.taps.iter().map(|t| t.delay).max().unwrap_or(0)
    }

    fn gain(&self, kappa: usize, ell: usize) -> Complex<T> {
        self.taps.iter().filter(|t| t.delay == ell).fold(czero(), |acc, t| {
            let theta = std::f64::consts::TAU * t.doppler.as_f64() * kappa as f64 + t.phase.as_f64();
            acc + t.gain * cis::<T>(theta)
        })
    }
}

/// Channel that is constant within each OFDM symbol and changes between
/// symbols; sample `κ` belongs to symbol `κ / (M + M_CP)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockFadingChannel<T> {
    /// `gains[n][ℓ]`, the impulse response during symbol `n`.
    gains: Vec<Vec<Complex<T>>>,
    symbol_len: usize,
    len: usize,
}

impl<T: Scalar> BlockFadingChannel<T> {
    pub fn new(gains: Vec<Vec<Complex<T>>>, symbol_len: usize) -> Result<Self> {
        if gains.is_empty() || gains.iter().all(|g| g.is_empty()) {
            return Err(OtfsError::param("gains", "need at least one symbol with one tap"));
        }
        if symbol_len == 0 {
            return Err(OtfsError::param("symbol_len", "must be positive"));
        }
        let len = gains.iter().map(Vec::len).max().unwrap_or(1);
        Ok(Self { gains, symbol_len, len })
    }

    /// Independent CN(0, 1/L) responses of length `taps` for each of the
    /// `cfg.n` symbols.
    pub fn random<R: Rng>(rng: &mut R, cfg: &ModemConfig, taps: usize) -> Result<Self> {
        let scale = (0.5 / taps.max(1) as f64).sqrt();
        let gains = (0..cfg.n)
            .map(|_| {
                (0..taps)
                    .map(|_| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex::new(T::of(re * scale), T::of(im * scale))
                    })
                    .collect()
            })
            .collect();
        Self::new(gains, cfg.symbol_len())
    }

    pub fn symbol_response(&self, n: usize) -> &[Complex<T>] {
        &self.gains[n.min(self.gains.len() - 1)]
    }
}

impl<T: Scalar> Channel<T> for BlockFadingChannel<T> {
    fn len(&self) -> usize {
        self.len
    }

    fn gain(&self, kappa: usize, ell: usize) -> Complex<T> {
        self.symbol_response(kappa / self.symbol_len)
            .get(ell)
            .copied()
            .unwrap_or_else(czero)
    }
}

/// True when the prefix covers the channel memory (`L − 1 ≤ M_CP`); logs a
/// warning otherwise.
pub fn guard_interval_ok<T: Scalar, C: Channel<T> + ?Sized>(ch: &C, cfg: &ModemConfig) -> bool {
    let ok = ch.len() <= cfg.cp + 1;
    if !ok {
        log::warn!(
            "channel length {} exceeds M_CP + 1 = {}; inter-symbol leakage is not modeled",
            ch.len(),
            cfg.cp + 1
        );
    }
    ok
}

/// Run the frame through the channel without noise.
pub fn apply_channel<T: Scalar, C: Channel<T> + ?Sized>(s: &FrameSignal<T>, ch: &C) -> Result<FrameSignal<T>> {
    let taps = ch.len();
    if taps == 0 {
        return Err(OtfsError::param("taps", "empty channel"));
    }
    let x = s.as_vector();
    let r: CVector<T> = (0..x.len())
        .map(|kappa| (0..taps.min(kappa + 1)).fold(czero(), |acc, ell| acc + ch.gain(kappa, ell) * x[kappa - ell]))
        .collect();
    Ok(FrameSignal::from_vector_unchecked(r))
}

/// Add CN(0, σ²) noise from a ChaCha stream seeded with `seed`.
pub fn add_awgn<T: Scalar>(r: &FrameSignal<T>, noise_variance: f64, seed: u64) -> Result<FrameSignal<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    add_awgn_with(r, noise_variance, &mut rng)
}

/// As [`add_awgn`], drawing from a caller-owned generator.
pub fn add_awgn_with<T: Scalar, R: Rng>(
    r: &FrameSignal<T>,
    noise_variance: f64,
    rng: &mut R,
) -> Result<FrameSignal<T>> {
    if !noise_variance.is_finite() || noise_variance < 0.0 {
        return Err(OtfsError::param(
            "noise_variance",
            format!("must be finite and non-negative, got {noise_variance}"),
        ));
    }
    let mut out = r.clone();
    if noise_variance == 0.0 {
        return Ok(out);
    }
    let sd = (noise_variance / 2.0).sqrt();
    for z in out.as_mut_vector().iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *z = *z + Complex::new(T::of(re * sd), T::of(im * sd));
    }
    Ok(out)
}

/// Normalized Doppler `v·f_c / (c·f_s)` in cycles per sample.
pub fn doppler_from_speed(speed_mps: f64, carrier_hz: f64, sample_rate_hz: f64) -> f64 {
    speed_mps * carrier_hz / SPEED_OF_LIGHT / sample_rate_hz
}

/// Doppler that advances the phase by `cycles` full turns over one frame.
pub fn doppler_per_frame(cycles: f64, cfg: &ModemConfig) -> f64 {
    cycles / cfg.frame_len() as f64
}

/// Two-path LTV channel with a dominant direct path, a delayed echo within
/// the prefix and Doppler on both paths.
#[cfg(test)]
pub(crate) fn assemble_test_channel(rng: &mut ChaCha8Rng, cfg: &ModemConfig) -> LtvChannel<f64> {
    let echo = cfg.cp.min(2);
    LtvChannel::new(vec![
        Tap {
            delay: 0,
            gain: Complex::new(1.0, 0.0),
            doppler: rng.random_range(0.005..0.02),
            phase: 0.0,
        },
        Tap {
            delay: echo,
            gain: Complex::new(rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4)),
            doppler: -rng.random_range(0.005..0.02),
            phase: rng.random_range(0.0..std::f64::consts::TAU),
        },
    ])
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc(rng: &mut ChaCha8Rng) -> Complex<f64> {
        Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }

    fn random_frame(rng: &mut ChaCha8Rng, len: usize) -> FrameSignal<f64> {
        FrameSignal::new((0..len).map(|_| rc(rng)).collect()).unwrap()
    }

    fn tap(delay: usize, gain: Complex<f64>, doppler: f64, phase: f64) -> Tap<f64> {
        Tap {
            delay,
            gain,
            doppler,
            phase,
        }
    }

    #[test]
    fn identity_channel_passes_through() {
        let mut rng = ChaCha8Rng::seed_from_u64(90);
        let s = random_frame(&mut rng, 30);
        assert_eq!(apply_channel(&s, &LtvChannel::identity()).unwrap(), s);
    }

    #[test]
    fn pure_doppler_modulates() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let s = random_frame(&mut rng, 40);
        let nu = 0.0123;
        let ch = LtvChannel::new(vec![tap(0, Complex::new(1.0, 0.0), nu, 0.0)]).unwrap();
        let r = apply_channel(&s, &ch).unwrap();
        for k in 0..40 {
            let th = std::f64::consts::TAU * nu * k as f64;
            let expect = Complex::new(th.cos(), th.sin()) * s.as_vector()[k];
            assert!((r.as_vector()[k] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn two_taps_match_direct_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(92);
        let s = random_frame(&mut rng, 24);
        let taps = vec![tap(0, rc(&mut rng), 0.01, 0.3), tap(2, rc(&mut rng), -0.02, 1.1)];
        let ch = LtvChannel::new(taps.clone()).unwrap();
        let r = apply_channel(&s, &ch).unwrap();
        for k in 0..24 {
            let mut acc = Complex::new(0.0, 0.0);
            for t in &taps {
                if k >= t.delay {
                    let th = std::f64::consts::TAU * t.doppler * k as f64 + t.phase;
                    acc += t.gain * Complex::new(th.cos(), th.sin()) * s.as_vector()[k - t.delay];
                }
            }
            assert!((r.as_vector()[k] - acc).norm() < 1e-13);
        }
    }

    #[test]
    fn coincident_taps_add() {
        let ch = LtvChannel::new(vec![
            tap(1, Complex::new(1.0, 0.0), 0.0, 0.0),
            tap(1, Complex::new(0.0, 2.0), 0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(ch.len(), 2);
        assert_eq!(ch.gain(5, 1), Complex::new(1.0, 2.0));
        assert_eq!(ch.gain(5, 0), Complex::new(0.0, 0.0));
    }

    #[test]
    fn empty_tap_list_rejected() {
        assert!(LtvChannel::<f64>::new(Vec::new()).is_err());
    }

    #[test]
    fn block_fading_holds_per_symbol() {
        let g = vec![
            vec![Complex::new(1.0, 0.0)],
            vec![Complex::new(0.0, 1.0), Complex::new(0.5, 0.0)],
        ];
        let ch = BlockFadingChannel::new(g, 4).unwrap();
        assert_eq!(ch.len(), 2);
        assert_eq!(ch.gain(3, 0), Complex::new(1.0, 0.0));
        assert_eq!(ch.gain(3, 1), Complex::new(0.0, 0.0));
        assert_eq!(ch.gain(4, 0), Complex::new(0.0, 1.0));
        assert_eq!(ch.gain(7, 1), Complex::new(0.5, 0.0));
    }

    #[test]
    fn zero_noise_is_noop() {
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        let s = random_frame(&mut rng, 16);
        assert_eq!(add_awgn(&s, 0.0, 7).unwrap(), s);
    }

    #[test]
    fn noise_is_seeded() {
        let s = FrameSignal::<f64>::zeros(64);
        assert_eq!(add_awgn(&s, 0.5, 11).unwrap(), add_awgn(&s, 0.5, 11).unwrap());
        assert_ne!(add_awgn(&s, 0.5, 11).unwrap(), add_awgn(&s, 0.5, 12).unwrap());
    }

    #[test]
    fn negative_variance_rejected() {
        assert!(add_awgn(&FrameSignal::<f64>::zeros(4), -0.1, 0).is_err());
    }

    #[test]
    fn noise_moments() {
        let s = FrameSignal::<f64>::zeros(1_000_000);
        let r = add_awgn(&s, 1.0, 2024).unwrap();
        let v = r.as_vector();
        let n = v.len() as f64;
        let power = v.iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
        let re_var = v.iter().map(|z| z.re * z.re).sum::<f64>() / n;
        assert!((power - 1.0).abs() < 0.01, "{power}");
        assert!((re_var - 0.5).abs() < 0.01, "{re_var}");
    }

    #[test]
    fn doppler_conversions() {
        // 100 km/h at 2 GHz sampled at 10 MHz: ≈185 Hz, 1.85e-5 cycles/sample.
        let nu = doppler_from_speed(100.0 / 3.6, 2e9, 10e6);
        assert!((nu - 1.8532e-5).abs() < 1e-8);
        let cfg = ModemConfig::new(64, 8, 16).unwrap();
        assert_eq!(doppler_per_frame(1.0, &cfg), 1.0 / 640.0);
    }

    #[test]
    fn guard_check() {
        let cfg = ModemConfig::new(8, 2, 2).unwrap();
        let short = LtvChannel::new(vec![tap(2, Complex::new(1.0, 0.0), 0.0, 0.0)]).unwrap();
        let long = LtvChannel::new(vec![tap(3, Complex::new(1.0, 0.0), 0.0, 0.0)]).unwrap();
        assert!(guard_interval_ok(&short, &cfg));
        assert!(!guard_interval_ok(&long, &cfg));
    }
}
