//! Symplectic finite Fourier transform pair.
//!
//! `SFFT⁻¹`: `Y = F_M X F_Nᴴ`, M-point DFTs down the columns followed by
//! N-point IDFTs along the rows. The windowed `SFFT` inverts it:
//! `X̃ = F_Mᴴ (W ⊙ Z) F_N`.

use super::{DopplerDelayGrid, SeparableWindow, TimeFrequencyGrid};
use crate::numerics::{dft_columns, dft_rows, CmCounter, Direction};
use crate::{OtfsError, Result, Scalar};

pub const STAGE_SFFT_DELAY: &str = "sfft.delay";
pub const STAGE_SFFT_DOPPLER: &str = "sfft.doppler";
pub const STAGE_WINDOW: &str = "window";

/// Doppler-delay grid to time-frequency grid.
pub fn sfft_inv<T: Scalar>(x: &DopplerDelayGrid<T>, cm: &mut CmCounter) -> Result<TimeFrequencyGrid<T>> {
    let mut y = x.as_matrix().clone();
    dft_columns(&mut y, Direction::Forward, STAGE_SFFT_DELAY, cm)?;
    dft_rows(&mut y, Direction::Inverse, STAGE_SFFT_DOPPLER, cm)?;
    Ok(TimeFrequencyGrid::from_matrix_unchecked(y))
}

/// Apply the receive window to `Z` and return to the Doppler-delay domain.
///
/// A real-valued window costs half a CM per sample, a complex one a full CM.
pub fn sfft_windowed<T: Scalar>(
    z: &TimeFrequencyGrid<T>,
    w: &SeparableWindow<T>,
    cm: &mut CmCounter,
) -> Result<DopplerDelayGrid<T>> {
    if w.dims() != z.dim() {
        return Err(OtfsError::dims(
            format!("{:?} window", z.dim()),
            format!("{:?}", w.dims()),
        ));
    }
    let mut x = z.as_matrix().clone();
    apply_window(&mut x, w, cm);
    dft_columns(&mut x, Direction::Inverse, STAGE_SFFT_DELAY, cm)?;
    dft_rows(&mut x, Direction::Forward, STAGE_SFFT_DOPPLER, cm)?;
    Ok(DopplerDelayGrid::from_matrix_unchecked(x))
}

fn apply_window<T: Scalar>(x: &mut crate::numerics::CMatrix<T>, w: &SeparableWindow<T>, cm: &mut CmCounter) {
    for ((m, n), v) in x.indexed_iter_mut() {
        *v = *v * w.weight(m, n);
    }
    let samples = x.len() as u64;
    if w.is_real() {
        cm.charge_real_scaling(STAGE_WINDOW, samples);
    } else {
        cm.charge(STAGE_WINDOW, samples);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{czero, frobenius, max_abs_diff, CMatrix};
    use num_complex::Complex;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn rc(rng: &mut ChaCha8Rng) -> Complex<f64> {
        Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }

    fn random_grid(rng: &mut ChaCha8Rng, m: usize, n: usize) -> DopplerDelayGrid<f64> {
        DopplerDelayGrid::from_fn(m, n, |_| rc(rng))
    }

    /// `b_{k,l}(m,n) = e^{-j2π(mk/M − nl/N)}/√(MN)`.
    fn basis(k: usize, l: usize, m: usize, n: usize, mm: usize, nn: usize) -> Complex<f64> {
        let th = -2.0 * PI * ((m * k) as f64 / mm as f64 - (n * l) as f64 / nn as f64);
        Complex::new(th.cos(), th.sin()) / ((mm * nn) as f64).sqrt()
    }

    #[test]
    fn origin_delta_is_flat() {
        let mut x = DopplerDelayGrid::<f64>::zeros(2, 2).into_matrix();
        x[[0, 0]] = Complex::new(1.0, 0.0);
        let y = sfft_inv(&DopplerDelayGrid::new(x).unwrap(), &mut CmCounter::new()).unwrap();
        for z in y.as_matrix() {
            assert!((z - Complex::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn inverse_matches_direct_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        let (mm, nn) = (4, 4);
        let x = random_grid(&mut rng, mm, nn);
        let y = sfft_inv(&x, &mut CmCounter::new()).unwrap();
        for m in 0..mm {
            for n in 0..nn {
                let mut acc = czero();
                for k in 0..mm {
                    for l in 0..nn {
                        acc += x[(k, l)] * basis(k, l, m, n, mm, nn);
                    }
                }
                assert!((y[(m, n)] - acc).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn windowed_matches_direct_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let (mm, nn) = (4, 3);
        let z = TimeFrequencyGrid::from_fn(mm, nn, |_| rc(&mut rng));
        let w = SeparableWindow::new(
            (0..mm).map(|_| rc(&mut rng)).collect(),
            (0..nn).map(|_| rc(&mut rng)).collect(),
        )
        .unwrap();
        let x = sfft_windowed(&z, &w, &mut CmCounter::new()).unwrap();
        for k in 0..mm {
            for l in 0..nn {
                let mut acc = czero();
                for m in 0..mm {
                    for n in 0..nn {
                        acc += w.weight(m, n) * z[(m, n)] * basis(k, l, m, n, mm, nn).conj();
                    }
                }
                assert!((x[(k, l)] - acc).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dc_collapses_to_origin() {
        let z = TimeFrequencyGrid::from_fn(4, 4, |_| Complex::new(1.0, 0.0));
        let x = sfft_windowed(&z, &SeparableWindow::rectangular(4, 4), &mut CmCounter::new()).unwrap();
        let mut expect = CMatrix::from_elem((4, 4), czero());
        expect[[0, 0]] = Complex::new(4.0, 0.0);
        assert!(max_abs_diff(x.as_matrix(), &expect) < 1e-14);
    }

    #[test]
    fn window_size_mismatch() {
        let z = TimeFrequencyGrid::<f64>::zeros(4, 4);
        assert!(sfft_windowed(&z, &SeparableWindow::rectangular(4, 2), &mut CmCounter::new()).is_err());
    }

    proptest! {
        #[test]
        fn unitary_and_invertible(m in 1usize..10, n in 1usize..10, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_grid(&mut rng, m, n);
            let mut cm = CmCounter::new();
            let y = sfft_inv(&x, &mut cm).unwrap();
            prop_assert!((frobenius(y.as_matrix()) - frobenius(x.as_matrix())).abs() < 1e-12);
            let back = sfft_windowed(&y, &SeparableWindow::rectangular(m, n), &mut cm).unwrap();
            prop_assert!(max_abs_diff(back.as_matrix(), x.as_matrix()) < 1e-12);
        }
    }

    #[test]
    fn transform_costs() {
        let x = DopplerDelayGrid::<f64>::zeros(8, 4);
        let mut cm = CmCounter::new();
        let y = sfft_inv(&x, &mut cm).unwrap();
        assert_eq!(cm.stage(STAGE_SFFT_DELAY), 4 * 12);
        assert_eq!(cm.stage(STAGE_SFFT_DOPPLER), 8 * 4);
        let mut cm = CmCounter::new();
        sfft_windowed(&y, &SeparableWindow::rectangular(8, 4), &mut cm).unwrap();
        assert_eq!(cm.stage(STAGE_WINDOW), 16);
        assert_eq!(cm.total(), 48 + 32 + 16);
    }
}
