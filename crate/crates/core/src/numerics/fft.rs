//! Unitary DFT with an instrumented radix-2 fast path.
//!
//! Power-of-two sizes run an iterative decimation-in-time FFT and are charged
//! one CM per butterfly, i.e. exactly `(P/2)·log2(P)` per transform, trivial
//! twiddles included. Other sizes fall back to direct evaluation and are
//! charged `P²`. The `1/√P` normalization is a real scaling and is not charged.

use ndarray::Axis;
use num_complex::Complex;

use super::{CMatrix, CmCounter};
use crate::{OtfsError, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Kernel `e^{-j2πpq/P}`.
    Forward,
    /// Kernel `e^{+j2πpq/P}`.
    Inverse,
}

/// Precomputed twiddles and permutation for one transform size.
#[derive(Debug, Clone)]
pub struct DftPlan<T> {
    size: usize,
    radix2: bool,
    /// `e^{-j2πk/P}`; half a period for radix-2, a full period otherwise.
    twiddles: Vec<Complex<T>>,
    bitrev: Vec<usize>,
    scale: T,
}

impl<T: Scalar> DftPlan<T> {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(OtfsError::Empty);
        }
        let radix2 = size.is_power_of_two();
        let span = if radix2 { size / 2 } else { size };
        let twiddles = (0..span)
            .map(|k| {
                let theta = -2.0 * std::f64::consts::PI * k as f64 / size as f64;
                Complex::new(T::of(theta.cos()), T::of(theta.sin()))
            })
            .collect();
        let bitrev = if radix2 {
            let bits = size.trailing_zeros();
            (0..size)
                .map(|i| {
                    if bits == 0 {
                        0
                    } else {
                        i.reverse_bits() >> (usize::BITS - bits)
                    }
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            size,
            radix2,
            twiddles,
            bitrev,
            scale: T::one() / T::of_usize(size).sqrt(),
        })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_radix2(&self) -> bool {
        self.radix2
    }

    /// CMs charged for one transform of this size.
    pub fn cost(&self) -> u64 {
        let p = self.size as u64;
        if self.radix2 {
            p / 2 * u64::from(self.size.trailing_zeros())
        } else {
            p * p
        }
    }

    /// In-place unitary transform of `buf`, charging `stage`.
    pub fn process(
        &self,
        buf: &mut [Complex<T>],
        dir: Direction,
        stage: &'static str,
        cm: &mut CmCounter,
    ) -> Result<()> {
        if buf.len() != self.size {
            return Err(OtfsError::dims(self.size, buf.len()));
        }
        let mults = if self.radix2 {
            self.radix2_in_place(buf, dir)
        } else {
            self.direct_in_place(buf, dir)
        };
        debug_assert_eq!(mults, self.cost());
        cm.charge(stage, mults);
        for v in buf.iter_mut() {
            *v = v.scale(self.scale);
        }
        Ok(())
    }

    fn twiddle(&self, k: usize, dir: Direction) -> Complex<T> {
        let w = self.twiddles[k];
        match dir {
            Direction::Forward => w,
            Direction::Inverse => w.conj(),
        }
    }

    fn radix2_in_place(&self, buf: &mut [Complex<T>], dir: Direction) -> u64 {
        let n = self.size;
        for i in 0..n {
            let j = self.bitrev[i];
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut mults = 0u64;
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for start in (0..n).step_by(2 * half) {
                for k in 0..half {
                    let w = self.twiddle(k * stride, dir);
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    mults += 1;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
        mults
    }

    fn direct_in_place(&self, buf: &mut [Complex<T>], dir: Direction) -> u64 {
        let n = self.size;
        let input = buf.to_vec();
        let mut mults = 0u64;
        for (p, out) in buf.iter_mut().enumerate() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (q, v) in input.iter().enumerate() {
                acc = acc + *v * self.twiddle((p * q) % n, dir);
                mults += 1;
            }
            *out = acc;
        }
        mults
    }
}

/// Unitary DFT of `v`, returning a new vector.
pub fn dft<T: Scalar>(v: &[Complex<T>], dir: Direction, cm: &mut CmCounter) -> Result<Vec<Complex<T>>> {
    let plan = DftPlan::new(v.len())?;
    let mut out = v.to_vec();
    plan.process(&mut out, dir, "dft", cm)?;
    Ok(out)
}

/// Transform every column of `a` (length = rows) in place.
pub fn dft_columns<T: Scalar>(
    a: &mut CMatrix<T>,
    dir: Direction,
    stage: &'static str,
    cm: &mut CmCounter,
) -> Result<()> {
    transform_lanes(a, Axis(0), dir, stage, cm)
}

/// Transform every row of `a` (length = cols) in place.
pub fn dft_rows<T: Scalar>(a: &mut CMatrix<T>, dir: Direction, stage: &'static str, cm: &mut CmCounter) -> Result<()> {
    transform_lanes(a, Axis(1), dir, stage, cm)
}

fn transform_lanes<T: Scalar>(
    a: &mut CMatrix<T>,
    axis: Axis,
    dir: Direction,
    stage: &'static str,
    cm: &mut CmCounter,
) -> Result<()> {
    let plan = DftPlan::new(a.len_of(axis))?;
    let mut buf = vec![Complex::new(T::zero(), T::zero()); plan.len()];
    for mut lane in a.lanes_mut(axis) {
        for (b, v) in buf.iter_mut().zip(lane.iter()) {
            *b = *v;
        }
        plan.process(&mut buf, dir, stage, cm)?;
        for (v, b) in lane.iter_mut().zip(buf.iter()) {
            *v = *b;
        }
    }
    Ok(())
}

/// Dense unitary DFT matrix, `[F]_{pq} = e^{∓j2πpq/P}/√P`.
pub fn dft_matrix<T: Scalar>(size: usize, dir: Direction) -> CMatrix<T> {
    let sign = match dir {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    let scale = 1.0 / (size as f64).sqrt();
    CMatrix::from_shape_fn((size, size), |(p, q)| {
        let theta = sign * 2.0 * std::f64::consts::PI * ((p * q) % size) as f64 / size as f64;
        Complex::new(T::of(scale * theta.cos()), T::of(scale * theta.sin()))
    })
}
