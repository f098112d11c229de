//! Gray-coded square QAM with unit average symbol energy.
//!
//! The first half of each symbol's bits selects the in-phase level and the
//! second half the quadrature level, MSB first. On each axis the all-zero
//! label sits at the most positive level, so 4-QAM `00` maps to `(1 + j)/√2`.
//! Symbols fill the grid in `vec` order: symbol `i` lands at `(i mod M, i / M)`.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::DopplerDelayGrid;
use crate::{OtfsError, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub enum QamOrder {
    Qam4,
    Qam16,
    Qam64,
}

impl QamOrder {
    pub fn order(self) -> usize {
        match self {
            QamOrder::Qam4 => 4,
            QamOrder::Qam16 => 16,
            QamOrder::Qam64 => 64,
        }
    }

    pub fn bits_per_symbol(self) -> usize {
        self.order().trailing_zeros() as usize
    }

    /// Amplitude levels per axis.
    fn levels(self) -> usize {
        1 << (self.bits_per_symbol() / 2)
    }

    /// Average energy of the unnormalized odd-integer grid, `2(Q − 1)/3`.
    fn raw_energy(self) -> f64 {
        2.0 * (self.order() as f64 - 1.0) / 3.0
    }

    /// Map one symbol's worth of bits.
    pub fn map_symbol<T: Scalar>(self, bits: &[u8]) -> Complex<T> {
        let half = self.bits_per_symbol() / 2;
        let scale = 1.0 / self.raw_energy().sqrt();
        let re = self.axis_level(&bits[..half]) * scale;
        let im = self.axis_level(&bits[half..]) * scale;
        Complex::new(T::of(re), T::of(im))
    }

    /// Nearest-point decision for one symbol, appended to `out`.
    pub fn demap_symbol<T: Scalar>(self, z: Complex<T>, out: &mut Vec<u8>) {
        let scale = self.raw_energy().sqrt();
        self.axis_bits(z.re.as_f64() * scale, out);
        self.axis_bits(z.im.as_f64() * scale, out);
    }

    fn axis_level(self, bits: &[u8]) -> f64 {
        let gray = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        let index = gray_decode(gray);
        (self.levels() - 1) as f64 - 2.0 * index as f64
    }

    fn axis_bits(self, level: f64, out: &mut Vec<u8>) {
        let top = self.levels() - 1;
        let index = (((top as f64 - level) / 2.0).round()).clamp(0.0, top as f64) as usize;
        let gray = index ^ (index >> 1);
        let width = self.bits_per_symbol() / 2;
        out.extend((0..width).rev().map(|i| ((gray >> i) & 1) as u8));
    }

    /// All constellation points, indexed by their bit label read MSB first.
    pub fn constellation<T: Scalar>(self) -> Vec<Complex<T>> {
        let b = self.bits_per_symbol();
        (0..self.order())
            .map(|label| {
                let bits: Vec<u8> = (0..b).rev().map(|i| ((label >> i) & 1) as u8).collect();
                self.map_symbol(&bits)
            })
            .collect()
    }
}

fn gray_decode(mut g: usize) -> usize {
    let mut b = g;
    while g > 0 {
        g >>= 1;
        b ^= g;
    }
    b
}

impl TryFrom<usize> for QamOrder {
    type Error = OtfsError;

    fn try_from(order: usize) -> Result<Self> {
        match order {
            4 => Ok(QamOrder::Qam4),
            16 => Ok(QamOrder::Qam16),
            64 => Ok(QamOrder::Qam64),
            other => Err(OtfsError::param("qam_order", format!("unsupported order {other}"))),
        }
    }
}

impl From<QamOrder> for usize {
    fn from(q: QamOrder) -> usize {
        q.order()
    }
}

impl fmt::Display for QamOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-QAM", self.order())
    }
}

/// Map `M·N·log2(Q)` bits (each 0 or 1) onto an `M×N` Doppler-delay grid.
pub fn qam_map<T: Scalar>(bits: &[u8], order: QamOrder, m: usize, n: usize) -> Result<DopplerDelayGrid<T>> {
    let b = order.bits_per_symbol();
    if m == 0 || n == 0 {
        return Err(OtfsError::Empty);
    }
    if bits.len() != m * n * b {
        return Err(OtfsError::dims(format!("{} bits", m * n * b), bits.len()));
    }
    if let Some(bad) = bits.iter().find(|&&x| x > 1) {
        return Err(OtfsError::param(
            "bits",
            format!("bit values must be 0 or 1, found {bad}"),
        ));
    }
    Ok(DopplerDelayGrid::from_fn(m, n, |(k, l)| {
        let i = k + m * l;
        order.map_symbol(&bits[i * b..(i + 1) * b])
    }))
}

/// Hard nearest-neighbor demapping of a grid, in `vec` order.
pub fn qam_demap<T: Scalar>(grid: &DopplerDelayGrid<T>, order: QamOrder) -> Vec<u8> {
    let (m, n) = grid.dim();
    let mut out = Vec::with_capacity(m * n * order.bits_per_symbol());
    for l in 0..n {
        for k in 0..m {
            order.demap_symbol(grid[(k, l)], &mut out);
        }
    }
    out
}
