//! Complex-multiplication audit of the three modem structures.
//!
//! Predicted counts are the closed forms
//!
//! | structure      | modulator                 | demodulator                   |
//! |----------------|---------------------------|-------------------------------|
//! | reference OTFS | `MN·log2M + (MN/2)·log2N` | `MN·log2M + (MN/2)(1+log2N)`  |
//! | plain OFDM     | `(MN/2)·log2M`            | `(MN/2)·log2M`                |
//! | proposed       | `(MN/2)·log2N`            | `(MN/2)(1+log2N)`             |
//!
//! Measured counts come from running the instrumented modems once on random
//! input. Plain OFDM is the reference modem with the SFFT stages bypassed.

use std::fmt;
use std::io::Write;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::grids::{DopplerDelayGrid, FrameSignal, ModemConfig, SeparableWindow, TimeFrequencyGrid};
use crate::modem::{
    demodulate_fast, demodulate_ofdm, demodulate_reference, modulate_fast, modulate_ofdm, modulate_reference,
};
use crate::numerics::CmCounter;
use crate::{OtfsError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    ReferenceOtfs,
    PlainOfdm,
    Proposed,
}

impl Structure {
    pub const ALL: [Structure; 3] = [Structure::ReferenceOtfs, Structure::PlainOfdm, Structure::Proposed];

    pub fn name(self) -> &'static str {
        match self {
            Structure::ReferenceOtfs => "reference-otfs",
            Structure::PlainOfdm => "plain-ofdm",
            Structure::Proposed => "proposed",
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    #[serde(rename = "mod")]
    Modulator,
    #[serde(rename = "demod")]
    Demodulator,
}

impl Direction {
    pub const ALL: [Direction; 2] = [Direction::Modulator, Direction::Demodulator];

    pub fn name(self) -> &'static str {
        match self {
            Direction::Modulator => "mod",
            Direction::Demodulator => "demod",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn log2_exact(name: &'static str, v: usize) -> Result<u64> {
    if v == 0 || !v.is_power_of_two() {
        return Err(OtfsError::param(name, format!("must be a power of two, got {v}")));
    }
    Ok(u64::from(v.trailing_zeros()))
}

/// Closed-form CM count for one structure and direction.
pub fn predicted_cm(structure: Structure, direction: Direction, m: usize, n: usize) -> Result<u64> {
    let (lm, ln) = (log2_exact("M", m)?, log2_exact("N", n)?);
    let mn = (m * n) as u64;
    let half = mn / 2;
    Ok(match (structure, direction) {
        (Structure::ReferenceOtfs, Direction::Modulator) => mn * lm + half * ln,
        (Structure::ReferenceOtfs, Direction::Demodulator) => mn * lm + half * (1 + ln),
        (Structure::PlainOfdm, _) => half * lm,
        (Structure::Proposed, Direction::Modulator) => half * ln,
        (Structure::Proposed, Direction::Demodulator) => half * (1 + ln),
    })
}

/// Run the instrumented structure once on random input and return its CM total.
pub fn measured_cm(structure: Structure, direction: Direction, m: usize, n: usize) -> Result<u64> {
    let cfg = ModemConfig::new(m, n, m / 4)?;
    let mut rng = ChaCha8Rng::seed_from_u64((m as u64) << 32 | n as u64);
    let mut sample = || Complex::new(rng.random_range(-1.0f64..1.0), rng.random_range(-1.0..1.0));
    let mut cm = CmCounter::new();
    let window = SeparableWindow::rectangular(m, n);
    match direction {
        Direction::Modulator => {
            let x = DopplerDelayGrid::from_fn(m, n, |_| sample());
            match structure {
                Structure::ReferenceOtfs => drop(modulate_reference(&x, &cfg, &mut cm)?),
                Structure::PlainOfdm => {
                    let y = TimeFrequencyGrid::new(x.into_matrix())?;
                    drop(modulate_ofdm(&y, &cfg, &mut cm)?)
                }
                Structure::Proposed => drop(modulate_fast(&x, &cfg, &mut cm)?),
            }
        }
        Direction::Demodulator => {
            let r = FrameSignal::new((0..cfg.frame_len()).map(|_| sample()).collect())?;
            match structure {
                Structure::ReferenceOtfs => drop(demodulate_reference(&r, &window, &cfg, &mut cm)?),
                Structure::PlainOfdm => drop(demodulate_ofdm(&r, &cfg, &mut cm)?),
                Structure::Proposed => drop(demodulate_fast(&r, &window, &cfg, &mut cm)?),
            }
        }
    }
    Ok(cm.total())
}

/// One `structure × direction × (M, N)` cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityRow {
    pub structure: Structure,
    pub direction: Direction,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub predicted: u64,
    pub measured: u64,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComplexityReport {
    pub rows: Vec<ComplexityRow>,
}

impl ComplexityReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| r.matches)
    }

    pub fn find(&self, structure: Structure, direction: Direction, m: usize, n: usize) -> Option<&ComplexityRow> {
        self.rows
            .iter()
            .find(|r| r.structure == structure && r.direction == direction && r.m == m && r.n == n)
    }

    /// Measured proposed/plain-OFDM ratio for one cell; `log2N / log2M` for
    /// the modulator.
    pub fn proposed_to_ofdm(&self, direction: Direction, m: usize, n: usize) -> Option<f64> {
        let p = self.find(Structure::Proposed, direction, m, n)?.measured;
        let o = self.find(Structure::PlainOfdm, direction, m, n)?.measured;
        Some(p as f64 / o as f64)
    }

    /// CSV with header `structure,direction,M,N,predicted,measured,match`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        if self.rows.is_empty() {
            w.write_record(["structure", "direction", "M", "N", "predicted", "measured", "match"])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Full cross product over the sweep lists; every entry must be a power of two.
pub fn audit_report(ms: &[usize], ns: &[usize]) -> Result<ComplexityReport> {
    for &m in ms {
        log2_exact("M", m)?;
        if m < 2 {
            return Err(OtfsError::param("M", "must be at least 2"));
        }
    }
    for &n in ns {
        log2_exact("N", n)?;
        if n < 2 {
            return Err(OtfsError::param("N", "must be at least 2"));
        }
    }
    let mut rows = Vec::with_capacity(ms.len() * ns.len() * 6);
    for &m in ms {
        for &n in ns {
            for structure in Structure::ALL {
                for direction in Direction::ALL {
                    let predicted = predicted_cm(structure, direction, m, n)?;
                    let measured = measured_cm(structure, direction, m, n)?;
                    rows.push(ComplexityRow {
                        structure,
                        direction,
                        m,
                        n,
                        predicted,
                        measured,
                        matches: predicted == measured,
                    });
                }
            }
        }
    }
    Ok(ComplexityReport { rows })
}
