use std::io::Write;

use serde::Serialize;

use crate::{OtfsError, Result};

/// Bit-error tally with its Monte-Carlo standard error.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BitErrorRate {
    pub errors: u64,
    pub bits: u64,
}

impl BitErrorRate {
    pub fn rate(&self) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            self.errors as f64 / self.bits as f64
        }
    }

    /// `√(p(1−p)/n)`.
    pub fn stderr(&self) -> f64 {
        if self.bits == 0 {
            return 0.0;
        }
        let p = self.rate();
        (p * (1.0 - p) / self.bits as f64).sqrt()
    }

    pub fn merge(self, other: Self) -> Self {
        Self {
            errors: self.errors + other.errors,
            bits: self.bits + other.bits,
        }
    }
}

/// Hamming distance between two bit streams, normalized by their length.
pub fn ber(detected: &[u8], reference: &[u8]) -> Result<BitErrorRate> {
    if detected.len() != reference.len() {
        return Err(OtfsError::dims(reference.len(), detected.len()));
    }
    let errors = detected.iter().zip(reference).filter(|(a, b)| a != b).count() as u64;
    Ok(BitErrorRate {
        errors,
        bits: reference.len() as u64,
    })
}

/// One line of `ber.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerRow {
    pub snr_db: f64,
    pub trials: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub stderr: f64,
}

impl BerRow {
    pub fn new(snr_db: f64, trials: u64, tally: BitErrorRate) -> Self {
        Self {
            snr_db,
            trials,
            bit_errors: tally.errors,
            ber: tally.rate(),
            stderr: tally.stderr(),
        }
    }
}

/// CSV with header `snr_db,trials,bit_errors,ber,stderr`.
pub fn write_ber_csv<W: Write>(out: W, rows: &[BerRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(["snr_db", "trials", "bit_errors", "ber", "stderr"])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_and_complemented() {
        let a: Vec<u8> = (0..100).map(|i| (i % 3 == 0) as u8).collect();
        let b: Vec<u8> = a.iter().map(|x| 1 - x).collect();
        assert_eq!(ber(&a, &a).unwrap().rate(), 0.0);
        assert_eq!(ber(&b, &a).unwrap().rate(), 1.0);
        assert_eq!(ber(&b, &a).unwrap().stderr(), 0.0);
    }

    #[test]
    fn counts_flips() {
        let a = vec![0u8; 1000];
        let mut b = a.clone();
        for i in [5, 500, 999] {
            b[i] = 1;
        }
        let t = ber(&b, &a).unwrap();
        assert_eq!(t.errors, 3);
        assert!((t.rate() - 0.003).abs() < 1e-15);
        assert!((t.stderr() - (0.003f64 * 0.997 / 1000.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn length_mismatch() {
        assert!(ber(&[0, 1], &[0]).is_err());
    }

    #[test]
    fn csv_schema() {
        let rows = vec![BerRow::new(2.0, 10, BitErrorRate { errors: 1, bits: 4 })];
        let mut buf = Vec::new();
        write_ber_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("snr_db,trials,bit_errors,ber,stderr"));
        assert!(lines.next().unwrap().starts_with("2.0,10,1,0.25,"));
    }
}
