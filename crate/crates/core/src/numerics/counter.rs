//! Complex-multiplication accounting.
//!
//! Counts are kept in half-CM units: a complex-by-complex product costs two
//! units, a real-by-complex scaling (two real multiplications) costs one.
//! Additions, sign flips and sample copies are free.

use std::fmt;

/// Monotone complex-multiplication tally, split by pipeline stage.
///
/// One counter belongs to one pipeline execution; concurrent trials each own
/// their own instance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CmCounter {
    stages: Vec<(&'static str, u64)>,
    half_units: u64,
}

impl CmCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Charge `count` complex multiplications to `stage`.
    pub fn charge(&mut self, stage: &'static str, count: u64) {
        self.add_half_units(stage, 2 * count);
    }

    /// Charge `samples` scalings of a complex sample by a real coefficient.
    pub fn charge_real_scaling(&mut self, stage: &'static str, samples: u64) {
        self.add_half_units(stage, samples);
    }

    fn add_half_units(&mut self, stage: &'static str, units: u64) {
        self.half_units += units;
        match self.stages.iter_mut().find(|(s, _)| *s == stage) {
            Some((_, n)) => *n += units,
            None => self.stages.push((stage, units)),
        }
    }

    /// Total in complex multiplications, rounded up to a whole CM.
    pub fn total(&self) -> u64 {
        self.half_units.div_ceil(2)
    }

    pub fn total_half_units(&self) -> u64 {
        self.half_units
    }

    /// Total for one stage, rounded up to a whole CM. Zero for unknown stages.
    pub fn stage(&self, stage: &str) -> u64 {
        self.stages
            .iter()
            .find(|(s, _)| *s == stage)
            .map_or(0, |(_, n)| n.div_ceil(2))
    }

    /// Stages in first-charged order with their half-unit totals.
    pub fn stages(&self) -> impl Iterator<Item = (&'static str, u64)> + '_ {
        self.stages.iter().copied()
    }

    /// Fold another counter's stages into this one.
    pub fn merge(&mut self, other: &CmCounter) {
        for (stage, units) in other.stages() {
            self.add_half_units(stage, units);
        }
    }
}

impl fmt::Display for CmCounter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} CMs", self.total())?;
        for (stage, units) in &self.stages {
            write!(f, " [{stage}: {}]", units.div_ceil(2))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stages_sum_to_total() {
        let mut cm = CmCounter::new();
        cm.charge("fft", 12);
        cm.charge_real_scaling("window", 8);
        cm.charge("fft", 4);
        assert_eq!(cm.stage("fft"), 16);
        assert_eq!(cm.stage("window"), 4);
        assert_eq!(cm.total(), 20);
        let sum: u64 = cm.stages().map(|(_, u)| u).sum();
        assert_eq!(sum, cm.total_half_units());
    }

    #[test]
    fn odd_real_scalings_round_up() {
        let mut cm = CmCounter::new();
        cm.charge_real_scaling("w", 3);
        assert_eq!(cm.total_half_units(), 3);
        assert_eq!(cm.total(), 2);
    }

    #[test]
    fn merge_accumulates() {
        let mut a = CmCounter::new();
        a.charge("x", 3);
        let mut b = CmCounter::new();
        b.charge("x", 2);
        b.charge("y", 1);
        a.merge(&b);
        assert_eq!(a.stage("x"), 5);
        assert_eq!(a.total(), 6);
    }
}
