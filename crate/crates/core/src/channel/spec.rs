//! JSON channel description: `{"taps": [{"delay", "gain_re", "gain_im",
//! "doppler", "phase"}]}` with Doppler in cycles per sample and phase in
//! radians.

use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{LtvChannel, Tap};
use crate::{Result, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TapSpec {
    pub delay: usize,
    pub gain_re: f64,
    pub gain_im: f64,
    #[serde(default)]
    pub doppler: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub taps: Vec<TapSpec>,
}

impl ChannelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn build<T: Scalar>(&self) -> Result<LtvChannel<T>> {
        LtvChannel::new(
            self.taps
                .iter()
                .map(|t| Tap {
                    delay: t.delay,
                    gain: Complex::new(T::of(t.gain_re), T::of(t.gain_im)),
                    doppler: T::of(t.doppler),
                    phase: T::of(t.phase),
                })
                .collect(),
        )
    }
}

impl<T: Scalar> From<&LtvChannel<T>> for ChannelSpec {
    fn from(ch: &LtvChannel<T>) -> Self {
        ChannelSpec {
            taps: ch
                .taps()
                .iter()
                .map(|t| TapSpec {
                    delay: t.delay,
                    gain_re: t.gain.re.as_f64(),
                    gain_im: t.gain.im.as_f64(),
                    doppler: t.doppler.as_f64(),
                    phase: t.phase.as_f64(),
                })
                .collect(),
        }
    }
}
