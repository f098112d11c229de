//! Run configuration: JSON file plus command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};

use otfs_core::channel::{doppler_per_frame, ChannelSpec, LtvChannel, TapSpec};
use otfs_core::grids::{make_window, raised_cosine_taper, ModemConfig, QamOrder, SeparableWindow, WindowKind};
use otfs_core::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A config field that failed validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub field: &'static str,
    pub reason: String,
}

impl FieldError {
    pub fn new(field: &'static str, reason: impl Into<String>) -> Self {
        Self {
            field,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid config field `{}`: {}", self.field, self.reason)
    }
}

impl std::error::Error for FieldError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DetectorKind {
    Zf,
    Mmse,
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FreqWindow {
    #[default]
    Rectangular,
    Tapered,
}

/// Inline taps or a path to a channel JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelSource {
    File(PathBuf),
    Inline(ChannelSpec),
}

/// SNR in dB; `inf` means noise-free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrDb(pub f64);

impl SnrDb {
    pub fn noise_variance(self) -> f64 {
        if self.0.is_infinite() {
            0.0
        } else {
            10f64.powf(-self.0 / 10.0)
        }
    }
}

impl std::str::FromStr for SnrDb {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "noise-free" => Ok(SnrDb(f64::INFINITY)),
            t => t.parse::<f64>().map(SnrDb).map_err(|e| format!("bad SNR `{s}`: {e}")),
        }
    }
}

impl fmt::Display for SnrDb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for SnrDb {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for SnrDb {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(SnrDb(v)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "Mcp")]
    pub cp: usize,
    pub qam: QamOrder,
    /// `None` selects the two-tap default channel.
    pub channel: Option<ChannelSource>,
    /// Time-axis window.
    pub window: WindowKind,
    /// Frequency-axis window; only the reference demodulator accepts `tapered`.
    pub freq_window: FreqWindow,
    pub detector: DetectorKind,
    pub snr_db: Vec<SnrDb>,
    /// Frames per SNR point.
    pub trials: u64,
    pub seed: u64,
    /// Random grids per equivalence run.
    pub grids: usize,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            m: 64,
            n: 8,
            cp: 16,
            qam: QamOrder::Qam4,
            channel: None,
            window: WindowKind::Rectangular,
            freq_window: FreqWindow::Rectangular,
            detector: DetectorKind::Mmse,
            snr_db: (0..=10).step_by(2).map(|v| SnrDb(v as f64)).collect(),
            trials: 20,
            seed: 1,
            grids: 50,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    /// Parse a JSON file. Relative channel paths resolve against its directory.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::Error::new(e).context(format!("reading config {}", path.display())))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| FieldError::new("config", format!("{}: {e}", path.display())))?;
        if let Some(ChannelSource::File(p)) = &mut cfg.channel {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn modem(&self) -> Result<ModemConfig, FieldError> {
        if self.m == 0 {
            return Err(FieldError::new("M", "must be positive"));
        }
        if self.n == 0 {
            return Err(FieldError::new("N", "must be positive"));
        }
        if self.cp > self.m {
            return Err(FieldError::new("Mcp", format!("{} exceeds M = {}", self.cp, self.m)));
        }
        ModemConfig::new(self.m, self.n, self.cp)
            .map(|c| c.with_qam(self.qam))
            .map_err(|e| FieldError::new("M", e.to_string()))
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        self.modem()?;
        if self.trials == 0 {
            return Err(FieldError::new("trials", "must be at least 1"));
        }
        if self.grids == 0 {
            return Err(FieldError::new("grids", "must be at least 1"));
        }
        if self.snr_db.is_empty() {
            return Err(FieldError::new("snr_db", "needs at least one point"));
        }
        if let Some(bad) = self.snr_db.iter().find(|s| s.0.is_nan() || s.0 == f64::NEG_INFINITY) {
            return Err(FieldError::new("snr_db", format!("{bad} is not a usable SNR")));
        }
        if let WindowKind::TimeTapered { rolloff } = self.window {
            if !(0.0..=1.0).contains(&rolloff) {
                return Err(FieldError::new("window", format!("rolloff {rolloff} outside [0, 1]")));
            }
        }
        if let Some(ChannelSource::File(p)) = &self.channel {
            if !p.is_file() {
                return Err(FieldError::new(
                    "channel",
                    format!("file {} does not exist", p.display()),
                ));
            }
        }
        Ok(())
    }

    /// Time window from `window`, frequency window from `freq_window`.
    pub fn separable_window(&self) -> Result<SeparableWindow<f64>, FieldError> {
        let w =
            make_window::<f64>(self.window, self.m, self.n).map_err(|e| FieldError::new("window", e.to_string()))?;
        match self.freq_window {
            FreqWindow::Rectangular => Ok(w),
            FreqWindow::Tapered => {
                let rolloff = match self.window {
                    WindowKind::TimeTapered { rolloff } => rolloff,
                    WindowKind::Rectangular => otfs_core::grids::DEFAULT_ROLLOFF,
                };
                let freq: Vec<Complex64> = raised_cosine_taper::<f64>(self.m, rolloff)
                    .map_err(|e| FieldError::new("freq_window", e.to_string()))?
                    .into_iter()
                    .map(|v| Complex64::new(v, 0.0))
                    .collect();
                SeparableWindow::new(freq, w.time().to_vec()).map_err(|e| FieldError::new("freq_window", e.to_string()))
            }
        }
    }

    pub fn channel_spec(&self) -> anyhow::Result<ChannelSpec> {
        match &self.channel {
            None => Ok(default_channel(&self.modem()?)),
            Some(ChannelSource::Inline(spec)) => Ok(spec.clone()),
            Some(ChannelSource::File(p)) => {
                ChannelSpec::load(p).map_err(|e| FieldError::new("channel", format!("{}: {e}", p.display())).into())
            }
        }
    }

    pub fn channel(&self) -> anyhow::Result<LtvChannel<f64>> {
        self.channel_spec()?
            .build()
            .map_err(|e| FieldError::new("channel", e.to_string()).into())
    }
}

/// Direct path plus an echo at delay 3 rotating once per frame.
pub fn default_channel(cfg: &ModemConfig) -> ChannelSpec {
    ChannelSpec {
        taps: vec![
            TapSpec {
                delay: 0,
                gain_re: 0.8,
                gain_im: 0.0,
                doppler: 0.0,
                phase: 0.0,
            },
            TapSpec {
                delay: 3,
                gain_re: 0.6,
                gain_im: 0.0,
                doppler: doppler_per_frame(1.0, cfg),
                phase: 0.0,
            },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_json() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
        cfg.validate().unwrap();
    }

    #[test]
    fn partial_file_fills_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"M": 16, "snr_db": [5, "inf"], "detector": "zf"}"#).unwrap();
        assert_eq!((cfg.m, cfg.n, cfg.cp), (16, 8, 16));
        assert_eq!(cfg.snr_db, vec![SnrDb(5.0), SnrDb(f64::INFINITY)]);
        assert_eq!(cfg.detector, DetectorKind::Zf);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn invalid_fields_are_named() {
        let cfg = RunConfig {
            trials: 0,
            ..RunConfig::default()
        };
        assert_eq!(cfg.validate().unwrap_err().field, "trials");
        let cfg = RunConfig {
            cp: 65,
            ..RunConfig::default()
        };
        assert_eq!(cfg.validate().unwrap_err().field, "Mcp");
        let cfg = RunConfig {
            channel: Some(ChannelSource::File("/no/such.json".into())),
            ..RunConfig::default()
        };
        assert_eq!(cfg.validate().unwrap_err().field, "channel");
    }

    #[test]
    fn snr_conversion() {
        assert_eq!(SnrDb(f64::INFINITY).noise_variance(), 0.0);
        assert!((SnrDb(10.0).noise_variance() - 0.1).abs() < 1e-15);
        assert_eq!("inf".parse::<SnrDb>().unwrap().0, f64::INFINITY);
    }

    #[test]
    fn default_channel_rotates_once_per_frame() {
        let cfg = RunConfig::default();
        let spec = cfg.channel_spec().unwrap();
        assert_eq!(spec.taps[1].delay, 3);
        assert!((spec.taps[1].doppler * (8.0 * 80.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tapered_freq_window_is_not_rectangular() {
        let cfg = RunConfig {
            freq_window: FreqWindow::Tapered,
            ..RunConfig::default()
        };
        assert!(!cfg.separable_window().unwrap().is_freq_rectangular());
    }
}
