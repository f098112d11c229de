//! Argument parsing and the flag > `OTFS_SEED` > file precedence.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use otfs_core::grids::{QamOrder, WindowKind, DEFAULT_ROLLOFF};

use crate::commands::{self, Failure, Outcome};
use crate::config::{DetectorKind, FreqWindow, RunConfig, SnrDb};

#[derive(Debug, Parser)]
#[command(name = "otfs", version, about = "OFDM-based OTFS modem simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// BER sweep through the fast modem and a linear detector.
    Simulate(Overrides),
    /// Compare the fast modem with the reference SFFT-based modem.
    Equivalence(Overrides),
    /// Count complex multiplications against the closed forms.
    Audit(AuditArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum WindowArg {
    Rectangular,
    Tapered,
}

#[derive(Debug, Default, Args)]
pub struct Overrides {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "M")]
    pub m: Option<usize>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long = "Mcp")]
    pub cp: Option<usize>,
    /// Constellation size: 4, 16 or 64.
    #[arg(long, value_parser = parse_qam)]
    pub qam: Option<QamOrder>,
    /// Comma-separated SNR points in dB; `inf` is noise-free.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub snr: Option<Vec<SnrDb>>,
    /// Frames per SNR point.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, env = "OTFS_SEED")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Time-axis window.
    #[arg(long, value_enum)]
    pub window: Option<WindowArg>,
    #[arg(long)]
    pub rolloff: Option<f64>,
    #[arg(long, value_enum)]
    pub freq_window: Option<FreqWindow>,
    #[arg(long, value_enum)]
    pub detector: Option<DetectorKind>,
    /// JSON channel file.
    #[arg(long)]
    pub channel: Option<PathBuf>,
    /// Random grids for `equivalence`.
    #[arg(long)]
    pub grids: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Subcarrier counts; must be powers of two.
    #[arg(long = "M", value_delimiter = ',', default_value = "8,16,32,64,128,256,512")]
    pub m: Vec<usize>,
    /// Symbol counts; must be powers of two.
    #[arg(long = "N", value_delimiter = ',', default_value = "2,4,8,16,32")]
    pub n: Vec<usize>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

fn parse_qam(s: &str) -> Result<QamOrder, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    QamOrder::try_from(v).map_err(|e| e.to_string())
}

impl Overrides {
    /// Start from the config file (or defaults) and apply every flag given.
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut rc = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.m {
            rc.m = v;
        }
        if let Some(v) = self.n {
            rc.n = v;
        }
        if let Some(v) = self.cp {
            rc.cp = v;
        }
        if let Some(v) = self.qam {
            rc.qam = v;
        }
        if let Some(v) = &self.snr {
            rc.snr_db = v.clone();
        }
        if let Some(v) = self.trials {
            rc.trials = v;
        }
        if let Some(v) = self.seed {
            rc.seed = v;
        }
        if let Some(v) = &self.out {
            rc.out = v.clone();
        }
        let current = match rc.window {
            WindowKind::TimeTapered { rolloff } => Some(rolloff),
            WindowKind::Rectangular => None,
        };
        match (self.window, self.rolloff) {
            (Some(WindowArg::Rectangular), _) => rc.window = WindowKind::Rectangular,
            (Some(WindowArg::Tapered), r) => {
                rc.window = WindowKind::TimeTapered {
                    rolloff: r.or(current).unwrap_or(DEFAULT_ROLLOFF),
                }
            }
            (None, Some(r)) => rc.window = WindowKind::TimeTapered { rolloff: r },
            (None, None) => {}
        }
        if let Some(v) = self.freq_window {
            rc.freq_window = v;
        }
        if let Some(v) = self.detector {
            rc.detector = v;
        }
        if let Some(p) = &self.channel {
            rc.channel = Some(crate::config::ChannelSource::File(p.clone()));
        }
        if let Some(v) = self.grids {
            rc.grids = v;
        }
        Ok(rc)
    }
}

fn with_config(command: &'static str, o: &Overrides, f: impl FnOnce(&RunConfig) -> Outcome) -> Outcome {
    let rc = o.resolve().map_err(|e| Failure::from_error(command, &e))?;
    f(&rc)
}

pub fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Simulate(o) => with_config("simulate", o, |rc| {
            commands::simulate(rc).map_err(|e| Failure::from_error("simulate", &e))
        }),
        Command::Equivalence(o) => with_config("equivalence", o, commands::equivalence),
        Command::Audit(a) => commands::audit(&a.m, &a.n, &a.out),
    }
}

/// Print the outcome as one JSON line on stdout and map it to an exit code.
pub fn run(cli: Cli) -> ExitCode {
    match execute(&cli) {
        Ok(summary) => {
            println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            println!("{}", serde_json::to_string(&failure).expect("failure serializes"));
            ExitCode::FAILURE
        }
    }
}
