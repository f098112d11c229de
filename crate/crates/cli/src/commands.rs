//! The three subcommands. Each returns a [`Summary`] on success; failures
//! carry a [`Failure`] record for the caller to print.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::Context;
use otfs_core::audit::{audit_report, ComplexityReport, Direction};
use otfs_core::channel::{add_awgn_with, apply_channel, build_dd_response, build_doppler_taps, LtvChannel};
use otfs_core::detect::{
    assemble_effective, ber, write_ber_csv, BerRow, BitErrorRate, FastBlockSolver, MmseDetector, ZfDetector,
};
use otfs_core::grids::{qam_demap, qam_map, DopplerDelayGrid, ModemConfig, SeparableWindow};
use otfs_core::modem::{demodulate_fast, demodulate_reference, modulate_fast, modulate_reference};
use otfs_core::numerics::{max_abs_diff, CmCounter};
use otfs_core::OtfsError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{DetectorKind, FieldError, RunConfig};

pub const EQUIVALENCE_TOL: f64 = 1e-11;

/// Machine-readable failure record printed as one JSON line.
#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub status: &'static str,
    pub command: &'static str,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<&'static str>,
    pub message: String,
}

impl Failure {
    pub fn new(command: &'static str, kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            status: "fail",
            command,
            kind,
            field: None,
            message: message.into(),
        }
    }

    /// Classify an error chain by its root cause.
    pub fn from_error(command: &'static str, err: &anyhow::Error) -> Self {
        let message = format!("{err:#}");
        if let Some(f) = err.downcast_ref::<FieldError>() {
            return Self {
                field: Some(f.field),
                ..Self::new(command, "config", message)
            };
        }
        let kind = match err.downcast_ref::<OtfsError>() {
            Some(OtfsError::Unsupported(_)) => "unsupported",
            Some(OtfsError::InvalidParameter { .. })
            | Some(OtfsError::DimensionMismatch { .. })
            | Some(OtfsError::Empty) => "invalid-input",
            Some(OtfsError::Singular { .. })
            | Some(OtfsError::NotCirculant { .. })
            | Some(OtfsError::NotPositiveSemiDefinite) => "numerical",
            Some(_) => "io",
            None if err.downcast_ref::<std::io::Error>().is_some() => "io",
            None => "error",
        };
        Self::new(command, kind, message)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub status: &'static str,
    pub command: &'static str,
    pub files: Vec<PathBuf>,
    pub details: serde_json::Value,
}

pub type Outcome = std::result::Result<Summary, Failure>;

fn ensure_out(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))
}

fn writer(path: &Path) -> anyhow::Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

/// Independent stream per `(snr index, trial)` so results do not depend on
/// how work is scheduled.
pub fn trial_rng(seed: u64, point: usize, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 40) | trial);
    rng
}

enum Detector {
    Zf(ZfDetector<f64>),
    Mmse(MmseDetector<f64>),
    Fast(FastBlockSolver<f64>),
}

impl Detector {
    fn build(
        kind: DetectorKind,
        ch: &LtvChannel<f64>,
        w: &SeparableWindow<f64>,
        cfg: &ModemConfig,
    ) -> otfs_core::Result<Self> {
        let sys = assemble_effective(ch, w, cfg)?;
        Ok(match kind {
            DetectorKind::Zf => Detector::Zf(ZfDetector::new(&sys)?),
            DetectorKind::Mmse => Detector::Mmse(MmseDetector::new(&sys)?),
            DetectorKind::Fast => Detector::Fast(FastBlockSolver::new(&sys)?),
        })
    }

    fn detect(&self, y: &DopplerDelayGrid<f64>) -> otfs_core::Result<DopplerDelayGrid<f64>> {
        match self {
            Detector::Zf(d) => d.detect(y),
            Detector::Mmse(d) => d.detect(y),
            Detector::Fast(d) => d.solve(y),
        }
    }
}

fn run_trial(
    rng: &mut ChaCha8Rng,
    cfg: &ModemConfig,
    ch: &LtvChannel<f64>,
    w: &SeparableWindow<f64>,
    det: &Detector,
    noise_variance: f64,
) -> otfs_core::Result<BitErrorRate> {
    let bits: Vec<u8> = (0..cfg.bits_per_frame()).map(|_| rng.random_range(0..2u8)).collect();
    let x = qam_map::<f64>(&bits, cfg.qam, cfg.m, cfg.n)?;
    let mut cm = CmCounter::new();
    let s = modulate_fast(&x, cfg, &mut cm)?;
    let r = add_awgn_with(&apply_channel(&s, ch)?, noise_variance, rng)?;
    let y = demodulate_fast(&r, w, cfg, &mut cm)?;
    ber(&qam_demap(&det.detect(&y)?, cfg.qam), &bits)
}

/// BER sweep over `snr_db`; writes `ber.csv` and `ddresponse.csv`.
pub fn simulate(rc: &RunConfig) -> anyhow::Result<Summary> {
    rc.validate()?;
    let cfg = rc.modem()?;
    let w = rc.separable_window()?;
    let ch = rc.channel()?;
    ensure_out(&rc.out)?;

    let points: Vec<(f64, Detector)> = rc
        .snr_db
        .iter()
        .map(|snr| {
            let nv = snr.noise_variance();
            let cfg = cfg.with_noise_variance(nv)?;
            Ok((nv, Detector::build(rc.detector, &ch, &w, &cfg)?))
        })
        .collect::<otfs_core::Result<_>>()?;

    let tallies: Vec<BitErrorRate> = points
        .par_iter()
        .enumerate()
        .map(|(idx, (nv, det))| {
            (0..rc.trials)
                .into_par_iter()
                .map(|t| run_trial(&mut trial_rng(rc.seed, idx, t), &cfg, &ch, &w, det, *nv))
                .try_reduce(BitErrorRate::default, |a, b| Ok(a.merge(b)))
        })
        .collect::<otfs_core::Result<_>>()?;

    let rows: Vec<BerRow> = rc
        .snr_db
        .iter()
        .zip(tallies)
        .map(|(snr, tally)| BerRow::new(snr.0, rc.trials, tally))
        .collect();
    let ber_path = rc.out.join("ber.csv");
    write_ber_csv(writer(&ber_path)?, &rows)?;

    let dd = build_dd_response(&build_doppler_taps(&ch, w.time(), &cfg)?, &w)?;
    let dd_path = rc.out.join("ddresponse.csv");
    dd.write_csv(writer(&dd_path)?)?;

    Ok(Summary {
        status: "ok",
        command: "simulate",
        files: vec![ber_path, dd_path],
        details: serde_json::json!({
            "points": rc.snr_db.iter().zip(&rows).map(|(snr, r)| serde_json::json!({"snr_db": snr, "ber": r.ber, "bit_errors": r.bit_errors})).collect::<Vec<_>>(),
            "dd_peak": dd.peak(),
        }),
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
struct EquivalenceRow {
    grid: usize,
    modulator: f64,
    demodulator: f64,
}

/// Fast-vs-reference deviation over `grids` random QAM grids; writes
/// `equivalence.csv`.
pub fn equivalence(rc: &RunConfig) -> Outcome {
    let run = || -> anyhow::Result<(Vec<EquivalenceRow>, PathBuf)> {
        rc.validate()?;
        let cfg = rc.modem()?;
        let w = rc.separable_window()?;
        let ch = rc.channel()?;
        ensure_out(&rc.out)?;
        let rows = (0..rc.grids)
            .into_par_iter()
            .map(|g| {
                let mut rng = trial_rng(rc.seed, 0, g as u64);
                let bits: Vec<u8> = (0..cfg.bits_per_frame()).map(|_| rng.random_range(0..2u8)).collect();
                let x = qam_map::<f64>(&bits, cfg.qam, cfg.m, cfg.n)?;
                let mut cm = CmCounter::new();
                let s_ref = modulate_reference(&x, &cfg, &mut cm)?;
                let s_fast = modulate_fast(&x, &cfg, &mut cm)?;
                let modulator = (s_ref.as_vector() - s_fast.as_vector())
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                let r = apply_channel(&s_ref, &ch)?;
                let a = demodulate_reference(&r, &w, &cfg, &mut cm)?;
                let b = demodulate_fast(&r, &w, &cfg, &mut cm)?;
                Ok(EquivalenceRow {
                    grid: g,
                    modulator,
                    demodulator: max_abs_diff(a.as_matrix(), b.as_matrix()),
                })
            })
            .collect::<otfs_core::Result<Vec<_>>>()?;
        let path = rc.out.join("equivalence.csv");
        let mut out = csv::Writer::from_writer(writer(&path)?);
        for row in &rows {
            out.serialize(row)?;
        }
        out.flush()?;
        Ok((rows, path))
    };
    let (rows, path) = run().map_err(|e| Failure::from_error("equivalence", &e))?;
    let worst_mod = rows.iter().map(|r| r.modulator).fold(0.0, f64::max);
    let worst_demod = rows.iter().map(|r| r.demodulator).fold(0.0, f64::max);
    let details = serde_json::json!({
        "grids": rows.len(),
        "max_modulator": worst_mod,
        "max_demodulator": worst_demod,
        "tolerance": EQUIVALENCE_TOL,
    });
    if worst_mod <= EQUIVALENCE_TOL && worst_demod <= EQUIVALENCE_TOL {
        Ok(Summary {
            status: "pass",
            command: "equivalence",
            files: vec![path],
            details,
        })
    } else {
        Err(Failure::new(
            "equivalence",
            "mismatch",
            format!(
                "max deviation {:.3e} exceeds {EQUIVALENCE_TOL:e}: {details}",
                worst_mod.max(worst_demod)
            ),
        ))
    }
}

/// Complexity sweep; writes `audit.csv`.
pub fn audit(ms: &[usize], ns: &[usize], out: &Path) -> Outcome {
    let run = || -> anyhow::Result<(ComplexityReport, PathBuf)> {
        let report = audit_report(ms, ns)?;
        ensure_out(out)?;
        let path = out.join("audit.csv");
        report.write_csv(writer(&path)?)?;
        Ok((report, path))
    };
    let (report, path) = run().map_err(|e| Failure::from_error("audit", &e))?;
    let (m, n) = (*ms.iter().max().unwrap_or(&0), *ns.iter().max().unwrap_or(&0));
    let details = serde_json::json!({
        "cells": report.rows.len(),
        "mismatches": report.rows.iter().filter(|r| !r.matches).count(),
        "largest": [m, n],
        "proposed_to_ofdm_modulator": report.proposed_to_ofdm(Direction::Modulator, m, n),
        "proposed_to_ofdm_demodulator": report.proposed_to_ofdm(Direction::Demodulator, m, n),
    });
    if report.all_match() {
        Ok(Summary {
            status: "pass",
            command: "audit",
            files: vec![path],
            details,
        })
    } else {
        Err(Failure::new(
            "audit",
            "mismatch",
            format!("measured counts differ from closed forms: {details}"),
        ))
    }
}
