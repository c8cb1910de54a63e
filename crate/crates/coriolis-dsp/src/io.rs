//! CSV serialization with audit-trail headers and atomic writes.
//!
//! Every file starts with `#`-prefixed comment lines recording the tool
//! version, the fully resolved configuration and the seed, so any output can
//! be traced back to the exact run that produced it. Numbers are written with
//! 17 significant digits, which round-trips f64 losslessly.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::sim::{SensorRecord, TruthSeries};
use crate::tracking::TrackerEstimate;
use crate::{Error, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Estimate CSV column header (fixed schema).
pub const ESTIMATE_HEADER: &str =
    "sample,time_s,truth_amp_v,truth_freq_hz,truth_phase_deg,est_amp_v,est_freq_hz,est_phase_deg,valid";

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Audit-trail comment block for the top of every output file.
pub fn audit_header(config_desc: &str, seed: u64) -> String {
    let mut s = String::new();
    s.push_str(&format!("# tool: cmft v{TOOL_VERSION}\n"));
    for line in config_desc.lines() {
        s.push_str(&format!("# config: {line}\n"));
    }
    s.push_str(&format!("# seed: {seed}\n"));
    s
}

/// Write `content` to `path` atomically (temp file + rename).
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
        std::process::id()
    ));
    {
        let mut f = fs::File::create(&tmp).map_err(|e| Error::io(tmp.display().to_string(), e))?;
        f.write_all(content.as_bytes())
            .map_err(|e| Error::io(tmp.display().to_string(), e))?;
        f.sync_all().map_err(|e| Error::io(tmp.display().to_string(), e))?;
    }
    fs::rename(&tmp, path).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Per-method estimate CSV: truth and estimates side by side.
pub fn estimates_csv(
    estimates: &[TrackerEstimate],
    truth: &TruthSeries,
    config_desc: &str,
    seed: u64,
) -> String {
    let fs_hz = truth.sample_rate_hz;
    let mut out = audit_header(config_desc, seed);
    out.push_str(ESTIMATE_HEADER);
    out.push('\n');
    for (i, e) in estimates.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            i,
            fmt(i as f64 / fs_hz),
            fmt(truth.amplitude_v[i]),
            fmt(truth.frequency_hz[i]),
            fmt(truth.phase_diff_deg[i]),
            fmt(e.amplitude1_v),
            fmt(e.frequency_hz),
            fmt(e.phase_diff_deg),
            u8::from(e.valid),
        ));
    }
    out
}

/// Sensor record CSV (simulate output / replay input).
pub fn record_csv(record: &SensorRecord, config_desc: &str) -> String {
    let fs_hz = record.truth.sample_rate_hz;
    let mut out = audit_header(config_desc, record.rng_seed);
    out.push_str(&format!("# sample_rate_hz: {fs_hz}\n"));
    out.push_str("sample,time_s,x1_v,x2_v,truth_amp_v,truth_freq_hz,truth_phase_deg\n");
    for i in 0..record.x1.len() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            i,
            fmt(i as f64 / fs_hz),
            fmt(record.x1[i]),
            fmt(record.x2[i]),
            fmt(record.truth.amplitude_v[i]),
            fmt(record.truth.frequency_hz[i]),
            fmt(record.truth.phase_diff_deg[i]),
        ));
    }
    out
}

/// Parse a sensor record CSV produced by [`record_csv`].
pub fn parse_record_csv(text: &str) -> Result<SensorRecord> {
    let mut sample_rate_hz = crate::defaults::SAMPLE_RATE_HZ;
    let mut x1 = Vec::new();
    let mut x2 = Vec::new();
    let mut amp = Vec::new();
    let mut freq = Vec::new();
    let mut phase = Vec::new();
    let mut header_seen = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("sample_rate_hz:") {
                sample_rate_hz = v.trim().parse().map_err(|_| Error::ParseError {
                    line: lineno + 1,
                    msg: "bad sample_rate_hz".into(),
                })?;
            }
            continue;
        }
        if !header_seen {
            header_seen = true; // column header row
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 7 {
            return Err(Error::ParseError {
                line: lineno + 1,
                msg: format!("expected 7 columns, got {}", cols.len()),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::ParseError {
                line: lineno + 1,
                msg: format!("bad number `{s}`"),
            })
        };
        x1.push(parse(cols[2])?);
        x2.push(parse(cols[3])?);
        amp.push(parse(cols[4])?);
        freq.push(parse(cols[5])?);
        phase.push(parse(cols[6])?);
    }
    if x1.is_empty() {
        return Err(Error::ParseError { line: 0, msg: "no data rows".into() });
    }
    Ok(SensorRecord {
        x1,
        x2,
        truth: TruthSeries {
            amplitude_v: amp,
            frequency_hz: freq,
            phase_diff_deg: phase,
            sample_rate_hz,
        },
        rng_seed: 0,
        noise_sigma1_v: 0.0,
        noise_sigma2_v: 0.0,
    })
}

/// Evaluation report CSV, one row per method.
pub fn report_csv(reports: &[crate::eval::EvaluationReport], config_desc: &str, seed: u64) -> String {
    let mut out = audit_header(config_desc, seed);
    out.push_str("method,rmse_amplitude_v,rmse_frequency_hz,rmse_phase_deg,tracking_delay_ms,samples_scored,transient_skipped,additions_per_sample,multiplications_per_sample,static_storage_bytes\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.method,
            fmt(r.rmse_amplitude_v),
            fmt(r.rmse_frequency_hz),
            fmt(r.rmse_phase_deg),
            r.tracking_delay_ms.map(fmt).unwrap_or_else(|| "ambiguous".into()),
            r.samples_scored,
            r.transient_skipped,
            fmt(r.additions_per_sample),
            fmt(r.multiplications_per_sample),
            r.static_storage_bytes,
        ));
    }
    out
}

/// Aligned plain-text table of a report (for terminals and logs).
pub fn report_table(reports: &[crate::eval::EvaluationReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<10} {:>14} {:>14} {:>14} {:>10} {:>9} {:>9} {:>9}\n",
        "method", "rmse_amp(V)", "rmse_freq(Hz)", "rmse_phase(d)", "delay(ms)", "add/smp", "mul/smp", "bytes"
    ));
    for r in reports {
        out.push_str(&format!(
            "{:<10} {:>14.6e} {:>14.6e} {:>14.6e} {:>10} {:>9.1} {:>9.1} {:>9}\n",
            r.method,
            r.rmse_amplitude_v,
            r.rmse_frequency_hz,
            r.rmse_phase_deg,
            r.tracking_delay_ms.map(|d| format!("{d:.3}")).unwrap_or_else(|| "-".into()),
            r.additions_per_sample,
            r.multiplications_per_sample,
            r.static_storage_bytes,
        ));
    }
    out
}
