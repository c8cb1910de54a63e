//! Scoring: per-parameter RMSE, cross-correlation tracking delay, SNR, and
//! the per-sample arithmetic audit.

use crate::ops::OpCounters;
use crate::sim::{synthesize, SensorRecord, TruthSeries};
use crate::tracking::TrackerEstimate;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct EvaluationReport {
    pub method: String,
    pub rmse_amplitude_v: f64,
    pub rmse_frequency_hz: f64,
    pub rmse_phase_deg: f64,
    /// `None` when the correlation peak was ambiguous.
    pub tracking_delay_ms: Option<f64>,
    pub samples_scored: usize,
    pub transient_skipped: usize,
    pub additions_per_sample: f64,
    pub multiplications_per_sample: f64,
    pub static_storage_bytes: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct RmseResult {
    pub amplitude_v: f64,
    pub frequency_hz: f64,
    pub phase_deg: f64,
    pub samples_scored: usize,
}

/// Root-mean-squared error per parameter over valid estimates after `skip`.
/// Amplitude is scored on channel 1.
pub fn rmse(estimates: &[TrackerEstimate], truth: &TruthSeries, skip: usize) -> Result<RmseResult> {
    if estimates.len() != truth.len() {
        return Err(Error::InvalidConfig(format!(
            "length mismatch: {} estimates vs {} truth samples",
            estimates.len(),
            truth.len()
        )));
    }
    let mut n = 0usize;
    let (mut sa, mut sf, mut sp) = (0.0, 0.0, 0.0);
    for (i, e) in estimates.iter().enumerate().skip(skip) {
        if !e.valid {
            continue;
        }
        n += 1;
        sa += (e.amplitude1_v - truth.amplitude_v[i]).powi(2);
        sf += (e.frequency_hz - truth.frequency_hz[i]).powi(2);
        sp += (e.phase_diff_deg - truth.phase_diff_deg[i]).powi(2);
    }
    if n == 0 {
        return Err(Error::NoValidSamples);
    }
    let m = n as f64;
    Ok(RmseResult {
        amplitude_v: (sa / m).sqrt(),
        frequency_hz: (sf / m).sqrt(),
        phase_deg: (sp / m).sqrt(),
        samples_scored: n,
    })
}

/// Delay (ms) of `est` behind `truth` by normalized cross-correlation with
/// parabolic sub-sample interpolation.
///
/// The truth window is fixed at `truth[l .. len-l]` (l = max lag) and the
/// estimate window slides over it; both are mean-removed per segment. This
/// keeps the peak location unbiased on ramp-shaped traces, where a shared
/// global mean would tilt the correlation.
pub fn xcorr_delay_samples(truth: &[f64], est: &[f64], max_lag: usize) -> Result<f64> {
    let len = truth.len().min(est.len());
    if len < 10 * max_lag {
        return Err(Error::InvalidConfig(format!(
            "series of {len} samples too short for max lag {max_lag}"
        )));
    }
    let l = max_lag as isize;
    let t = &truth[max_lag..len - max_lag];
    let t_mean = t.iter().sum::<f64>() / t.len() as f64;
    let tc: Vec<f64> = t.iter().map(|v| v - t_mean).collect();
    let t_norm = tc.iter().map(|v| v * v).sum::<f64>().sqrt();

    let mut vals = Vec::with_capacity(2 * max_lag + 1);
    for lag in -l..=l {
        let start = (l + lag) as usize;
        let seg = &est[start..start + tc.len()];
        let m = seg.iter().sum::<f64>() / seg.len() as f64;
        let mut dot = 0.0;
        let mut nn = 0.0;
        for (a, b) in tc.iter().zip(seg) {
            let bc = b - m;
            dot += a * bc;
            nn += bc * bc;
        }
        vals.push(if nn > 0.0 { dot / (t_norm * nn.sqrt()) } else { 0.0 });
    }

    let (mut best, mut best_val) = (0usize, f64::NEG_INFINITY);
    for (i, &v) in vals.iter().enumerate() {
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    // Plateau detection: a second sample within 1e-12 of the peak that is not
    // adjacent means the peak is ambiguous.
    for (i, &v) in vals.iter().enumerate() {
        if i.abs_diff(best) > 1 && (best_val - v).abs() < 1e-12 {
            return Err(Error::AmbiguousPeak);
        }
    }
    let mut pos = best as f64;
    if best > 0 && best + 1 < vals.len() {
        let (y0, y1, y2) = (vals[best - 1], vals[best], vals[best + 1]);
        let denom = y0 - 2.0 * y1 + y2;
        if denom < 0.0 {
            pos += 0.5 * (y0 - y2) / denom;
        }
    }
    // Positive result: estimate lags truth.
    Ok(pos - max_lag as f64)
}

/// Tracking delay in ms, averaged over the three parameter traces.
pub fn tracking_delay(
    estimates: &[TrackerEstimate],
    truth: &TruthSeries,
    max_lag_ms: f64,
    skip: usize,
) -> Result<f64> {
    let fs = truth.sample_rate_hz;
    let max_lag = (max_lag_ms * fs / 1000.0).round() as usize;
    let amp: Vec<f64> = estimates.iter().map(|e| e.amplitude1_v).collect();
    let freq: Vec<f64> = estimates.iter().map(|e| e.frequency_hz).collect();
    let phase: Vec<f64> = estimates.iter().map(|e| e.phase_diff_deg).collect();
    let mut total = 0.0;
    for (est, tr) in [
        (&amp, &truth.amplitude_v),
        (&freq, &truth.frequency_hz),
        (&phase, &truth.phase_diff_deg),
    ] {
        total += xcorr_delay_samples(&tr[skip..], &est[skip..], max_lag)?;
    }
    Ok(total / 3.0 * 1000.0 / fs)
}

/// Delay of the amplitude trace alone; the cleanest single-parameter probe.
pub fn tracking_delay_amplitude(
    estimates: &[TrackerEstimate],
    truth: &TruthSeries,
    max_lag_ms: f64,
    skip: usize,
) -> Result<f64> {
    let fs = truth.sample_rate_hz;
    let max_lag = (max_lag_ms * fs / 1000.0).round() as usize;
    let amp: Vec<f64> = estimates.iter().map(|e| e.amplitude1_v).collect();
    let d = xcorr_delay_samples(&truth.amplitude_v[skip..], &amp[skip..], max_lag)?;
    Ok(d * 1000.0 / fs)
}

/// Average SNR in dB over both channels: signal power from the noise-free
/// resynthesis of the truth, noise as the residual. Returns `f64::INFINITY`
/// for noise-free records.
pub fn measure_snr(record: &SensorRecord) -> f64 {
    let (c1, c2) = synthesize(&record.truth, false);
    let mut sig = 0.0;
    let mut noise = 0.0;
    for i in 0..record.x1.len() {
        sig += c1[i] * c1[i] + c2[i] * c2[i];
        let (d1, d2) = (record.x1[i] - c1[i], record.x2[i] - c2[i]);
        noise += d1 * d1 + d2 * d2;
    }
    if noise == 0.0 {
        return f64::INFINITY;
    }
    10.0 * (sig / noise).log10()
}

/// Per-sample averages of instrumented counters over a completed run.
pub fn audit_complexity(ops: &OpCounters, samples: u64) -> (f64, f64, u64) {
    let n = samples.max(1) as f64;
    (ops.additions as f64 / n, ops.multiplications as f64 / n, ops.static_storage_bytes)
}
