//! Hilbert-transform FIR analytic tracker.
//!
//! The imaginary branch is a Type III (odd-length, antisymmetric) FIR
//! approximating the ideal Hilbert transformer; the real branch is delayed by
//! the FIR's group delay of (length-1)/2 samples so the two stay aligned.
//! Extraction of amplitude/frequency/phase difference then reuses the same
//! complex arithmetic as the CBF trackers.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::defaults;
use crate::ops::{OpCounters, BYTES_PER_COMPLEX, BYTES_PER_REAL};
use crate::tracking::{frequency_from_span, phase_difference, AnalyticPair, TrackerEstimate};
use crate::{Error, Result};

/// Hamming-windowed ideal Hilbert FIR. Odd length; taps antisymmetric with
/// zeros at even offsets from the centre (Type III).
pub fn design_hilbert_fir(length: usize) -> Result<Vec<f64>> {
    if length < 7 || length % 2 == 0 {
        return Err(Error::InvalidLength(length));
    }
    let m = (length as isize - 1) / 2;
    let taps: Vec<f64> = (-m..=m)
        .map(|k| {
            if k % 2 == 0 {
                0.0
            } else {
                let n = (k + m) as f64;
                let window = 0.54 - 0.46 * (2.0 * PI * n / (length as f64 - 1.0)).cos();
                2.0 / (PI * k as f64) * window
            }
        })
        .collect();
    Ok(taps)
}

/// Magnitude of the FIR response at normalized frequency `omega` rad/sample.
pub fn fir_response_mag(taps: &[f64], omega: f64) -> f64 {
    taps.iter()
        .enumerate()
        .map(|(i, &t)| Complex64::from_polar(1.0, -omega * i as f64) * t)
        .sum::<Complex64>()
        .norm()
}

struct Channel {
    fir_line: Vec<f64>,
    pos: usize,
}

impl Channel {
    fn new(len: usize) -> Self {
        Channel { fir_line: vec![0.0; len], pos: 0 }
    }

    /// Returns (delayed real sample, FIR output).
    fn step(&mut self, taps: &[f64], x: f64, ops: &mut OpCounters) -> (f64, f64) {
        let len = self.fir_line.len();
        self.pos = (self.pos + 1) % len;
        self.fir_line[self.pos] = x;
        let mut acc = 0.0;
        for (i, &t) in taps.iter().enumerate() {
            let idx = (self.pos + len - i) % len;
            ops.mul(1);
            ops.add(1);
            acc += t * self.fir_line[idx];
        }
        let mid = (len - 1) / 2;
        let delayed = self.fir_line[(self.pos + len - mid) % len];
        (delayed, acc)
    }
}

pub struct HilbertTracker {
    taps: Vec<f64>,
    ch1: Channel,
    ch2: Channel,
    ring: Vec<AnalyticPair>,
    ring_filled: usize,
    warmup: usize,
    span: usize,
    sample_rate_hz: f64,
    gain_compensation: bool,
    gain_cache_freq: f64,
    gain_cache: f64,
    freq_band_hz: (f64, f64),
    sample_index: u64,
    pub ops: OpCounters,
}

impl HilbertTracker {
    pub fn new(taps: Vec<f64>, span: usize, sample_rate_hz: f64) -> Result<Self> {
        if taps.len() < 7 || taps.len() % 2 == 0 {
            return Err(Error::InvalidLength(taps.len()));
        }
        let mid = (taps.len() - 1) / 2;
        let k = span;
        let storage = (taps.len() as u64 * 2 + taps.len() as u64) * BYTES_PER_REAL
            + ((k + 1) as u64) * 2 * BYTES_PER_COMPLEX;
        Ok(HilbertTracker {
            ch1: Channel::new(taps.len()),
            ch2: Channel::new(taps.len()),
            taps,
            ring: vec![
                AnalyticPair { z1: Complex64::new(0.0, 0.0), z2: Complex64::new(0.0, 0.0) };
                k + 1
            ],
            ring_filled: 0,
            warmup: 5 * mid,
            span,
            sample_rate_hz,
            gain_compensation: true,
            gain_cache_freq: 0.0,
            gain_cache: 1.0,
            freq_band_hz: (70.0, 115.0),
            sample_index: 0,
            ops: OpCounters::new(storage),
        })
    }

    pub fn with_defaults() -> Result<Self> {
        Self::new(
            design_hilbert_fir(defaults::HILBERT_TAPS)?,
            defaults::FREQ_SPAN_SAMPLES,
            defaults::SAMPLE_RATE_HZ,
        )
    }

    pub fn warmup_samples(&self) -> usize {
        self.warmup
    }

    pub fn step(&mut self, x1: f64, x2: f64) -> Result<TrackerEstimate> {
        if !x1.is_finite() || !x2.is_finite() {
            return Err(Error::NonFiniteInput(self.sample_index as usize));
        }
        let (r1, i1) = self.ch1.step(&self.taps, x1, &mut self.ops);
        let (r2, i2) = self.ch2.step(&self.taps, x2, &mut self.ops);
        let pair = AnalyticPair { z1: Complex64::new(r1, i1), z2: Complex64::new(r2, i2) };
        self.ring.rotate_right(1);
        self.ring[0] = pair;
        self.ring_filled = (self.ring_filled + 1).min(self.ring.len());

        let idx = self.sample_index;
        self.sample_index += 1;

        let magnitudes_ok = pair.z1.norm() > 1e-12 && pair.z2.norm() > 1e-12;
        let warmed = idx >= self.warmup as u64 && self.ring_filled == self.ring.len();
        if !(magnitudes_ok && warmed) {
            return Ok(TrackerEstimate {
                amplitude1_v: 0.0,
                amplitude2_v: 0.0,
                frequency_hz: 0.0,
                phase_diff_deg: 0.0,
                sample_index: idx,
                valid: false,
            });
        }

        let past = self.ring[self.span];
        self.ops.cmul();
        self.ops.cmul();
        self.ops.cadd();
        let rotor = pair.z1 * past.z1.conj() + pair.z2 * past.z2.conj();
        self.ops.mul(1);
        let freq =
            frequency_from_span(rotor, Complex64::new(1.0, 0.0), self.span, self.sample_rate_hz)?;

        self.ops.cmul();
        let phase_rad = phase_difference(&pair)?;

        // For a real tone the analytic pair is x + j*H{x}; with FIR gain g at
        // the tone the dominant rotating component has magnitude A*(1+g)/2.
        let gain = if self.gain_compensation {
            if (freq - self.gain_cache_freq).abs() > 0.01 {
                let omega = 2.0 * PI * freq / self.sample_rate_hz;
                let g = fir_response_mag(&self.taps, omega);
                self.gain_cache = (1.0 + g) / 2.0;
                self.gain_cache_freq = freq;
            }
            self.gain_cache
        } else {
            1.0
        };
        self.ops.cabs();
        self.ops.mul(1);
        let amplitude1_v = pair.z1.norm() / gain;
        self.ops.cabs();
        self.ops.mul(1);
        let amplitude2_v = pair.z2.norm() / gain;

        let in_band = freq >= self.freq_band_hz.0 && freq <= self.freq_band_hz.1;
        Ok(TrackerEstimate {
            amplitude1_v,
            amplitude2_v,
            frequency_hz: freq,
            phase_diff_deg: phase_rad.to_degrees(),
            sample_index: idx,
            valid: in_band,
        })
    }

    pub fn run(&mut self, x1: &[f64], x2: &[f64]) -> Result<Vec<TrackerEstimate>> {
        x1.iter().zip(x2).map(|(&a, &b)| self.step(a, b)).collect()
    }
}
