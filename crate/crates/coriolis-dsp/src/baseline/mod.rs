//! Baseline trackers: the Hilbert-FIR analytic method and the adaptive
//! notch filter (ANF) with sliding-DTFT amplitude/phase extraction.

pub mod anf;
pub mod dtft;
pub mod hilbert;

pub use anf::{AnfConfig, AnfState};
pub use dtft::DtftState;
pub use hilbert::{design_hilbert_fir, HilbertTracker};

use crate::defaults;
use crate::ops::{OpCounters, BYTES_PER_REAL};
use crate::tracking::TrackerEstimate;
use crate::Result;

/// ANF frequency estimate driving two sliding DTFTs for amplitude and phase.
///
/// The ANF sees channel 1 only (optionally the channel mean); the DTFT bin
/// follows the notch estimate, with a full-window recomputation whenever the
/// bin has drifted more than `2*pi/(10N)` since the last rebase — the O(1)
/// recursion is only exact at a fixed bin frequency.
pub struct DtftAnfTracker {
    anf: AnfState,
    dtft1: DtftState,
    dtft2: DtftState,
    omega_bin: f64,
    use_channel_mean: bool,
    freq_band_hz: (f64, f64),
    sample_rate_hz: f64,
    sample_index: u64,
    pub ops: OpCounters,
}

impl DtftAnfTracker {
    pub fn new(config: AnfConfig, window: usize) -> Self {
        let anf = AnfState::new(config);
        let omega_bin = anf.omega_hat();
        let storage = 12 * BYTES_PER_REAL // ANF scalars
            + DtftState::storage_bytes(window) * 2;
        DtftAnfTracker {
            anf,
            dtft1: DtftState::new(window, omega_bin),
            dtft2: DtftState::new(window, omega_bin),
            omega_bin,
            use_channel_mean: false,
            freq_band_hz: (70.0, 115.0),
            sample_rate_hz: config.sample_rate_hz,
            sample_index: 0,
            ops: OpCounters::new(storage),
        }
    }

    pub fn with_defaults() -> Self {
        Self::new(AnfConfig::default(), defaults::DTFT_WINDOW)
    }

    /// Feed the ANF with mean(x1, x2) instead of x1 alone.
    pub fn set_channel_mean(&mut self, on: bool) {
        self.use_channel_mean = on;
    }

    pub fn step(&mut self, x1: f64, x2: f64) -> Result<TrackerEstimate> {
        let drive = if self.use_channel_mean {
            self.ops.add(1);
            self.ops.mul(1);
            0.5 * (x1 + x2)
        } else {
            x1
        };
        let (_es, omega_hat) = self.anf.step(drive, &mut self.ops)?;

        let n = self.dtft1.window();
        let threshold = 2.0 * std::f64::consts::PI / (10.0 * n as f64);
        if (omega_hat - self.omega_bin).abs() > threshold {
            self.omega_bin = omega_hat;
            self.dtft1.rebase(self.omega_bin, &mut self.ops);
            self.dtft2.rebase(self.omega_bin, &mut self.ops);
        }
        let s1 = self.dtft1.push(x1, &mut self.ops);
        let s2 = self.dtft2.push(x2, &mut self.ops);

        let idx = self.sample_index;
        self.sample_index += 1;

        let freq = omega_hat * self.sample_rate_hz / (2.0 * std::f64::consts::PI);
        self.ops.mul(1); // Hz conversion

        let primed = self.dtft1.primed();
        let diverged = self.anf.diverged();
        if !primed || diverged {
            return Ok(TrackerEstimate {
                amplitude1_v: 0.0,
                amplitude2_v: 0.0,
                frequency_hz: freq,
                phase_diff_deg: 0.0,
                sample_index: idx,
                valid: false,
            });
        }

        let scale = 2.0 / n as f64;
        self.ops.cabs();
        self.ops.mul(1);
        let amplitude1_v = s1.norm() * scale;
        self.ops.cabs();
        self.ops.mul(1);
        let amplitude2_v = s2.norm() * scale;
        self.ops.cmul(); // s1 * conj(s2); arctangent excluded
        let phase_diff_deg = (s1 * s2.conj()).arg().to_degrees();

        let in_band = freq >= self.freq_band_hz.0 && freq <= self.freq_band_hz.1;
        let nonzero = amplitude1_v > 1e-12 && amplitude2_v > 1e-12;
        Ok(TrackerEstimate {
            amplitude1_v,
            amplitude2_v,
            frequency_hz: freq,
            phase_diff_deg,
            sample_index: idx,
            valid: in_band && nonzero,
        })
    }

    pub fn run(&mut self, x1: &[f64], x2: &[f64]) -> Result<Vec<TrackerEstimate>> {
        x1.iter().zip(x2).map(|(&a, &b)| self.step(a, b)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn steady_tone_converges() {
        let fs = 2000.0;
        let mut tr = DtftAnfTracker::with_defaults();
        let n = 4000;
        let (x1, x2): (Vec<f64>, Vec<f64>) = (0..n)
            .map(|i| {
                let t = 2.0 * PI * 90.0 * i as f64 / fs;
                (0.1 * (t + 2.0_f64.to_radians()).sin(), 0.1 * t.sin())
            })
            .unzip();
        let est = tr.run(&x1, &x2).unwrap();
        let last = est.last().unwrap();
        assert!(last.valid);
        assert!((last.frequency_hz - 90.0).abs() < 0.1, "f = {}", last.frequency_hz);
        assert!((last.phase_diff_deg - 2.0).abs() < 0.1, "phi = {}", last.phase_diff_deg);
        assert!((last.amplitude1_v - 0.1).abs() < 0.001, "A = {}", last.amplitude1_v);
    }

    #[test]
    fn zero_input_invalid() {
        let mut tr = DtftAnfTracker::with_defaults();
        for _ in 0..400 {
            let e = tr.step(0.0, 0.0).unwrap();
            assert!(!e.valid);
        }
    }
}
