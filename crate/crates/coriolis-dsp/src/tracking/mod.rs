//! Streaming CBF / CNF / CBF-CNF trackers.
//!
//! Both sensor channels run through identical complex filter chains; the
//! filter outputs are analytic samples from which amplitude (`|z|`), phase
//! difference (`arg(z1 * conj(z2))`) and frequency (phase advance over K
//! samples) follow directly. Because the chains are identical, the filter's
//! own phase response cancels out of the phase difference entirely — that is
//! the property that makes the method attractive for Coriolis metering.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::defaults;
use crate::filter::{complex_shift, group_delay, response_of, ComplexCoefficients, PrototypeFilter};
use crate::ops::{OpCounters, BYTES_PER_COMPLEX, BYTES_PER_REAL};
use crate::{Error, Result};

/// Direct-form II transposed realization of one complex section on a real
/// input stream.
#[derive(Debug, Clone)]
pub struct FilterState {
    pub coefficients: ComplexCoefficients,
    state: Vec<Complex64>,
    pub samples_processed: u64,
}

impl FilterState {
    pub fn new(coefficients: ComplexCoefficients) -> Self {
        let len = coefficients.numerator.len().max(coefficients.denominator.len()) - 1;
        FilterState { coefficients, state: vec![Complex64::new(0.0, 0.0); len], samples_processed: 0 }
    }

    /// Advance one sample. `ops` receives the instrumented cost: numerator
    /// taps are complex*real (the input is real), denominator taps are full
    /// complex multiplies against the complex output.
    pub fn filter_step(&mut self, x: f64, ops: &mut OpCounters) -> Result<Complex64> {
        if !x.is_finite() {
            return Err(Error::NonFiniteInput(self.samples_processed as usize));
        }
        let b = &self.coefficients.numerator;
        let a = &self.coefficients.denominator;
        let n = self.state.len();

        let y = if n == 0 {
            ops.cmul_real();
            b[0] * x
        } else {
            ops.cmul_real();
            ops.cadd();
            b[0] * x + self.state[0]
        };
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            if i + 1 < b.len() {
                ops.cmul_real();
                s += b[i + 1] * x;
            }
            if i + 1 < a.len() {
                ops.cmul();
                ops.cadd();
                s -= a[i + 1] * y;
            }
            if i + 1 < n {
                ops.cadd();
                s += self.state[i + 1];
            }
            self.state[i] = s;
        }
        self.samples_processed += 1;
        Ok(y)
    }

    pub fn reset(&mut self) {
        self.state.iter_mut().for_each(|s| *s = Complex64::new(0.0, 0.0));
        self.samples_processed = 0;
    }

    fn storage_bytes(&self) -> u64 {
        let coeff = (self.coefficients.numerator.len() + self.coefficients.denominator.len()) as u64;
        (coeff + self.state.len() as u64) * BYTES_PER_COMPLEX
    }
}

/// Series of complex sections applied in order.
#[derive(Debug, Clone)]
pub struct FilterChain {
    pub sections: Vec<FilterState>,
}

impl FilterChain {
    pub fn new(sections: Vec<ComplexCoefficients>) -> Self {
        FilterChain { sections: sections.into_iter().map(FilterState::new).collect() }
    }

    pub fn step(&mut self, x: f64, ops: &mut OpCounters) -> Result<Complex64> {
        let mut z = Complex64::new(x, 0.0);
        for (i, s) in self.sections.iter_mut().enumerate() {
            if i == 0 {
                z = s.filter_step(x, ops)?;
            } else {
                z = filter_step_complex(s, z, ops)?;
            }
        }
        Ok(z)
    }

    /// Chain response at `omega` (product of section responses).
    pub fn response(&self, omega: f64) -> Complex64 {
        self.sections.iter().map(|s| response_of(&s.coefficients, omega)).product()
    }

    /// Total group delay at `omega` in samples.
    pub fn group_delay(&self, omega: f64) -> f64 {
        self.sections.iter().map(|s| group_delay(&s.coefficients, omega).0).sum()
    }

    fn storage_bytes(&self) -> u64 {
        self.sections.iter().map(|s| s.storage_bytes()).sum()
    }
}

/// DF2T step for a complex input sample (inner sections of a cascade).
fn filter_step_complex(
    fs: &mut FilterState,
    x: Complex64,
    ops: &mut OpCounters,
) -> Result<Complex64> {
    if !x.re.is_finite() || !x.im.is_finite() {
        return Err(Error::NonFiniteInput(fs.samples_processed as usize));
    }
    let b = &fs.coefficients.numerator;
    let a = &fs.coefficients.denominator;
    let n = fs.state.len();
    let y = if n == 0 {
        ops.cmul();
        b[0] * x
    } else {
        ops.cmul();
        ops.cadd();
        b[0] * x + fs.state[0]
    };
    for i in 0..n {
        let mut s = Complex64::new(0.0, 0.0);
        if i + 1 < b.len() {
            ops.cmul();
            s += b[i + 1] * x;
        }
        if i + 1 < a.len() {
            ops.cmul();
            ops.cadd();
            s -= a[i + 1] * y;
        }
        if i + 1 < n {
            ops.cadd();
            s += fs.state[i + 1];
        }
        fs.state[i] = s;
    }
    fs.samples_processed += 1;
    Ok(y)
}

/// One analytic sample per sensor.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticPair {
    pub z1: Complex64,
    pub z2: Complex64,
}

/// Per-sample tracker output.
#[derive(Debug, Clone, Copy)]
pub struct TrackerEstimate {
    pub amplitude1_v: f64,
    pub amplitude2_v: f64,
    pub frequency_hz: f64,
    pub phase_diff_deg: f64,
    pub sample_index: u64,
    pub valid: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Cbf,
    Cnf,
    CbfCnf,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Cbf => "cbf",
            Method::Cnf => "cnf",
            Method::CbfCnf => "cbf-cnf",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrackerConfig {
    pub sample_rate_hz: f64,
    pub center_freq_hz: f64,
    /// Frequency averaging span K: phase advance measured over K samples.
    pub freq_span_samples: usize,
    /// `None` = 5x the chain group delay at centre frequency, rounded up.
    pub warmup_samples: Option<usize>,
    pub gain_compensation: bool,
    pub method: Method,
    /// Extra comb notches (signed Hz); only meaningful for the CNF method.
    pub comb_notches_hz: Vec<f64>,
    /// Estimates outside this band are flagged invalid.
    pub freq_band_hz: (f64, f64),
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            sample_rate_hz: defaults::SAMPLE_RATE_HZ,
            center_freq_hz: defaults::CENTER_FREQ_HZ,
            freq_span_samples: defaults::FREQ_SPAN_SAMPLES,
            warmup_samples: None,
            gain_compensation: true,
            method: Method::Cbf,
            comb_notches_hz: Vec::new(),
            freq_band_hz: (70.0, 115.0),
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<()> {
        let f_max = self.freq_band_hz.1;
        let step = self.freq_span_samples as f64 * 2.0 * PI * f_max / self.sample_rate_hz;
        if self.freq_span_samples == 0 || step >= PI {
            return Err(Error::InvalidConfig(format!(
                "span K = {} is ambiguous above {:.1} Hz (K*2*pi*f_max/fs must stay below pi)",
                self.freq_span_samples, f_max
            )));
        }
        Ok(())
    }
}

/// Build the filter chain for a method at the default operating point.
fn default_chain(config: &TrackerConfig) -> Result<FilterChain> {
    let chain = match config.method {
        Method::Cbf => FilterChain::new(vec![defaults::default_cbf()?]),
        Method::Cnf => {
            if config.comb_notches_hz.is_empty() {
                FilterChain::new(vec![defaults::default_cnf()?])
            } else {
                build_comb_cnf(
                    &config.comb_notches_hz,
                    &defaults::elliptic_hp4(),
                    config.freq_band_hz,
                )?
            }
        }
        Method::CbfCnf => FilterChain::new(vec![defaults::default_cbf_cnf()?]),
    };
    Ok(chain)
}

/// Comb filter: one complex-shifted notch section per listed frequency.
pub fn build_comb_cnf(
    notches_hz: &[f64],
    prototype: &PrototypeFilter,
    tracking_band_hz: (f64, f64),
) -> Result<FilterChain> {
    let fs = prototype.sample_rate_hz;
    let mut sections = Vec::new();
    for &f in notches_hz {
        if f.abs() >= fs / 2.0 {
            return Err(Error::InvalidConfig(format!("notch {f} Hz beyond Nyquist")));
        }
        if f >= tracking_band_hz.0 - 5.0 && f <= tracking_band_hz.1 + 5.0 {
            return Err(Error::NotchInTrackingBand(f));
        }
        sections.push(complex_shift(prototype, 2.0 * PI * f / fs)?);
    }
    Ok(FilterChain { sections: sections.into_iter().map(FilterState::new).collect() })
}

/// `arg(z1 * conj(z2))` wrapped to (-pi, pi]; positive when sensor 1 leads.
pub fn phase_difference(pair: &AnalyticPair) -> Result<f64> {
    if pair.z1.norm() == 0.0 || pair.z2.norm() == 0.0 {
        return Err(Error::ZeroMagnitudeInput);
    }
    Ok((pair.z1 * pair.z2.conj()).arg())
}

/// `|z| / gain`; gain is the filter-chain magnitude at the tracked frequency
/// when compensation is on, 1 otherwise.
pub fn amplitude(z: Complex64, gain: f64) -> f64 {
    debug_assert!(gain > 0.0);
    z.norm() / gain
}

/// Frequency from the phase advance over `span` samples:
/// `arg(z_now * conj(z_past)) * fs / (2*pi*span)`.
pub fn frequency_from_span(
    z_now: Complex64,
    z_past: Complex64,
    span: usize,
    sample_rate_hz: f64,
) -> Result<f64> {
    if z_now.norm() == 0.0 || z_past.norm() == 0.0 {
        return Err(Error::ZeroMagnitudeInput);
    }
    Ok((z_now * z_past.conj()).arg() * sample_rate_hz / (2.0 * PI * span as f64))
}

/// Streaming two-channel tracker around a complex filter chain.
pub struct ComplexTracker {
    pub config: TrackerConfig,
    chain1: FilterChain,
    chain2: FilterChain,
    /// Ring of the last K+1 analytic pairs; index 0 is the newest.
    ring: Vec<AnalyticPair>,
    ring_filled: usize,
    warmup: usize,
    sample_index: u64,
    gain_cache_freq: f64,
    gain_cache: f64,
    pub ops: OpCounters,
}

impl ComplexTracker {
    pub fn new(config: TrackerConfig) -> Result<Self> {
        config.validate()?;
        let chain1 = default_chain(&config)?;
        let chain2 = default_chain(&config)?;
        Self::with_chains(config, chain1, chain2)
    }

    /// Custom chains (identical construction for both channels is the
    /// caller's responsibility; phase-difference cancellation depends on it).
    pub fn with_chains(
        config: TrackerConfig,
        chain1: FilterChain,
        chain2: FilterChain,
    ) -> Result<Self> {
        config.validate()?;
        let omega_c = 2.0 * PI * config.center_freq_hz / config.sample_rate_hz;
        let warmup = config
            .warmup_samples
            .unwrap_or_else(|| (5.0 * chain1.group_delay(omega_c)).ceil().max(0.0) as usize);
        let k = config.freq_span_samples;
        let gain = if config.gain_compensation { chain1.response(omega_c).norm() } else { 1.0 };
        let storage = chain1.storage_bytes() * 2
            + ((k + 1) as u64) * 2 * BYTES_PER_COMPLEX
            + 4 * BYTES_PER_REAL;
        Ok(ComplexTracker {
            config,
            chain1,
            chain2,
            ring: vec![AnalyticPair { z1: Complex64::new(0.0, 0.0), z2: Complex64::new(0.0, 0.0) }; k + 1],
            ring_filled: 0,
            warmup,
            sample_index: 0,
            gain_cache_freq: 0.0,
            gain_cache: gain,
            ops: OpCounters::new(storage),
        })
    }

    pub fn warmup_samples(&self) -> usize {
        self.warmup
    }

    /// Process one sample of each sensor.
    pub fn step(&mut self, x1: f64, x2: f64) -> Result<TrackerEstimate> {
        // The analytic signal of A*cos keeps only the positive-frequency half
        // of the spectrum, which carries half the amplitude; the factor 2
        // restores it.
        self.ops.cmul_real();
        let z1 = self.chain1.step(x1, &mut self.ops)? * 2.0;
        self.ops.cmul_real();
        let z2 = self.chain2.step(x2, &mut self.ops)? * 2.0;
        let pair = AnalyticPair { z1, z2 };

        self.ring.rotate_right(1);
        self.ring[0] = pair;
        self.ring_filled = (self.ring_filled + 1).min(self.ring.len());

        let k = self.config.freq_span_samples;
        let fs = self.config.sample_rate_hz;
        let idx = self.sample_index;
        self.sample_index += 1;

        let magnitudes_ok = z1.norm() > 1e-12 && z2.norm() > 1e-12;
        // The first `warmup` estimates are never valid.
        let warmed = idx >= self.warmup as u64 && self.ring_filled == self.ring.len();
        if !(magnitudes_ok && warmed) {
            return Ok(TrackerEstimate {
                amplitude1_v: 0.0,
                amplitude2_v: 0.0,
                frequency_hz: self.config.center_freq_hz,
                phase_diff_deg: 0.0,
                sample_index: idx,
                valid: false,
            });
        }

        let past = self.ring[k];
        // Summing both channels' rotors before taking the argument keeps the
        // frequency estimate exactly invariant under a channel swap.
        self.ops.cmul();
        self.ops.cmul();
        self.ops.cadd();
        let rotor = z1 * past.z1.conj() + z2 * past.z2.conj();
        self.ops.mul(1); // the 1/(2*pi*K) scaling; arctangent excluded
        let freq = frequency_from_span(rotor, Complex64::new(1.0, 0.0), k, fs)?;

        self.ops.cmul(); // z1 * conj(z2); arctangent excluded
        let phase_rad = phase_difference(&pair)?;

        let gain = if self.config.gain_compensation {
            if (freq - self.gain_cache_freq).abs() > 0.01 {
                // Response evaluation is a table-lookup candidate in a real
                // deployment; it is deliberately not op-counted (see audit
                // notes in the evaluation module).
                let omega = 2.0 * PI * freq / fs;
                self.gain_cache = self.chain1.response(omega).norm();
                self.gain_cache_freq = freq;
            }
            self.gain_cache
        } else {
            1.0
        };
        self.ops.cabs();
        self.ops.mul(1); // division by gain
        let amplitude1_v = amplitude(z1, gain);
        self.ops.cabs();
        self.ops.mul(1);
        let amplitude2_v = amplitude(z2, gain);

        let in_band = freq >= self.config.freq_band_hz.0 && freq <= self.config.freq_band_hz.1;
        Ok(TrackerEstimate {
            amplitude1_v,
            amplitude2_v,
            frequency_hz: freq,
            phase_diff_deg: phase_rad.to_degrees(),
            sample_index: idx,
            valid: in_band,
        })
    }

    /// Run over whole slices; convenience for benchmarks and tests.
    pub fn run(&mut self, x1: &[f64], x2: &[f64]) -> Result<Vec<TrackerEstimate>> {
        x1.iter().zip(x2).map(|(&a, &b)| self.step(a, b)).collect()
    }
}
