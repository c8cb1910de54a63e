//! Ground-truthed two-sensor signal generation.
//!
//! The Modified Random Walk Model (MRWM) drives amplitude, frequency and
//! phase difference with low-pass-shaped uniform noise, min-max rescaled to
//! the configured ranges over the whole realization, then synthesizes the
//! sensor pair with accumulated instantaneous phase and adds white Gaussian
//! sensor noise. A plain reflecting-walk RWM stand-in and the batch
//! (empty-to-full transition) linear-ramp scenario cover the remaining test
//! scenarios.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::defaults;
use crate::filter::{design_butterworth, FilterKind};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct MrwmParams {
    pub sample_rate_hz: f64,
    pub shaping_cutoff_hz: f64,
    pub amp_range_v: (f64, f64),
    pub freq_range_hz: (f64, f64),
    pub phase_range_deg: (f64, f64),
    pub noise_sigma1_v: f64,
    pub noise_sigma2_v: f64,
    pub duration_samples: usize,
    pub rng_seed: u64,
    /// Archaeology switch: use the literal `omega(n)*n` phase instead of the
    /// accumulated instantaneous phase.
    pub literal_phase: bool,
}

impl Default for MrwmParams {
    fn default() -> Self {
        MrwmParams {
            sample_rate_hz: defaults::SAMPLE_RATE_HZ,
            shaping_cutoff_hz: defaults::SHAPING_CUTOFF_HZ,
            amp_range_v: (defaults::AMP_MIN_V, defaults::AMP_MAX_V),
            freq_range_hz: (defaults::FREQ_MIN_HZ, defaults::FREQ_MAX_HZ),
            phase_range_deg: (defaults::PHASE_MIN_DEG, defaults::PHASE_MAX_DEG),
            noise_sigma1_v: 0.0,
            noise_sigma2_v: 0.0,
            duration_samples: (60.0 * defaults::SAMPLE_RATE_HZ) as usize,
            rng_seed: 0,
            literal_phase: false,
        }
    }
}

impl MrwmParams {
    pub fn validate(&self) -> Result<()> {
        if self.sample_rate_hz <= 2.0 * self.freq_range_hz.1 {
            return Err(Error::InvalidConfig("sample rate must exceed 2*f_max".into()));
        }
        if self.shaping_cutoff_hz >= self.sample_rate_hz / 2.0 {
            return Err(Error::InvalidConfig("shaping cutoff beyond Nyquist".into()));
        }
        if self.duration_samples == 0 {
            return Err(Error::InvalidConfig("zero duration".into()));
        }
        Ok(())
    }
}

/// Per-sample ground truth.
#[derive(Debug, Clone)]
pub struct TruthSeries {
    pub amplitude_v: Vec<f64>,
    pub frequency_hz: Vec<f64>,
    pub phase_diff_deg: Vec<f64>,
    pub sample_rate_hz: f64,
}

impl TruthSeries {
    pub fn len(&self) -> usize {
        self.amplitude_v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitude_v.is_empty()
    }
}

/// Sensor voltages plus the truth that generated them.
#[derive(Debug, Clone)]
pub struct SensorRecord {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub truth: TruthSeries,
    pub rng_seed: u64,
    pub noise_sigma1_v: f64,
    pub noise_sigma2_v: f64,
}

/// Sensor synthesis from truth: accumulated phase
/// `Phi(n) = Phi(n-1) + 2*pi*f(n)/fs`, `x1 = A*sin(Phi + phi)`,
/// `x2 = A*sin(Phi)` (sensor 1 leads).
pub fn synthesize(truth: &TruthSeries, literal_phase: bool) -> (Vec<f64>, Vec<f64>) {
    let fs = truth.sample_rate_hz;
    let n = truth.len();
    let mut x1 = Vec::with_capacity(n);
    let mut x2 = Vec::with_capacity(n);
    let mut phase = 0.0f64;
    for i in 0..n {
        phase = if literal_phase {
            // The published recursion's literal reading; jumps whenever f
            // moves, kept only for comparison.
            2.0 * PI * truth.frequency_hz[i] * i as f64 / fs
        } else {
            phase + 2.0 * PI * truth.frequency_hz[i] / fs
        };
        let a = truth.amplitude_v[i];
        let ph = truth.phase_diff_deg[i].to_radians();
        x1.push(a * (phase + ph).sin());
        x2.push(a * phase.sin());
    }
    (x1, x2)
}

/// Uniform(-1,1) noise, 2nd-order Butterworth low-pass, then whole-realization
/// min-max rescale to `range`. Degenerate (constant) traces pin to the range
/// midpoint.
fn shaped_trace(
    rng: &mut ChaCha8Rng,
    n: usize,
    range: (f64, f64),
    cutoff_hz: f64,
    fs: f64,
) -> Result<Vec<f64>> {
    let filter = design_butterworth(2, cutoff_hz, FilterKind::LowPass, fs)?;
    let b = filter.numerator().to_vec();
    let a = filter.denominator().to_vec();
    let mut s = [0.0f64; 2];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let e: f64 = rng.gen_range(-1.0..1.0);
        let y = b[0] * e + s[0];
        s[0] = b[1] * e - a[1] * y + s[1];
        s[1] = b[2] * e - a[2] * y;
        out.push(y);
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in &out {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let (rmin, rmax) = range;
    if hi - lo < 1e-30 {
        let mid = 0.5 * (rmin + rmax);
        out.iter_mut().for_each(|v| *v = mid);
    } else {
        let scale = (rmax - rmin) / (hi - lo);
        out.iter_mut().for_each(|v| *v = rmin + (*v - lo) * scale);
    }
    Ok(out)
}

/// Box-Muller standard normal pairs from the given stream.
fn gaussian(rng: &mut ChaCha8Rng, sigma: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..1.0);
        let r = (-2.0 * u1.ln()).sqrt();
        out.push(sigma * r * (2.0 * PI * u2).cos());
        if out.len() < n {
            out.push(sigma * r * (2.0 * PI * u2).sin());
        }
    }
    out
}

/// Generate a Modified Random Walk Model record. Pure function of params.
pub fn mrwm_generate(params: &MrwmParams) -> Result<SensorRecord> {
    params.validate()?;
    let n = params.duration_samples;
    let fs = params.sample_rate_hz;
    // Independent deterministic sub-streams per parameter and noise channel.
    let stream = |tag: u64| ChaCha8Rng::seed_from_u64(params.rng_seed ^ (tag << 32));
    let amplitude_v =
        shaped_trace(&mut stream(1), n, params.amp_range_v, params.shaping_cutoff_hz, fs)?;
    let frequency_hz =
        shaped_trace(&mut stream(2), n, params.freq_range_hz, params.shaping_cutoff_hz, fs)?;
    let phase_diff_deg =
        shaped_trace(&mut stream(3), n, params.phase_range_deg, params.shaping_cutoff_hz, fs)?;
    let truth = TruthSeries { amplitude_v, frequency_hz, phase_diff_deg, sample_rate_hz: fs };
    let (mut x1, mut x2) = synthesize(&truth, params.literal_phase);
    if params.noise_sigma1_v > 0.0 {
        for (x, e) in x1.iter_mut().zip(gaussian(&mut stream(4), params.noise_sigma1_v, n)) {
            *x += e;
        }
    }
    if params.noise_sigma2_v > 0.0 {
        for (x, e) in x2.iter_mut().zip(gaussian(&mut stream(5), params.noise_sigma2_v, n)) {
            *x += e;
        }
    }
    Ok(SensorRecord {
        x1,
        x2,
        truth,
        rng_seed: params.rng_seed,
        noise_sigma1_v: params.noise_sigma1_v,
        noise_sigma2_v: params.noise_sigma2_v,
    })
}

/// Plain random-walk stand-in: uniform per-sample increments with reflecting
/// boundaries, no low-pass shaping. Non-normative; for qualitative spectrum
/// comparison against the MRWM only.
pub fn rwm_generate(params: &MrwmParams, increment_scale: f64) -> Result<SensorRecord> {
    params.validate()?;
    let n = params.duration_samples;
    let fs = params.sample_rate_hz;
    let stream = |tag: u64| ChaCha8Rng::seed_from_u64(params.rng_seed ^ (tag << 32));
    let walk = |rng: &mut ChaCha8Rng, range: (f64, f64)| -> Vec<f64> {
        let (lo, hi) = range;
        let step = increment_scale * (hi - lo);
        let mut v = 0.5 * (lo + hi);
        (0..n)
            .map(|_| {
                if step > 0.0 {
                    v += rng.gen_range(-step..step);
                    // Reflect off the range boundaries.
                    while v < lo || v > hi {
                        if v < lo {
                            v = 2.0 * lo - v;
                        }
                        if v > hi {
                            v = 2.0 * hi - v;
                        }
                    }
                }
                v
            })
            .collect()
    };
    let truth = TruthSeries {
        amplitude_v: walk(&mut stream(1), params.amp_range_v),
        frequency_hz: walk(&mut stream(2), params.freq_range_hz),
        phase_diff_deg: walk(&mut stream(3), params.phase_range_deg),
        sample_rate_hz: fs,
    };
    let (mut x1, mut x2) = synthesize(&truth, false);
    if params.noise_sigma1_v > 0.0 {
        for (x, e) in x1.iter_mut().zip(gaussian(&mut stream(4), params.noise_sigma1_v, n)) {
            *x += e;
        }
    }
    if params.noise_sigma2_v > 0.0 {
        for (x, e) in x2.iter_mut().zip(gaussian(&mut stream(5), params.noise_sigma2_v, n)) {
            *x += e;
        }
    }
    Ok(SensorRecord {
        x1,
        x2,
        truth,
        rng_seed: params.rng_seed,
        noise_sigma1_v: params.noise_sigma1_v,
        noise_sigma2_v: params.noise_sigma2_v,
    })
}

/// Batch-transition scenario: hold at (100 Hz, 0.3 V, 0 deg), ramp linearly
/// over `ramp_seconds` to (85 Hz, 0.05 V, 4 deg), hold. Noise-free.
pub fn batch_generate(
    sample_rate_hz: f64,
    pre_hold_seconds: f64,
    ramp_seconds: f64,
    post_hold_seconds: f64,
) -> Result<SensorRecord> {
    if ramp_seconds <= 0.0 {
        return Err(Error::InvalidConfig("ramp_seconds must be positive".into()));
    }
    let fs = sample_rate_hz;
    let n_pre = (pre_hold_seconds * fs).round() as usize;
    let n_ramp = (ramp_seconds * fs).round() as usize;
    let n_post = (post_hold_seconds * fs).round() as usize;
    let n = n_pre + n_ramp + n_post;
    let lerp = |from: f64, to: f64, i: usize| {
        if i < n_pre {
            from
        } else if i < n_pre + n_ramp {
            from + (to - from) * (i - n_pre) as f64 / n_ramp as f64
        } else {
            to
        }
    };
    let truth = TruthSeries {
        amplitude_v: (0..n).map(|i| lerp(0.3, 0.05, i)).collect(),
        frequency_hz: (0..n).map(|i| lerp(100.0, 85.0, i)).collect(),
        phase_diff_deg: (0..n).map(|i| lerp(0.0, 4.0, i)).collect(),
        sample_rate_hz: fs,
    };
    let (x1, x2) = synthesize(&truth, false);
    Ok(SensorRecord { x1, x2, truth, rng_seed: 0, noise_sigma1_v: 0.0, noise_sigma2_v: 0.0 })
}

/// Stationary-tone scenario with explicit parameters.
pub fn tone_generate(
    sample_rate_hz: f64,
    freq_hz: f64,
    amp_v: f64,
    phase_diff_deg: f64,
    duration_samples: usize,
) -> SensorRecord {
    let truth = TruthSeries {
        amplitude_v: vec![amp_v; duration_samples],
        frequency_hz: vec![freq_hz; duration_samples],
        phase_diff_deg: vec![phase_diff_deg; duration_samples],
        sample_rate_hz,
    };
    let (x1, x2) = synthesize(&truth, false);
    SensorRecord { x1, x2, truth, rng_seed: 0, noise_sigma1_v: 0.0, noise_sigma2_v: 0.0 }
}

/// Additive independent Gaussian noise per channel; truth unchanged.
pub fn add_noise(record: &SensorRecord, sigma_v: f64, seed: u64) -> SensorRecord {
    let mut out = record.clone();
    if sigma_v > 0.0 {
        let n = out.x1.len();
        let mut rng1 = ChaCha8Rng::seed_from_u64(seed ^ (0xA << 32));
        let mut rng2 = ChaCha8Rng::seed_from_u64(seed ^ (0xB << 32));
        for (x, e) in out.x1.iter_mut().zip(gaussian(&mut rng1, sigma_v, n)) {
            *x += e;
        }
        for (x, e) in out.x2.iter_mut().zip(gaussian(&mut rng2, sigma_v, n)) {
            *x += e;
        }
        out.noise_sigma1_v = (out.noise_sigma1_v.powi(2) + sigma_v.powi(2)).sqrt();
        out.noise_sigma2_v = (out.noise_sigma2_v.powi(2) + sigma_v.powi(2)).sqrt();
    }
    out
}
