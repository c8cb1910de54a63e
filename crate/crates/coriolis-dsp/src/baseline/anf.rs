//! Steiglitz-McBride adaptive notch filter.
//!
//! Second-order constrained notch `H(z) = (1 + a z^-1 + z^-2) /
//! (1 + rho*a z^-1 + rho^2 z^-2)` whose single weight `a = -2 cos(w)` is
//! driven by a recursive least-squares update so the notch locks onto the
//! input's dominant frequency; `w_hat = arccos(-a/2)` is then the frequency
//! estimate.
//!
//! The forgetting factor starts small for a fast lock and relaxes toward a
//! steady-state value, trading agility for noise averaging once converged
//! (the published initial values name lambda an *initial* value; a fixed 0.9
//! would leave the estimator far noisier than the reference results).

use crate::ops::OpCounters;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct AnfConfig {
    pub sample_rate_hz: f64,
    /// Cold-start frequency estimate, Hz.
    pub init_freq_hz: f64,
    /// Pole contraction factor rho.
    pub rho: f64,
    /// Initial covariance P.
    pub p_init: f64,
    /// Initial forgetting factor.
    pub lambda_init: f64,
    /// Steady-state forgetting factor the schedule relaxes toward.
    pub lambda_final: f64,
    /// Per-sample schedule rate: lambda <- rate*lambda + (1-rate)*lambda_final.
    pub lambda_rate: f64,
}

impl Default for AnfConfig {
    fn default() -> Self {
        AnfConfig {
            sample_rate_hz: crate::defaults::SAMPLE_RATE_HZ,
            init_freq_hz: crate::defaults::CENTER_FREQ_HZ,
            rho: 0.9,
            p_init: 100.0,
            lambda_init: 0.9,
            lambda_final: 0.98,
            lambda_rate: 0.99,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnfState {
    config: AnfConfig,
    alpha_hat: f64,
    lambda: f64,
    p_cov: f64,
    psi: f64,
    psi1: f64,
    psi2: f64,
    es1: f64,
    es2: f64,
    y1: f64,
    y2: f64,
    omega_hat: f64,
    diverged: bool,
    samples: u64,
}

impl AnfState {
    pub fn new(config: AnfConfig) -> Self {
        let omega = 2.0 * std::f64::consts::PI * config.init_freq_hz / config.sample_rate_hz;
        AnfState {
            config,
            alpha_hat: -2.0 * omega.cos(),
            lambda: config.lambda_init,
            p_cov: config.p_init,
            psi: 0.0,
            psi1: 0.0,
            psi2: 0.0,
            es1: 0.0,
            es2: 0.0,
            y1: 0.0,
            y2: 0.0,
            omega_hat: omega,
            diverged: false,
            samples: 0,
        }
    }

    pub fn omega_hat(&self) -> f64 {
        self.omega_hat
    }

    pub fn freq_hz(&self) -> f64 {
        self.omega_hat * self.config.sample_rate_hz / (2.0 * std::f64::consts::PI)
    }

    pub fn alpha_hat(&self) -> f64 {
        self.alpha_hat
    }

    pub fn diverged(&self) -> bool {
        self.diverged
    }

    /// Notch bandwidth implied by rho: `2*arccos(2*rho/(1+rho^2))` rad/sample.
    pub fn bandwidth_rad(&self) -> f64 {
        let r = self.config.rho;
        2.0 * (2.0 * r / (1.0 + r * r)).acos()
    }

    /// One recursion step; returns the notch output and the updated frequency
    /// estimate in rad/sample.
    pub fn step(&mut self, y: f64, ops: &mut OpCounters) -> Result<(f64, f64)> {
        if !y.is_finite() {
            return Err(Error::NonFiniteInput(self.samples as usize));
        }
        let rho = self.config.rho;
        let a = self.alpha_hat;

        // Notch output: e = y + a*y1 + y2 - rho*a*e1 - rho^2*e2.
        ops.mul(4);
        ops.add(4);
        let es = y + a * self.y1 + self.y2 - rho * a * self.es1 - rho * rho * self.es2;

        // Gradient signal: psi = y1 - rho*e1 - rho*a*psi1 - rho^2*psi2.
        ops.mul(3);
        ops.add(3);
        let psi = self.y1 - rho * self.es1 - rho * a * self.psi1 - rho * rho * self.psi2;

        // RLS covariance and weight update.
        ops.mul(3); // psi^2, psi^2*P, division
        ops.add(1);
        self.p_cov = self.p_cov / (self.lambda + psi * psi * self.p_cov);
        if self.p_cov > 1e12 || !self.p_cov.is_finite() {
            self.diverged = true;
        }
        ops.mul(2);
        ops.add(1);
        self.alpha_hat = (a - self.p_cov * psi * es).clamp(-2.0, 2.0);

        // Forgetting-factor schedule.
        ops.mul(1);
        ops.add(1);
        self.lambda =
            self.config.lambda_rate * self.lambda + (1.0 - self.config.lambda_rate) * self.config.lambda_final;

        ops.mul(2); // -a/2 and arccos
        self.omega_hat = (-self.alpha_hat / 2.0).acos();

        self.y2 = self.y1;
        self.y1 = y;
        self.es2 = self.es1;
        self.es1 = es;
        self.psi2 = self.psi1;
        self.psi1 = psi;
        self.psi = psi;
        self.samples += 1;
        Ok((es, self.omega_hat))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    const FS: f64 = 2000.0;

    #[test]
    fn alpha_frequency_mapping() {
        let cfg = AnfConfig { init_freq_hz: 90.0, ..AnfConfig::default() };
        let s = AnfState::new(cfg);
        assert!((s.alpha_hat() + 2.0 * (2.0 * PI * 90.0 / FS).cos()).abs() < 1e-15);
        assert!((s.freq_hz() - 90.0).abs() < 1e-9);
    }

    #[test]
    fn converges_within_half_second() {
        // 90 Hz tone from a 95 Hz cold start must settle within 0.1 Hz in
        // 0.5 s.
        let cfg = AnfConfig { init_freq_hz: 95.0, ..AnfConfig::default() };
        let mut s = AnfState::new(cfg);
        let mut ops = OpCounters::default();
        let n = (0.5 * FS) as usize;
        let mut freqs = Vec::with_capacity(n);
        for i in 0..n {
            let y = 0.1 * (2.0 * PI * 90.0 * i as f64 / FS).sin();
            s.step(y, &mut ops).unwrap();
            freqs.push(s.freq_hz());
        }
        let tail = &freqs[n - 100..];
        for f in tail {
            assert!((f - 90.0).abs() < 0.1, "f = {f}");
        }
    }

    #[test]
    fn notch_cancels_aligned_tone() {
        let cfg = AnfConfig { init_freq_hz: 92.5, ..AnfConfig::default() };
        let mut s = AnfState::new(cfg);
        let mut ops = OpCounters::default();
        let n = 6000;
        let mut es_tail = Vec::new();
        let mut var_in = 0.0;
        for i in 0..n {
            let y = 0.1 * (2.0 * PI * 92.5 * i as f64 / FS).sin();
            let (es, _) = s.step(y, &mut ops).unwrap();
            if i > n - 2000 {
                es_tail.push(es);
                var_in += y * y;
            }
        }
        let var_out: f64 = es_tail.iter().map(|e| e * e).sum();
        assert!(var_out < 1e-6 * var_in, "residual ratio {}", var_out / var_in);
    }

    #[test]
    fn bandwidth_matches_measured_notch_width() {
        // Eq-style check: formula bandwidth vs -3 dB width of the frozen
        // notch response, within 10%.
        let cfg = AnfConfig::default();
        let s = AnfState::new(cfg);
        let rho = cfg.rho;
        let a = s.alpha_hat();
        let resp = |w: f64| -> f64 {
            let z1 = Complex64::from_polar(1.0, -w);
            let z2 = Complex64::from_polar(1.0, -2.0 * w);
            let num = Complex64::new(1.0, 0.0) + z1 * a + z2;
            let den = Complex64::new(1.0, 0.0) + z1 * (rho * a) + z2 * (rho * rho);
            (num / den).norm()
        };
        let peak = resp(PI);
        let target = peak / 2.0_f64.sqrt();
        // Scan for the -3 dB crossings around the notch.
        let mut lo = f64::NAN;
        let mut hi = f64::NAN;
        let grid = 400_000;
        for i in 0..grid {
            let w = PI * i as f64 / grid as f64;
            if resp(w) < target {
                if lo.is_nan() {
                    lo = w;
                }
                hi = w;
            }
        }
        let measured = hi - lo;
        let formula = s.bandwidth_rad();
        assert!(
            (measured - formula).abs() / formula < 0.10,
            "measured {measured}, formula {formula}"
        );
    }
}
