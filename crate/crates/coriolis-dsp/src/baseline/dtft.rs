//! Sliding-window DTFT with O(1) per-sample update.
//!
//! Maintains `S(n) = sum_{m=0}^{N-1} x(n-m) e^{j*w*m}` via
//! `S(n) = e^{jw} S(n-1) + x(n) - x(n-N) e^{jwN}`. The recursion only holds
//! at a fixed `w`; changing the bin requires a full recomputation (rebase).

use num_complex::Complex64;

use crate::ops::{OpCounters, BYTES_PER_COMPLEX, BYTES_PER_REAL};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct DtftState {
    window: usize,
    /// Last N+1 samples, newest at `head`.
    buf: Vec<f64>,
    head: usize,
    filled: usize,
    acc: Complex64,
    omega: f64,
    rot1: Complex64,
    rot_n: Complex64,
}

impl DtftState {
    pub fn new(window: usize, omega: f64) -> Self {
        assert!(window >= 2 && window % 2 == 0, "window must be even and >= 2");
        DtftState {
            window,
            buf: vec![0.0; window + 1],
            head: 0,
            filled: 0,
            acc: Complex64::new(0.0, 0.0),
            omega,
            rot1: Complex64::from_polar(1.0, omega),
            rot_n: Complex64::from_polar(1.0, omega * window as f64),
        }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn primed(&self) -> bool {
        self.filled >= self.buf.len()
    }

    pub fn storage_bytes(window: usize) -> u64 {
        (window as u64 + 1) * BYTES_PER_REAL + 4 * BYTES_PER_COMPLEX
    }

    /// Push a sample and return the updated window DTFT.
    pub fn push(&mut self, x: f64, ops: &mut OpCounters) -> Complex64 {
        // x(n-N), the sample leaving the window sum. The buffer keeps N+1
        // values, so this is the second-oldest slot; the very oldest is the
        // one overwritten below.
        let oldest = self.buf[(self.head + 2) % self.buf.len()];
        self.head = (self.head + 1) % self.buf.len();
        self.buf[self.head] = x;
        self.filled = (self.filled + 1).min(self.buf.len());

        ops.cmul(); // e^{jw} * S
        ops.cmul_real(); // x(n-N) * e^{jwN}
        ops.add(1); // + x(n)
        ops.cadd();
        self.acc = self.rot1 * self.acc + Complex64::new(x, 0.0) - self.rot_n * oldest;
        self.acc
    }

    /// Current accumulator; errors when the buffer is not yet primed.
    pub fn value(&self) -> Result<Complex64> {
        if !self.primed() {
            return Err(Error::UnprimedBuffer { have: self.filled, need: self.buf.len() });
        }
        Ok(self.acc)
    }

    /// Move the bin to a new frequency and recompute the accumulator from the
    /// buffered window.
    pub fn rebase(&mut self, omega: f64, ops: &mut OpCounters) {
        self.omega = omega;
        self.rot1 = Complex64::from_polar(1.0, omega);
        self.rot_n = Complex64::from_polar(1.0, omega * self.window as f64);
        ops.transcendental(); // the two rotors come from one sincos pair
        ops.transcendental();
        let mut rotor = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..self.window {
            let idx = (self.head + self.buf.len() - m) % self.buf.len();
            ops.cmul_real();
            ops.cadd();
            acc += rotor * self.buf[idx];
            ops.cmul();
            rotor *= self.rot1;
        }
        self.acc = acc;
    }

    /// Direct N-term summation at the current bin; the oracle the recursion
    /// is tested against.
    pub fn direct_sum(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..self.window {
            let idx = (self.head + self.buf.len() - m) % self.buf.len();
            acc += Complex64::from_polar(1.0, self.omega * m as f64) * self.buf[idx];
        }
        acc
    }
}
