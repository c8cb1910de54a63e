//! Streaming estimation of amplitude, frequency and phase difference for the
//! two sensor signals of a Coriolis mass flowmeter.
//!
//! The core idea: rotate the poles and zeros of an ordinary real IIR
//! prototype by multiplying its coefficients with `e^{j*theta*m}`. A low-pass
//! becomes a complex bandpass (CBF) centred on the drive frequency that
//! suppresses the negative-frequency image, so its output is an analytic
//! signal. A high-pass rotated the other way becomes a complex notch (CNF)
//! that removes only the image, at near-zero group delay. Amplitude, frequency
//! and sensor phase difference then fall out of elementary complex arithmetic
//! on the filter outputs.
//!
//! The crate also ships the two classic baselines (Hilbert-FIR analytic
//! tracker, adaptive-notch frequency estimator with sliding-DTFT extraction),
//! a two-phase-flow signal simulator with ground truth, and an evaluation
//! harness (RMSE, tracking delay, SNR, arithmetic-op audit).
//!
//! Start with [`tracking::ComplexTracker`] and [`sim::mrwm_generate`], or run
//! the `cmft` binary. Each major capability has a runnable example under
//! `examples/`.

pub mod baseline;
pub mod cli;
pub mod defaults;
pub mod error;
pub mod eval;
pub mod filter;
pub mod io;
pub mod ops;
pub mod plot;
pub mod sim;
pub mod tracking;

pub use error::Error;

/// Convenience result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
