//! Default operating point and bundled filter designs.
//!
//! The meter drive sits in 85-100 Hz at a 2 kHz sample rate; all default
//! filters centre on the 92.5 Hz midpoint. The bundled elliptic prototypes
//! were designed offline (coefficient files under `data/`) because designing
//! elliptic filters at runtime needs Jacobi elliptic functions, out of scope;
//! `design_butterworth` covers built-in design and `load_prototype` imports
//! anything else bit-exactly.

use std::f64::consts::PI;

use crate::filter::{coeff_file, complex_shift, ComplexCoefficients, FilterKind, PrototypeFilter};
use crate::Result;

pub const SAMPLE_RATE_HZ: f64 = 2000.0;
pub const CENTER_FREQ_HZ: f64 = 92.5;
pub const FREQ_MIN_HZ: f64 = 85.0;
pub const FREQ_MAX_HZ: f64 = 100.0;
pub const AMP_MIN_V: f64 = 0.05;
pub const AMP_MAX_V: f64 = 0.3;
pub const PHASE_MIN_DEG: f64 = 0.0;
pub const PHASE_MAX_DEG: f64 = 4.0;
pub const SHAPING_CUTOFF_HZ: f64 = 6.0;
pub const FREQ_SPAN_SAMPLES: usize = 8;
pub const DTFT_WINDOW: usize = 128;
pub const HILBERT_TAPS: usize = 49;

/// Shift angle for the default centre frequency, rad/sample.
pub fn theta() -> f64 {
    2.0 * PI * CENTER_FREQ_HZ / SAMPLE_RATE_HZ
}

pub const ELLIP_LP5: &str = include_str!("../data/ellip_lp5.txt");
pub const ELLIP_HP4: &str = include_str!("../data/ellip_hp4.txt");
pub const ELLIP_LP3: &str = include_str!("../data/ellip_lp3.txt");

/// Bundled 5th-order elliptic low-pass (50 Hz edge, 0.05 dB / 85 dB).
pub fn elliptic_lp5() -> PrototypeFilter {
    coeff_file::parse_prototype(ELLIP_LP5, FilterKind::LowPass, SAMPLE_RATE_HZ, "ellip_lp5")
        .expect("bundled prototype is valid")
}

/// Bundled 4th-order elliptic high-pass (50 Hz edge, 0.05 dB / 85 dB).
pub fn elliptic_hp4() -> PrototypeFilter {
    coeff_file::parse_prototype(ELLIP_HP4, FilterKind::HighPass, SAMPLE_RATE_HZ, "ellip_hp4")
        .expect("bundled prototype is valid")
}

/// Bundled 3rd-order elliptic low-pass (60 Hz edge, 0.1 dB / 50 dB), the
/// low-delay bandpass stage of the CBF-CNF cascade.
pub fn elliptic_lp3() -> PrototypeFilter {
    coeff_file::parse_prototype(ELLIP_LP3, FilterKind::LowPass, SAMPLE_RATE_HZ, "ellip_lp3")
        .expect("bundled prototype is valid")
}

/// Default CBF: 5th-order elliptic low-pass rotated to +92.5 Hz.
pub fn default_cbf() -> Result<ComplexCoefficients> {
    complex_shift(&elliptic_lp5(), theta())
}

/// Default CNF: 4th-order elliptic high-pass rotated to -92.5 Hz, putting the
/// stopband over the negative-frequency image.
pub fn default_cnf() -> Result<ComplexCoefficients> {
    complex_shift(&elliptic_hp4(), -theta())
}

/// Low-order CBF stage for the cascade.
pub fn cascade_cbf3() -> Result<ComplexCoefficients> {
    complex_shift(&elliptic_lp3(), theta())
}

/// CBF-CNF cascade collapsed into a single 7th-order complex section.
/// A single section costs fewer multiplications than running the two stages
/// separately (the polynomial product has P+Q+1 numerator terms instead of
/// (P1+1)+(P2+1) per-stage terms plus double state updates).
pub fn default_cbf_cnf() -> Result<ComplexCoefficients> {
    Ok(cascade_cbf3()?.cascade(&default_cnf()?))
}
