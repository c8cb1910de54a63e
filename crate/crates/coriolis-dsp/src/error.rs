use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid filter order {0} (must be 1..=8)")]
    InvalidOrder(usize),

    #[error("cutoff {cutoff_hz} Hz out of range (0, {nyquist_hz}) Hz")]
    CutoffOutOfRange { cutoff_hz: f64, nyquist_hz: f64 },

    #[error("coefficient file parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },

    #[error("unstable prototype: pole at radius {radius}")]
    UnstablePrototype { radius: f64 },

    #[error("root finding did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("shift angle {0} rad outside (-pi, pi]")]
    ShiftOutOfRange(f64),

    #[error("non-finite input sample at index {0}")]
    NonFiniteInput(usize),

    #[error("zero-magnitude analytic sample")]
    ZeroMagnitudeInput,

    #[error("notch at {0} Hz lies inside the tracking band")]
    NotchInTrackingBand(f64),

    #[error("invalid Hilbert FIR length {0} (must be odd and >= 7)")]
    InvalidLength(usize),

    #[error("DTFT buffer not primed (have {have} of {need} samples)")]
    UnprimedBuffer { have: usize, need: usize },

    #[error("no valid samples to score after skip")]
    NoValidSamples,

    #[error("ambiguous cross-correlation peak (plateau within search window)")]
    AmbiguousPeak,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
