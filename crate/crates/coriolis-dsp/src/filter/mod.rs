//! Real IIR prototypes and their complex-rotated (CBF/CNF) forms.
//!
//! The whole method rests on one identity: multiplying coefficient `m` of a
//! transfer function in `z^{-1}` by `e^{j*theta*m}` rotates every pole and
//! zero by `theta` without changing its radius. A stable real low-pass
//! therefore turns into a stable complex bandpass centred at `theta`
//! rad/sample, and a high-pass into a complex notch.

pub mod coeff_file;
pub mod roots;

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    LowPass,
    HighPass,
}

/// Real IIR coefficient set, normalized so `a[0] = 1`, verified stable.
#[derive(Debug, Clone)]
pub struct PrototypeFilter {
    numerator: Vec<f64>,
    denominator: Vec<f64>,
    pub kind: FilterKind,
    pub sample_rate_hz: f64,
    pub design_label: String,
}

impl PrototypeFilter {
    /// Construct from raw coefficients; normalizes to `a[0] = 1` and rejects
    /// unstable or empty sets.
    pub fn new(
        numerator: Vec<f64>,
        denominator: Vec<f64>,
        kind: FilterKind,
        sample_rate_hz: f64,
        design_label: impl Into<String>,
    ) -> Result<Self> {
        if numerator.is_empty() || denominator.is_empty() {
            return Err(Error::InvalidConfig("empty coefficient sequence".into()));
        }
        let a0 = denominator[0];
        if a0 == 0.0 {
            return Err(Error::InvalidConfig("a[0] must be nonzero".into()));
        }
        let numerator: Vec<f64> = numerator.iter().map(|c| c / a0).collect();
        let denominator: Vec<f64> = denominator.iter().map(|c| c / a0).collect();
        if !schur_cohn_stable(&denominator) {
            // Root extraction is only for the error message; the step-down
            // recursion above is the authoritative test (root finding cannot
            // resolve clustered poles of narrow designs accurately enough).
            let radius = roots::find_roots(&denominator)
                .map(|ps| ps.iter().map(|p| p.norm()).fold(0.0, f64::max))
                .unwrap_or(f64::NAN);
            return Err(Error::UnstablePrototype { radius });
        }
        Ok(PrototypeFilter {
            numerator,
            denominator,
            kind,
            sample_rate_hz,
            design_label: design_label.into(),
        })
    }

    pub fn numerator(&self) -> &[f64] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[f64] {
        &self.denominator
    }

    /// Numerator order P (number of coefficients minus one).
    pub fn order_p(&self) -> usize {
        self.numerator.len() - 1
    }

    /// Denominator order Q.
    pub fn order_q(&self) -> usize {
        self.denominator.len() - 1
    }

    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        roots::find_roots(&self.numerator)
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        roots::find_roots(&self.denominator)
    }
}

/// Complex-rotated coefficients: `b[m] * e^{j*shift*m}`, `a[n] * e^{j*shift*n}`.
#[derive(Debug, Clone)]
pub struct ComplexCoefficients {
    pub numerator: Vec<Complex64>,
    pub denominator: Vec<Complex64>,
    pub shift_rad_per_sample: f64,
    pub source_label: String,
}

impl ComplexCoefficients {
    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        roots::find_roots_complex(&self.numerator)
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        roots::find_roots_complex(&self.denominator)
    }

    /// Cascade two filters into one section (polynomial product of the
    /// numerators and of the denominators).
    pub fn cascade(&self, other: &ComplexCoefficients) -> ComplexCoefficients {
        ComplexCoefficients {
            numerator: poly_mul(&self.numerator, &other.numerator),
            denominator: poly_mul(&self.denominator, &other.denominator),
            shift_rad_per_sample: self.shift_rad_per_sample,
            source_label: format!("{} * {}", self.source_label, other.source_label),
        }
    }
}

/// Schur-Cohn stability test on a monic denominator (ascending powers of
/// `z^{-1}`): stable iff every step-down reflection coefficient has magnitude
/// below one. Numerically robust where polynomial root finding is not.
fn schur_cohn_stable(a: &[f64]) -> bool {
    let mut c: Vec<f64> = a.to_vec();
    while c.len() > 1 {
        let k = c[c.len() - 1] / c[0];
        if !(k.abs() < 1.0) {
            return false;
        }
        let denom = 1.0 - k * k;
        let n = c.len();
        let next: Vec<f64> = (0..n - 1).map(|i| (c[i] - k * c[n - 1 - i]) / denom).collect();
        c = next;
    }
    true
}

fn poly_mul(p: &[Complex64], q: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + q.len() - 1];
    for (i, &pi) in p.iter().enumerate() {
        for (j, &qj) in q.iter().enumerate() {
            out[i + j] += pi * qj;
        }
    }
    out
}

/// Rotate a real prototype's poles and zeros by `shift_rad` per sample.
pub fn complex_shift(proto: &PrototypeFilter, shift_rad: f64) -> Result<ComplexCoefficients> {
    if !(shift_rad > -PI && shift_rad <= PI) {
        return Err(Error::ShiftOutOfRange(shift_rad));
    }
    Ok(ComplexCoefficients {
        numerator: rotate(proto.numerator.iter().map(|&c| Complex64::new(c, 0.0)), shift_rad),
        denominator: rotate(proto.denominator.iter().map(|&c| Complex64::new(c, 0.0)), shift_rad),
        shift_rad_per_sample: shift_rad,
        source_label: proto.design_label.clone(),
    })
}

/// Rotate an already-complex coefficient set by a further `shift_rad`.
pub fn complex_shift_again(
    coeffs: &ComplexCoefficients,
    shift_rad: f64,
) -> Result<ComplexCoefficients> {
    if !(shift_rad > -PI && shift_rad <= PI) {
        return Err(Error::ShiftOutOfRange(shift_rad));
    }
    Ok(ComplexCoefficients {
        numerator: rotate(coeffs.numerator.iter().copied(), shift_rad),
        denominator: rotate(coeffs.denominator.iter().copied(), shift_rad),
        shift_rad_per_sample: coeffs.shift_rad_per_sample + shift_rad,
        source_label: coeffs.source_label.clone(),
    })
}

fn rotate(coeffs: impl Iterator<Item = Complex64>, shift: f64) -> Vec<Complex64> {
    coeffs
        .enumerate()
        .map(|(m, c)| c * Complex64::from_polar(1.0, shift * m as f64))
        .collect()
}

/// `H(e^{jw}) = sum b_m e^{-jwm} / sum a_n e^{-jwn}` for real or complex sets.
pub fn frequency_response(
    numerator: &[Complex64],
    denominator: &[Complex64],
    omega_rad: f64,
) -> Complex64 {
    let num = eval_poly(numerator, omega_rad);
    let den = eval_poly(denominator, omega_rad);
    if den.norm() < 1e-300 {
        // Degenerate response: only reachable with unstable/edge-of-circle
        // sets that the constructors reject.
        return Complex64::new(f64::INFINITY, 0.0);
    }
    num / den
}

fn eval_poly(coeffs: &[Complex64], omega: f64) -> Complex64 {
    // Horner in x = e^{-jw}: sum c_m x^m.
    let x = Complex64::from_polar(1.0, -omega);
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn response_of_prototype(proto: &PrototypeFilter, omega_rad: f64) -> Complex64 {
    let num: Vec<Complex64> = proto.numerator.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let den: Vec<Complex64> = proto.denominator.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    frequency_response(&num, &den, omega_rad)
}

pub fn response_of(coeffs: &ComplexCoefficients, omega_rad: f64) -> Complex64 {
    frequency_response(&coeffs.numerator, &coeffs.denominator, omega_rad)
}

/// Group delay in samples at `omega_rad`: `-d(arg H)/dw` by central difference
/// with phase unwrapping. Returns `(delay, near_notch)`; `near_notch` flags
/// |H| < 1e-6, where the phase derivative is numerically meaningless.
pub fn group_delay(coeffs: &ComplexCoefficients, omega_rad: f64) -> (f64, bool) {
    const STEP: f64 = 1e-5;
    let near_notch = response_of(coeffs, omega_rad).norm() < 1e-6;
    let p1 = response_of(coeffs, omega_rad - STEP).arg();
    let p2 = response_of(coeffs, omega_rad + STEP).arg();
    let mut dp = p2 - p1;
    while dp > PI {
        dp -= 2.0 * PI;
    }
    while dp < -PI {
        dp += 2.0 * PI;
    }
    (-dp / (2.0 * STEP), near_notch)
}

/// Butterworth design by bilinear transform with frequency prewarping.
pub fn design_butterworth(
    order: usize,
    cutoff_hz: f64,
    kind: FilterKind,
    sample_rate_hz: f64,
) -> Result<PrototypeFilter> {
    if order == 0 || order > 8 {
        return Err(Error::InvalidOrder(order));
    }
    let nyquist = sample_rate_hz / 2.0;
    if !(cutoff_hz > 0.0 && cutoff_hz < nyquist) {
        return Err(Error::CutoffOutOfRange { cutoff_hz, nyquist_hz: nyquist });
    }

    // Analog Butterworth poles on the circle of prewarped radius wc.
    let fs2 = 2.0 * sample_rate_hz;
    let wc = fs2 * (PI * cutoff_hz / sample_rate_hz).tan();
    let mut s_poles: Vec<Complex64> = (0..order)
        .map(|k| {
            let ang = PI * (2.0 * k as f64 + order as f64 + 1.0) / (2.0 * order as f64);
            Complex64::from_polar(wc, ang)
        })
        .collect();
    // LP->HP: s -> wc^2 / s (wc^2 because the prototype is already at wc).
    if kind == FilterKind::HighPass {
        for p in s_poles.iter_mut() {
            *p = Complex64::new(wc * wc, 0.0) / *p;
        }
    }

    // Bilinear transform: z = (2fs + s) / (2fs - s).
    let z_poles: Vec<Complex64> = s_poles
        .iter()
        .map(|&s| (Complex64::new(fs2, 0.0) + s) / (Complex64::new(fs2, 0.0) - s))
        .collect();
    // All analog zeros sit at infinity (LP) or the origin (HP); the bilinear
    // map sends them to z = -1 and z = +1 respectively.
    let zero = match kind {
        FilterKind::LowPass => Complex64::new(-1.0, 0.0),
        FilterKind::HighPass => Complex64::new(1.0, 0.0),
    };
    let z_zeros = vec![zero; order];

    let b = poly_from_roots(&z_zeros);
    let a = poly_from_roots(&z_poles);

    // Unit gain at the band centre: z = 1 for LP, z = -1 for HP. Computed
    // from the root factors, where the expanded polynomial sums suffer
    // catastrophic cancellation for narrow designs.
    let x = match kind {
        FilterKind::LowPass => Complex64::new(1.0, 0.0),
        FilterKind::HighPass => Complex64::new(-1.0, 0.0),
    };
    let one = Complex64::new(1.0, 0.0);
    let g_num: Complex64 = z_zeros.iter().map(|&r| one - r * x).product();
    let g_den: Complex64 = z_poles.iter().map(|&r| one - r * x).product();
    let g = (g_num / g_den).norm();
    let b_real: Vec<f64> = b.iter().map(|c| c.re / g).collect();
    let a_real: Vec<f64> = a.iter().map(|c| c.re).collect();

    PrototypeFilter::new(
        b_real,
        a_real,
        kind,
        sample_rate_hz,
        format!("butterworth{order}_{cutoff_hz}hz"),
    )
}

/// Expand `prod (1 - r z^{-1})` into ascending `z^{-1}` coefficients.
fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c * r;
        }
        poly = next;
    }
    poly
}
