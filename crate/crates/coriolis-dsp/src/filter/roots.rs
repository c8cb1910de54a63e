//! Polynomial root finding by simultaneous (Durand-Kerner) iteration.

use num_complex::Complex64;

use crate::{Error, Result};

const MAX_ITER: usize = 1000;
const RESIDUAL_TOL: f64 = 1e-8;

/// Find all roots of a polynomial given by coefficients in descending powers
/// (`[1.0, -1.0]` is `z - 1`). Leading zeros are stripped; returned roots are
/// unordered.
pub fn find_roots(poly: &[f64]) -> Result<Vec<Complex64>> {
    let coeffs: Vec<Complex64> = poly.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    find_roots_complex(&coeffs)
}

/// Complex-coefficient variant, used for rotated filters.
pub fn find_roots_complex(poly: &[Complex64]) -> Result<Vec<Complex64>> {
    let first = poly
        .iter()
        .position(|c| c.norm() > 0.0)
        .ok_or_else(|| Error::InvalidConfig("all-zero polynomial".into()))?;
    let coeffs = &poly[first..];
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }

    // Monic normalization.
    let lead = coeffs[0];
    let c: Vec<Complex64> = coeffs.iter().map(|v| v / lead).collect();
    let scale = c.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);

    // Cauchy bound on root magnitude sets the initial circle.
    let bound = 1.0 + c[1..].iter().map(|v| v.norm()).fold(0.0, f64::max);
    let radius = bound.min(4.0).max(0.5);
    let mut roots: Vec<Complex64> = (0..degree)
        .map(|k| {
            // Deliberately irrational start angle avoids symmetry deadlocks.
            let ang = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4;
            Complex64::from_polar(radius, ang)
        })
        .collect();

    let eval = |x: Complex64| -> Complex64 {
        let mut p = Complex64::new(0.0, 0.0);
        for &ck in &c {
            p = p * x + ck;
        }
        p
    };

    let mut stagnant = 0usize;
    let mut last_residual = f64::INFINITY;
    for iter in 0..MAX_ITER {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..degree {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-300 {
                denom = Complex64::new(1e-300, 0.0);
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }

        let residual = roots.iter().map(|&r| eval(r).norm()).fold(0.0, f64::max);
        if residual / scale < RESIDUAL_TOL {
            return Ok(roots);
        }

        // Perturbation restart when the iteration stops making progress
        // (typical cause: coincident start points around a multiple root).
        if residual >= last_residual * 0.999 && max_step < 1e-14 {
            stagnant += 1;
            if stagnant > 5 {
                let jitter = 1e-3 * (1.0 + iter as f64 / MAX_ITER as f64);
                for (k, r) in roots.iter_mut().enumerate() {
                    *r += Complex64::from_polar(jitter, 2.4 * (k as f64 + 1.0));
                }
                stagnant = 0;
            }
        } else {
            stagnant = 0;
        }
        last_residual = residual;
    }
    Err(Error::NoConvergence(MAX_ITER))
}
