//! Comb CNF: one shifted notch section per interfering line. Here the mains
//! harmonic at 50 Hz and a structural resonance at 180 Hz are both notched
//! while the 85-100 Hz tracking band stays clean.

use coriolis_dsp::defaults::elliptic_hp4;
use coriolis_dsp::filter::response_of;
use coriolis_dsp::tracking::build_comb_cnf;
use std::f64::consts::PI;

fn main() {
    let fs = 2000.0;
    let chain = build_comb_cnf(&[-50.0, -180.0, -92.5], &elliptic_hp4(), (85.0, 100.0)).unwrap();
    println!("{} notch sections\n", chain.sections.len());

    println!("{:>10} {:>12}", "freq (Hz)", "gain (dB)");
    for f in [-180.0, -92.5, -50.0, 50.0, 85.0, 92.5, 100.0, 180.0] {
        let w = 2.0 * PI * f / fs;
        let g: f64 = chain
            .sections
            .iter()
            .map(|s| response_of(&s.coefficients, w).norm())
            .product();
        println!("{f:>10} {:>12.2}", 20.0 * g.max(1e-300).log10());
    }

    // Rejecting a notch inside the tracking band is a configuration error.
    let err = build_comb_cnf(&[90.0], &elliptic_hp4(), (85.0, 100.0)).unwrap_err();
    println!("\nnotch at +90 Hz: {err}");
}
