//! Inspect the bundled CBF and CNF designs: passband gain, image rejection
//! and group delay at the operating point.

use coriolis_dsp::defaults::{self, theta};
use coriolis_dsp::filter::{group_delay, response_of};

fn main() {
    let t = theta();
    for (name, coeffs) in [
        ("CBF (elliptic lp5 -> +92.5 Hz)", defaults::default_cbf().unwrap()),
        ("CNF (elliptic hp4 -> -92.5 Hz)", defaults::default_cnf().unwrap()),
        ("CBF-CNF (combined section)", defaults::default_cbf_cnf().unwrap()),
    ] {
        let pass = response_of(&coeffs, t).norm();
        let image = response_of(&coeffs, -t).norm();
        let (gd, near_notch) = group_delay(&coeffs, t);
        println!("{name}");
        println!("  order: {}", coeffs.denominator.len() - 1);
        println!("  gain at +92.5 Hz : {pass:.6}");
        println!("  gain at -92.5 Hz : {:.2} dB", 20.0 * (image / pass).log10());
        println!("  group delay      : {gd:.3} samples{}", if near_notch { " (near notch)" } else { "" });
        println!("  poles:");
        for p in coeffs.poles().unwrap() {
            println!("    {:+.6} {:+.6}j  (r = {:.6})", p.re, p.im, p.norm());
        }
        println!();
    }
}
