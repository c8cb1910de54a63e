//! Per-sample arithmetic audit of each method on the same signal.
//!
//! Counting convention: a complex*complex multiply is 4 mul + 2 add, a
//! complex*real is 2 mul, a complex add is 2 adds, divisions and square
//! roots count as one multiplication each, atan2 is excluded.

use coriolis_dsp::cli::{run_method, MethodSel};
use coriolis_dsp::eval::audit_complexity;
use coriolis_dsp::sim::{mrwm_generate, MrwmParams};

fn main() {
    let params = MrwmParams {
        duration_samples: 10_000,
        rng_seed: 7,
        noise_sigma1_v: 0.005,
        noise_sigma2_v: 0.005,
        ..MrwmParams::default()
    };
    let record = mrwm_generate(&params).unwrap();

    println!("{:<10} {:>10} {:>10} {:>12}", "method", "add/smp", "mul/smp", "storage (B)");
    for m in MethodSel::all() {
        let (est, ops) = run_method(m, &record).unwrap();
        let (adds, muls, bytes) = audit_complexity(&ops, est.len() as u64);
        println!("{:<10} {adds:>10.2} {muls:>10.2} {bytes:>12}", m.label());
    }
}
