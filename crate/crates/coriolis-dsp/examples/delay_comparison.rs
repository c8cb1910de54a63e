//! Tracking-delay comparison on the batch (empty-to-full) transition: all
//! three parameters ramp simultaneously over 0.5 s and each method's lag is
//! measured by cross-correlation against the truth ramps.

use coriolis_dsp::cli::{run_method, MethodSel};
use coriolis_dsp::eval::tracking_delay;
use coriolis_dsp::sim::batch_generate;

fn main() {
    let record = batch_generate(2000.0, 0.5, 0.5, 0.5).unwrap();
    let skip = 400;

    println!("batch transition: 100 -> 85 Hz, 0.3 -> 0.05 V, 0 -> 4 deg over 0.5 s\n");
    let mut rows: Vec<(&str, f64)> = Vec::new();
    for m in MethodSel::all() {
        let (est, _) = run_method(m, &record).unwrap();
        let d = tracking_delay(&est, &record.truth, 60.0, skip).unwrap();
        rows.push((m.label(), d));
    }
    rows.sort_by(|a, b| a.1.total_cmp(&b.1));
    for (label, d) in rows {
        println!("{label:<10} {d:7.2} ms");
    }
}
