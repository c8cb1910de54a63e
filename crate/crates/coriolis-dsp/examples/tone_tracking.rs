//! Track a clean steady tone with the CBF tracker and watch the estimates
//! settle onto the generator parameters.

use coriolis_dsp::sim::tone_generate;
use coriolis_dsp::tracking::{ComplexTracker, Method, TrackerConfig};

fn main() {
    let fs = 2000.0;
    let record = tone_generate(fs, 90.0, 0.1, 2.0, 2000);

    let mut tracker = ComplexTracker::new(TrackerConfig {
        method: Method::Cbf,
        ..TrackerConfig::default()
    })
    .unwrap();
    let estimates = tracker.run(&record.x1, &record.x2).unwrap();

    println!("{:>8} {:>12} {:>12} {:>12} {:>6}", "sample", "amp (V)", "freq (Hz)", "phase (deg)", "valid");
    for &i in &[50usize, 100, 150, 200, 400, 800, 1600, 1999] {
        let e = &estimates[i];
        println!(
            "{i:>8} {:>12.6} {:>12.6} {:>12.6} {:>6}",
            e.amplitude1_v, e.frequency_hz, e.phase_diff_deg, e.valid
        );
    }
    let last = estimates.last().unwrap();
    println!(
        "\nerrors: amp {:+.2e} V, freq {:+.2e} Hz, phase {:+.2e} deg",
        last.amplitude1_v - 0.1,
        last.frequency_hz - 90.0,
        last.phase_diff_deg - 2.0
    );
}
