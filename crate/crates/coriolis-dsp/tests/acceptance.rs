//! Acceptance gate: nine numbered criteria, one printed PASS/FAIL line each
//! (run with `--nocapture` to see the measured values). Criterion 8 is known
//! to fail one link of its stated ranking with this counting convention; the
//! printed line carries the measured numbers.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::process::Command;

use coriolis_dsp::baseline::{AnfConfig, AnfState, DtftState};
use coriolis_dsp::cli::{run_method, MethodSel};
use coriolis_dsp::defaults::{self, theta};
use coriolis_dsp::eval::{audit_complexity, measure_snr, rmse, tracking_delay};
use coriolis_dsp::filter::{
    complex_shift, complex_shift_again, group_delay, response_of, response_of_prototype,
    FilterKind, PrototypeFilter,
};
use coriolis_dsp::ops::OpCounters;
use coriolis_dsp::sim::{add_noise, batch_generate, mrwm_generate, tone_generate, MrwmParams};
use coriolis_dsp::tracking::{ComplexTracker, Method, TrackerConfig};

const FS: f64 = 2000.0;

fn verdict(n: u32, ok: bool, detail: &str) -> bool {
    println!("criterion {n}: {} — {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn random_prototype(rng: &mut ChaCha8Rng) -> PrototypeFilter {
    let pairs = |rng: &mut ChaCha8Rng, max_r: f64, count: usize| -> Vec<f64> {
        let mut poly = vec![Complex64::new(1.0, 0.0)];
        for _ in 0..count {
            let r = rng.gen_range(0.2..max_r);
            let ang = rng.gen_range(0.15..PI - 0.15);
            for root in [Complex64::from_polar(r, ang), Complex64::from_polar(r, -ang)] {
                let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
                for (i, &c) in poly.iter().enumerate() {
                    next[i] += c;
                    next[i + 1] -= c * root;
                }
                poly = next;
            }
        }
        poly.iter().map(|c| c.re).collect()
    };
    let zero_pairs = rng.gen_range(1..=3);
    let pole_pairs = rng.gen_range(1..=3);
    let b = pairs(rng, 1.3, zero_pairs);
    let a = pairs(rng, 0.85, pole_pairs);
    PrototypeFilter::new(b, a, FilterKind::LowPass, FS, "random").unwrap()
}

#[test]
fn criterion_1_filter_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut worst_resp = 0.0f64;
    let mut worst_radius = 0.0f64;
    let mut worst_compose = 0.0f64;
    for _ in 0..20 {
        let proto = random_prototype(&mut rng);
        let t = rng.gen_range(-3.0..3.0);
        let shifted = complex_shift(&proto, t).unwrap();

        // Response-shift identity on the full 4096-point grid.
        for i in 0..4096 {
            let w = -PI + 2.0 * PI * i as f64 / 4096.0;
            let a = response_of(&shifted, w).norm();
            let b = response_of_prototype(&proto, w - t).norm();
            worst_resp = worst_resp.max((a - b).abs() / (1.0 + b));
        }

        // Rotation isometry + stability closure (via extracted roots).
        let mut before: Vec<f64> = proto.poles().unwrap().iter().map(|p| p.norm()).collect();
        let mut after: Vec<f64> = shifted.poles().unwrap().iter().map(|p| p.norm()).collect();
        before.sort_by(f64::total_cmp);
        after.sort_by(f64::total_cmp);
        for (b, a) in before.iter().zip(&after) {
            worst_radius = worst_radius.max((a - b).abs());
            assert!(*a < 1.0, "stability closure violated: radius {a}");
        }

        // Double-shift composition.
        let half = t / 2.0;
        let twice = complex_shift_again(&complex_shift(&proto, half).unwrap(), half).unwrap();
        for (x, y) in shifted.numerator.iter().zip(&twice.numerator) {
            worst_compose = worst_compose.max((x - y).norm() / (1.0 + y.norm()));
        }
        for (x, y) in shifted.denominator.iter().zip(&twice.denominator) {
            worst_compose = worst_compose.max((x - y).norm() / (1.0 + y.norm()));
        }
    }
    let ok = worst_resp < 1e-10 && worst_radius < 1e-4 && worst_compose < 1e-12;
    assert!(verdict(
        1,
        ok,
        &format!(
            "20 prototypes: response-shift {worst_resp:.2e} (<1e-10), radius drift \
             {worst_radius:.2e}, composition {worst_compose:.2e} (<1e-12), stability closed"
        ),
    ));
}

#[test]
fn criterion_2_stationary_tone_exactness() {
    let mut worst_f = 0.0f64;
    let mut worst_p = 0.0f64;
    let mut worst_a = 0.0f64;
    for f0 in [85.0, 92.5, 100.0] {
        for method in [Method::Cbf, Method::Cnf, Method::CbfCnf] {
            let rec = tone_generate(FS, f0, 0.1, 2.0, 40_000);
            let mut tr =
                ComplexTracker::new(TrackerConfig { method, ..TrackerConfig::default() }).unwrap();
            let est = tr.run(&rec.x1, &rec.x2).unwrap();
            // Steady state: mean over the last 10 s, which averages out the
            // residual image-line ripple.
            let tail = &est[est.len() - 20_000..];
            assert!(tail.iter().all(|e| e.valid));
            let n = tail.len() as f64;
            let fm = tail.iter().map(|e| e.frequency_hz).sum::<f64>() / n;
            let pm = tail.iter().map(|e| e.phase_diff_deg).sum::<f64>() / n;
            let am = tail.iter().map(|e| e.amplitude1_v).sum::<f64>() / n;
            worst_f = worst_f.max((fm - f0).abs());
            worst_p = worst_p.max((pm - 2.0).to_radians().abs());
            worst_a = worst_a.max((am - 0.1).abs() / 0.1);
        }
    }
    let ok = worst_f <= 1e-6 && worst_p <= 1e-9 && worst_a <= 0.01;
    assert!(verdict(
        2,
        ok,
        &format!(
            "85/92.5/100 Hz, CBF/CNF/CBF-CNF: freq {worst_f:.2e} Hz (<=1e-6), phase \
             {worst_p:.2e} rad (<=1e-9), amplitude {:.2e} % (<=1%)",
            worst_a * 100.0
        ),
    ));
}

#[test]
fn criterion_3_delay_ranking() {
    let record = batch_generate(FS, 0.5, 0.5, 0.5).unwrap();
    let skip = 400;
    let delay = |m: MethodSel| -> f64 {
        let (est, _) = run_method(m, &record).unwrap();
        tracking_delay(&est, &record.truth, 60.0, skip).unwrap()
    };
    let cnf = delay(MethodSel::Cnf);
    let cc = delay(MethodSel::CbfCnf);
    let cbf = delay(MethodSel::Cbf);
    let hil = delay(MethodSel::Hilbert);
    let dtft = delay(MethodSel::AnfDtft);
    let ordered = cnf < cc && cc < cbf && cbf < hil && hil < dtft;
    let cbf_in_range = cbf >= 8.75 / 2.0 && cbf <= 8.75 * 2.0;
    assert!(verdict(
        3,
        ordered && cbf_in_range,
        &format!(
            "delays (ms): CNF {cnf:.2} < CBF-CNF {cc:.2} < CBF {cbf:.2} < Hilbert {hil:.2} < \
             DTFT(ANF) {dtft:.2}; CBF within 2x of 8.75 ms: {cbf_in_range}"
        ),
    ));
}

#[test]
fn criterion_4_noise_free_mrwm() {
    let skip = 400;
    let mut worst_cbf = 0.0f64;
    let mut cc_wins = true;
    for seed in 1..=10u64 {
        let params = MrwmParams {
            duration_samples: 120_000, // 60 s
            rng_seed: seed,
            ..MrwmParams::default()
        };
        let record = mrwm_generate(&params).unwrap();
        let phase_rmse = |m: MethodSel| -> f64 {
            let (est, _) = run_method(m, &record).unwrap();
            rmse(&est, &record.truth, skip).unwrap().phase_deg
        };
        let cbf = phase_rmse(MethodSel::Cbf);
        let cc = phase_rmse(MethodSel::CbfCnf);
        worst_cbf = worst_cbf.max(cbf);
        if cc > cbf {
            cc_wins = false;
            println!("  seed {seed}: CBF-CNF {cc:.4} > CBF {cbf:.4} deg");
        }
    }
    let ok = worst_cbf <= 0.25 && cc_wins;
    assert!(verdict(
        4,
        ok,
        &format!(
            "10 seeds x 60 s noise-free: worst CBF phase RMSE {worst_cbf:.4} deg (<=0.25), \
             CBF-CNF <= CBF on every seed: {cc_wins}"
        ),
    ));
}

#[test]
fn criterion_5_noisy_ranking() {
    let sigma = 0.005;
    let skip = 400;
    let seeds: Vec<u64> = (1..=5).collect();
    let mut sums = [0.0f64; 4]; // cbf, cc, hil, dtft
    let mut cbf_ok = true;
    let mut snr_sum = 0.0;
    for &seed in &seeds {
        let params = MrwmParams {
            duration_samples: 40_000, // 20 s
            rng_seed: seed,
            noise_sigma1_v: sigma,
            noise_sigma2_v: sigma,
            ..MrwmParams::default()
        };
        let record = mrwm_generate(&params).unwrap();
        snr_sum += measure_snr(&record);
        let freq_rmse = |m: MethodSel| -> f64 {
            let (est, _) = run_method(m, &record).unwrap();
            rmse(&est, &record.truth, skip).unwrap().frequency_hz
        };
        let vals =
            [MethodSel::Cbf, MethodSel::CbfCnf, MethodSel::Hilbert, MethodSel::AnfDtft]
                .map(freq_rmse);
        if vals[0] > 3.0 {
            cbf_ok = false;
        }
        for (s, v) in sums.iter_mut().zip(vals) {
            *s += v;
        }
        println!(
            "  seed {seed}: cbf {:.3} cbf-cnf {:.3} hilbert {:.3} anf-dtft {:.3} Hz",
            vals[0], vals[1], vals[2], vals[3]
        );
    }
    let n = seeds.len() as f64;
    let [cbf, cc, hil, dtft] = sums.map(|s| s / n);
    let snr = snr_sum / n;
    let ranked = hil > dtft && dtft > cbf && dtft > cc;
    let ok = ranked && cbf_ok;
    assert!(verdict(
        5,
        ok,
        &format!(
            "sigma 5 mV, mean freq RMSE (Hz): Hilbert {hil:.3} > DTFT(ANF) {dtft:.3} > \
             {{CBF {cbf:.3}, CBF-CNF {cc:.3}}}; CBF <= 3 Hz each seed: {cbf_ok}; measured SNR \
             {snr:.1} dB (note: outside the nominal 20 +/- 2 dB; 5 mV against the default \
             signal ranges gives ~28 dB)"
        ),
    ));
}

#[test]
fn criterion_6_baseline_oracles() {
    // Sliding DTFT recursion vs direct summation over 1e4 steps.
    let mut dtft = DtftState::new(128, theta());
    let mut ops = OpCounters::default();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        dtft.push(rng.gen_range(-1.0..1.0), &mut ops);
        if let Ok(v) = dtft.value() {
            worst = worst.max((v - dtft.direct_sum()).norm());
        }
    }

    // ANF cold start at 95 Hz onto a 90 Hz tone: within 0.1 Hz in 0.5 s.
    let mut anf = AnfState::new(AnfConfig {
        init_freq_hz: 95.0,
        ..AnfConfig::default()
    });
    let mut settle = None;
    let mut final_f = 0.0;
    for i in 0..2000 {
        let y = 0.1 * (2.0 * PI * 90.0 * i as f64 / FS).sin();
        anf.step(y, &mut ops).unwrap();
        final_f = anf.freq_hz();
        if settle.is_none() && (final_f - 90.0).abs() <= 0.1 {
            settle = Some(i as f64 / FS);
        }
    }
    let settled = settle.is_some_and(|t| t <= 0.5) && (final_f - 90.0).abs() <= 0.1;
    let ok = worst < 1e-9 && settled;
    assert!(verdict(
        6,
        ok,
        &format!(
            "DTFT recursion vs direct {worst:.2e} (<1e-9) over 1e4 steps; ANF 95 -> 90 Hz \
             settled at {:.3} s (<=0.5), final {final_f:.3} Hz",
            settle.unwrap_or(f64::NAN)
        ),
    ));
}

#[test]
fn criterion_7_cnf_group_delay() {
    let cnf = defaults::default_cnf().unwrap();
    let (gd, near_notch) = group_delay(&cnf, theta());
    let ok = !near_notch && gd <= 3.0 && gd > 0.0;
    assert!(verdict(
        7,
        ok,
        &format!("CNF group delay at +92.5 Hz: {gd:.3} samples (<=3)"),
    ));
}

#[test]
fn criterion_8_complexity_ranking() {
    let params = MrwmParams {
        duration_samples: 20_000,
        rng_seed: 3,
        noise_sigma1_v: 0.005,
        noise_sigma2_v: 0.005,
        ..MrwmParams::default()
    };
    let record = mrwm_generate(&params).unwrap();
    let muls = |m: MethodSel| -> f64 {
        let (est, ops) = run_method(m, &record).unwrap();
        audit_complexity(&ops, est.len() as u64).1
    };
    let cbf = muls(MethodSel::Cbf);
    let cnf = muls(MethodSel::Cnf);
    let cc = muls(MethodSel::CbfCnf);
    let dtft = muls(MethodSel::AnfDtft);
    let hil = muls(MethodSel::Hilbert);
    let approx_equal = (cbf - cnf).abs() <= 0.2 * cbf.max(cnf);
    let ok = approx_equal && cbf.max(cnf) < cc && cc < dtft && dtft < hil;
    assert!(verdict(
        8,
        ok,
        &format!(
            "multiplications/sample: CBF {cbf:.1} ~ CNF {cnf:.1} < CBF-CNF {cc:.1} < DTFT(ANF) \
             {dtft:.1} < Hilbert {hil:.1} — the CBF-CNF < DTFT(ANF) link does not hold under \
             this instrumented count (complex multiplies expanded to 4 real ones; the reference \
             ranking counts complex operations as single ops and assumes a costlier DTFT update)"
        ),
    ));
}

#[test]
fn criterion_9_determinism() {
    let bin = env!("CARGO_BIN_EXE_cmft");
    let tmp = tempfile::tempdir().unwrap();
    let run = |dir: &str| {
        let out = tmp.path().join(dir);
        let status = Command::new(bin)
            .args([
                "track",
                "--scenario",
                "mrwm",
                "--seed",
                "42",
                "--noise-sigma",
                "0.005",
                "--duration",
                "5",
                "--out",
            ])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        out
    };
    let a = run("a");
    let b = run("b");
    let mut names: Vec<String> = std::fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(!names.is_empty());
    let mut identical = true;
    for name in &names {
        let fa = std::fs::read(a.join(name)).unwrap();
        let fb = std::fs::read(b.join(name)).unwrap();
        if fa != fb {
            identical = false;
            println!("  {name}: differs");
        }
    }
    assert!(verdict(
        9,
        identical,
        &format!("two identical runs, {} output files byte-identical", names.len()),
    ));
}
