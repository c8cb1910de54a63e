//! End-to-end tests of the `cmft` binary: exit codes, determinism, the
//! replay round trip and the output-directory environment variable.

use std::process::Command;

fn cmft() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cmft"))
}

#[test]
fn exit_codes() {
    // 0: success.
    let tmp = tempfile::tempdir().unwrap();
    let ok = cmft()
        .args(["evaluate", "--scenario", "tone", "--seed", "1", "--duration", "1", "--out"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));

    // 1: usage (unknown flag, rejected by the argument parser).
    let usage = cmft().args(["evaluate", "--no-such-flag"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(1));

    // 1: usage (mandatory seed missing).
    let noseed = cmft().args(["evaluate", "--scenario", "tone"]).output().unwrap();
    assert_eq!(noseed.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&noseed.stderr).contains("seed"));

    // 2: runtime (replay file does not exist).
    let runtime = cmft()
        .args(["track", "--scenario", "replay", "--seed", "1", "--replay", "/no/such/file.csv"])
        .output()
        .unwrap();
    assert_eq!(runtime.status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let out = cmft().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["design", "simulate", "track", "evaluate", "audit"] {
        assert!(text.contains(sub), "missing subcommand {sub} in help");
    }
}

#[test]
fn deterministic_byte_identical_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    for dir in ["a", "b"] {
        let status = cmft()
            .args([
                "track", "--scenario", "batch", "--seed", "7", "--noise-sigma", "0.002",
                "--method", "cbf,cnf", "--out",
            ])
            .arg(tmp.path().join(dir))
            .status()
            .unwrap();
        assert!(status.success());
    }
    for name in ["estimates_cbf.csv", "estimates_cnf.csv", "record.csv", "report.csv"] {
        let a = std::fs::read(tmp.path().join("a").join(name)).unwrap();
        let b = std::fs::read(tmp.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn replay_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let sim_dir = tmp.path().join("sim");
    let status = cmft()
        .args([
            "simulate", "--scenario", "mrwm", "--seed", "11", "--noise-sigma", "0.005",
            "--duration", "3", "--out",
        ])
        .arg(&sim_dir)
        .status()
        .unwrap();
    assert!(status.success());
    let record = sim_dir.join("record.csv");

    // Tracking the replayed record equals tracking the original scenario.
    let direct = tmp.path().join("direct");
    let replayed = tmp.path().join("replayed");
    let status = cmft()
        .args([
            "track", "--scenario", "mrwm", "--seed", "11", "--noise-sigma", "0.005",
            "--duration", "3", "--method", "cbf", "--out",
        ])
        .arg(&direct)
        .status()
        .unwrap();
    assert!(status.success());
    let status = cmft()
        .args(["track", "--scenario", "replay", "--seed", "11", "--method", "cbf", "--replay"])
        .arg(&record)
        .arg("--out")
        .arg(&replayed)
        .status()
        .unwrap();
    assert!(status.success());

    // Compare data rows only (the audit headers record different configs).
    let rows = |p: &std::path::Path| -> Vec<String> {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(String::from)
            .collect()
    };
    assert_eq!(
        rows(&direct.join("estimates_cbf.csv")),
        rows(&replayed.join("estimates_cbf.csv"))
    );
}

#[test]
fn out_dir_env_var_used_as_default() {
    let tmp = tempfile::tempdir().unwrap();
    let status = cmft()
        .env("CMFT_OUT_DIR", tmp.path())
        .args(["evaluate", "--scenario", "tone", "--seed", "2", "--duration", "1"])
        .status()
        .unwrap();
    assert!(status.success());
    assert!(tmp.path().join("report.csv").exists());
}

#[test]
fn design_writes_response_and_roots() {
    let tmp = tempfile::tempdir().unwrap();
    let out = cmft()
        .args(["design", "--preset", "cbf", "--grid", "256", "--out"])
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let resp = std::fs::read_to_string(tmp.path().join("response.csv")).unwrap();
    assert!(resp.contains("freq_hz,mag_db,group_delay_samples"));
    assert_eq!(resp.lines().filter(|l| !l.starts_with('#')).count(), 257); // header + grid
    let roots = std::fs::read_to_string(tmp.path().join("roots.csv")).unwrap();
    // 5 zeros + 5 poles, prototype and shifted.
    assert_eq!(roots.lines().filter(|l| l.contains(",pole,")).count(), 10);
    // Near-unity gain at +92.5 Hz, deep rejection at the image frequency.
    let mag_near = |target: f64| -> f64 {
        resp.lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("freq"))
            .map(|l| {
                let mut c = l.split(',');
                let f: f64 = c.next().unwrap().parse().unwrap();
                let m: f64 = c.next().unwrap().parse().unwrap();
                (f, m)
            })
            .min_by(|a, b| (a.0 - target).abs().total_cmp(&(b.0 - target).abs()))
            .unwrap()
            .1
    };
    assert!(mag_near(92.5) > -0.5, "passband {} dB", mag_near(92.5));
    assert!(mag_near(-92.5) < -80.0, "image {} dB", mag_near(-92.5));
}

#[test]
fn config_file_drives_run_and_flags_override() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "scenario = tone\nseed = 9\nduration_s = 1\nmethod = cnf\n# comment line\n",
    )
    .unwrap();
    let out_dir = tmp.path().join("out");
    let status = cmft()
        .args(["track", "--config"])
        .arg(&cfg)
        .args(["--method", "cbf", "--out"]) // flag overrides config's cnf
        .arg(&out_dir)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out_dir.join("estimates_cbf.csv").exists());
    assert!(!out_dir.join("estimates_cnf.csv").exists());
}

#[test]
fn plot_flag_emits_svg() {
    let tmp = tempfile::tempdir().unwrap();
    let status = cmft()
        .args([
            "track", "--scenario", "tone", "--seed", "4", "--duration", "1", "--method", "cbf",
            "--plot", "--out",
        ])
        .arg(tmp.path())
        .status()
        .unwrap();
    assert!(status.success());
    let svg = std::fs::read_to_string(tmp.path().join("plot_frequency_hz.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}
