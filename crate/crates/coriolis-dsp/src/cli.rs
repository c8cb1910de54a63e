//! Command-line front end: `design`, `simulate`, `track`, `evaluate`,
//! `audit`.
//!
//! All experiments are seeded (no ambient randomness) and every output file
//! carries an audit header with the resolved configuration. The default
//! output directory comes from `--out`, falling back to the `CMFT_OUT_DIR`
//! environment variable, then `./out`.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::baseline::{DtftAnfTracker, HilbertTracker};
use crate::eval::{self, EvaluationReport};
use crate::filter::{
    coeff_file, complex_shift, design_butterworth, group_delay, response_of, FilterKind,
};
use crate::io;
use crate::ops::OpCounters;
use crate::plot::{line_chart, Series};
use crate::sim::{self, MrwmParams, SensorRecord};
use crate::tracking::{ComplexTracker, Method, TrackerConfig, TrackerEstimate};
use crate::{defaults, Error, Result};

pub const OUT_DIR_ENV: &str = "CMFT_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "cmft", version, about = "Coriolis flowmeter sinusoid tracking toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inspect a filter design: response, group delay and root CSVs.
    Design(DesignArgs),
    /// Generate a ground-truthed sensor record CSV.
    Simulate(ExperimentArgs),
    /// Run trackers over a scenario and write per-method estimate CSVs.
    Track(ExperimentArgs),
    /// Run trackers and report RMSE / delay / complexity only.
    Evaluate(ExperimentArgs),
    /// Per-sample arithmetic audit of each method.
    Audit(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioKind {
    Mrwm,
    Batch,
    Tone,
    Replay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodSel {
    Cbf,
    Cnf,
    #[value(name = "cbf-cnf")]
    CbfCnf,
    Hilbert,
    #[value(name = "anf-dtft")]
    AnfDtft,
}

impl MethodSel {
    pub fn label(&self) -> &'static str {
        match self {
            MethodSel::Cbf => "cbf",
            MethodSel::Cnf => "cnf",
            MethodSel::CbfCnf => "cbf-cnf",
            MethodSel::Hilbert => "hilbert",
            MethodSel::AnfDtft => "anf-dtft",
        }
    }

    pub fn all() -> Vec<MethodSel> {
        vec![
            MethodSel::Cbf,
            MethodSel::Cnf,
            MethodSel::CbfCnf,
            MethodSel::Hilbert,
            MethodSel::AnfDtft,
        ]
    }
}

#[derive(Args, Debug, Default)]
pub struct ExperimentArgs {
    /// Flat key=value config file; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub scenario: Option<ScenarioKind>,
    /// Comma-separated method list.
    #[arg(long, value_delimiter = ',')]
    pub method: Vec<MethodSel>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Additive white-noise standard deviation, volts.
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit SVG plots alongside the CSVs.
    #[arg(long)]
    pub plot: bool,
    /// Scenario duration in seconds (mrwm / tone).
    #[arg(long)]
    pub duration: Option<f64>,
    /// Tone frequency, Hz.
    #[arg(long)]
    pub freq: Option<f64>,
    /// Tone amplitude, volts.
    #[arg(long)]
    pub amp: Option<f64>,
    /// Tone phase difference, degrees.
    #[arg(long)]
    pub phasediff: Option<f64>,
    /// Sensor record CSV to replay (scenario = replay).
    #[arg(long)]
    pub replay: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DesignArgs {
    /// Coefficient file to inspect instead of a built-in design.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Butterworth order for built-in design.
    #[arg(long, default_value_t = 5)]
    pub order: usize,
    #[arg(long, default_value_t = 10.0)]
    pub cutoff_hz: f64,
    #[arg(long, value_enum, default_value_t = DesignKind::LowPass)]
    pub kind: DesignKind,
    #[arg(long, default_value_t = defaults::SAMPLE_RATE_HZ)]
    pub fs: f64,
    /// Complex shift in Hz (rotation = 2*pi*shift/fs rad/sample).
    #[arg(long, default_value_t = defaults::CENTER_FREQ_HZ)]
    pub shift_hz: f64,
    /// Inspect the bundled default CBF / CNF instead of designing.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, default_value_t = 2048)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignKind {
    LowPass,
    HighPass,
}

/// Fully resolved experiment configuration (defaults < config file < flags).
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub scenario: ScenarioKind,
    pub methods: Vec<MethodSel>,
    pub seed: u64,
    pub noise_sigma_v: f64,
    pub out_dir: PathBuf,
    pub plot: bool,
    pub duration_s: f64,
    pub tone_freq_hz: f64,
    pub tone_amp_v: f64,
    pub tone_phase_deg: f64,
    pub replay: Option<PathBuf>,
    pub skip_s: f64,
}

impl ExperimentConfig {
    pub fn describe(&self) -> String {
        let methods: Vec<&str> = self.methods.iter().map(|m| m.label()).collect();
        let mut s = format!(
            "scenario={:?} methods={} seed={} noise_sigma={} duration_s={} skip_s={}",
            self.scenario,
            methods.join(","),
            self.seed,
            self.noise_sigma_v,
            self.duration_s,
            self.skip_s,
        );
        if self.scenario == ScenarioKind::Tone {
            s.push_str(&format!(
                " tone_freq_hz={} tone_amp_v={} tone_phase_deg={}",
                self.tone_freq_hz, self.tone_amp_v, self.tone_phase_deg
            ));
        }
        if let Some(r) = &self.replay {
            s.push_str(&format!(" replay={}", r.display()));
        }
        s
    }
}

fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::ParseError {
            line: lineno + 1,
            msg: "expected key = value".into(),
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("out"))
}

/// Merge defaults, config file and flags into a resolved configuration.
pub fn resolve_config(args: &ExperimentArgs) -> Result<ExperimentConfig> {
    let file = match &args.config {
        Some(p) => parse_config_file(p)?,
        None => BTreeMap::new(),
    };
    let get = |key: &str| file.get(key).cloned();
    let parse_f64 = |key: &str| -> Result<Option<f64>> {
        get(key)
            .map(|v| {
                v.parse::<f64>().map_err(|_| {
                    Error::InvalidConfig(format!("config key `{key}`: bad number `{v}`"))
                })
            })
            .transpose()
    };

    let scenario = args
        .scenario
        .or_else(|| match get("scenario").as_deref() {
            Some("mrwm") => Some(ScenarioKind::Mrwm),
            Some("batch") => Some(ScenarioKind::Batch),
            Some("tone") => Some(ScenarioKind::Tone),
            Some("replay") => Some(ScenarioKind::Replay),
            _ => None,
        })
        .unwrap_or(ScenarioKind::Mrwm);

    let mut methods = args.method.clone();
    if methods.is_empty() {
        if let Some(list) = get("method") {
            for tok in list.split(',') {
                methods.push(match tok.trim() {
                    "cbf" => MethodSel::Cbf,
                    "cnf" => MethodSel::Cnf,
                    "cbf-cnf" => MethodSel::CbfCnf,
                    "hilbert" => MethodSel::Hilbert,
                    "anf-dtft" => MethodSel::AnfDtft,
                    other => {
                        return Err(Error::InvalidConfig(format!("unknown method `{other}`")))
                    }
                });
            }
        }
    }
    if methods.is_empty() {
        methods = MethodSel::all();
    }

    let seed = match args.seed {
        Some(s) => s,
        None => match get("seed") {
            Some(v) => v
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("config key `seed`: bad value `{v}`")))?,
            None => return Err(Error::InvalidConfig("seed is mandatory (give --seed)".into())),
        },
    };

    let replay = args.replay.clone().or_else(|| get("replay").map(PathBuf::from));
    if scenario == ScenarioKind::Replay && replay.is_none() {
        return Err(Error::InvalidConfig("replay scenario needs --replay <file>".into()));
    }

    Ok(ExperimentConfig {
        scenario,
        methods,
        seed,
        noise_sigma_v: args.noise_sigma.or(parse_f64("noise_sigma")?).unwrap_or(0.0),
        out_dir: args
            .out
            .clone()
            .or_else(|| get("out").map(PathBuf::from))
            .unwrap_or_else(default_out_dir),
        plot: args.plot || get("plot").as_deref() == Some("true"),
        duration_s: args.duration.or(parse_f64("duration_s")?).unwrap_or(10.0),
        tone_freq_hz: args.freq.or(parse_f64("tone_freq_hz")?).unwrap_or(defaults::CENTER_FREQ_HZ),
        tone_amp_v: args.amp.or(parse_f64("tone_amp_v")?).unwrap_or(0.1),
        tone_phase_deg: args.phasediff.or(parse_f64("tone_phase_deg")?).unwrap_or(2.0),
        replay,
        skip_s: parse_f64("skip_s")?.unwrap_or(0.2),
    })
}

/// Build the scenario's sensor record.
pub fn build_record(cfg: &ExperimentConfig) -> Result<SensorRecord> {
    let fs = defaults::SAMPLE_RATE_HZ;
    let record = match cfg.scenario {
        ScenarioKind::Mrwm => {
            let params = MrwmParams {
                duration_samples: (cfg.duration_s * fs) as usize,
                rng_seed: cfg.seed,
                noise_sigma1_v: cfg.noise_sigma_v,
                noise_sigma2_v: cfg.noise_sigma_v,
                ..MrwmParams::default()
            };
            sim::mrwm_generate(&params)?
        }
        ScenarioKind::Batch => {
            let rec = sim::batch_generate(fs, 0.5, 0.5, 0.5)?;
            sim::add_noise(&rec, cfg.noise_sigma_v, cfg.seed)
        }
        ScenarioKind::Tone => {
            let rec = sim::tone_generate(
                fs,
                cfg.tone_freq_hz,
                cfg.tone_amp_v,
                cfg.tone_phase_deg,
                (cfg.duration_s * fs) as usize,
            );
            sim::add_noise(&rec, cfg.noise_sigma_v, cfg.seed)
        }
        ScenarioKind::Replay => {
            let path = cfg.replay.as_ref().expect("validated in resolve_config");
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::io(path.display().to_string(), e))?;
            io::parse_record_csv(&text)?
        }
    };
    Ok(record)
}

/// Run one method over a record; returns estimates and the op counters.
pub fn run_method(method: MethodSel, record: &SensorRecord) -> Result<(Vec<TrackerEstimate>, OpCounters)> {
    match method {
        MethodSel::Cbf | MethodSel::Cnf | MethodSel::CbfCnf => {
            let m = match method {
                MethodSel::Cbf => Method::Cbf,
                MethodSel::Cnf => Method::Cnf,
                _ => Method::CbfCnf,
            };
            let mut tracker =
                ComplexTracker::new(TrackerConfig { method: m, ..TrackerConfig::default() })?;
            let est = tracker.run(&record.x1, &record.x2)?;
            Ok((est, tracker.ops))
        }
        MethodSel::Hilbert => {
            let mut tracker = HilbertTracker::with_defaults()?;
            let est = tracker.run(&record.x1, &record.x2)?;
            Ok((est, tracker.ops))
        }
        MethodSel::AnfDtft => {
            let mut tracker = DtftAnfTracker::with_defaults();
            let est = tracker.run(&record.x1, &record.x2)?;
            Ok((est, tracker.ops))
        }
    }
}

fn evaluate_method(
    method: MethodSel,
    record: &SensorRecord,
    estimates: &[TrackerEstimate],
    ops: &OpCounters,
    skip: usize,
) -> Result<EvaluationReport> {
    let r = eval::rmse(estimates, &record.truth, skip)?;
    let delay = eval::tracking_delay(estimates, &record.truth, 60.0, skip).ok();
    let (adds, muls, storage) = eval::audit_complexity(ops, estimates.len() as u64);
    Ok(EvaluationReport {
        method: method.label().to_string(),
        rmse_amplitude_v: r.amplitude_v,
        rmse_frequency_hz: r.frequency_hz,
        rmse_phase_deg: r.phase_deg,
        tracking_delay_ms: delay,
        samples_scored: r.samples_scored,
        transient_skipped: skip,
        additions_per_sample: adds,
        multiplications_per_sample: muls,
        static_storage_bytes: storage,
    })
}

fn write_parameter_plots(
    cfg: &ExperimentConfig,
    record: &SensorRecord,
    all: &[(MethodSel, Vec<TrackerEstimate>)],
) -> Result<()> {
    let fs = record.truth.sample_rate_hz;
    let t: Vec<f64> = (0..record.x1.len()).map(|i| i as f64 / fs).collect();
    for (param, truth_vals, extract) in [
        (
            "amplitude_v",
            &record.truth.amplitude_v,
            Box::new(|e: &TrackerEstimate| e.amplitude1_v) as Box<dyn Fn(&TrackerEstimate) -> f64>,
        ),
        ("frequency_hz", &record.truth.frequency_hz, Box::new(|e: &TrackerEstimate| e.frequency_hz)),
        (
            "phase_diff_deg",
            &record.truth.phase_diff_deg,
            Box::new(|e: &TrackerEstimate| e.phase_diff_deg),
        ),
    ] {
        let est_series: Vec<(String, Vec<f64>)> = all
            .iter()
            .map(|(m, est)| (m.label().to_string(), est.iter().map(&extract).collect()))
            .collect();
        let mut series = vec![Series { label: "truth", x: &t, y: truth_vals }];
        for (label, vals) in &est_series {
            series.push(Series { label, x: &t, y: vals });
        }
        let svg = line_chart(&format!("{param} ({})", cfg.describe()), "time (s)", param, &series);
        io::write_atomic(&cfg.out_dir.join(format!("plot_{param}.svg")), &svg)?;
    }
    Ok(())
}

/// `simulate` subcommand.
pub fn run_simulate(args: &ExperimentArgs) -> Result<()> {
    let cfg = resolve_config(args)?;
    let record = build_record(&cfg)?;
    let path = cfg.out_dir.join("record.csv");
    io::write_atomic(&path, &io::record_csv(&record, &cfg.describe()))?;
    println!("wrote {}", path.display());
    if cfg.plot {
        let fs = record.truth.sample_rate_hz;
        let t: Vec<f64> = (0..record.x1.len()).map(|i| i as f64 / fs).collect();
        let svg = line_chart(
            "sensor signals",
            "time (s)",
            "volts",
            &[
                Series { label: "x1", x: &t, y: &record.x1 },
                Series { label: "x2", x: &t, y: &record.x2 },
            ],
        );
        io::write_atomic(&cfg.out_dir.join("plot_sensors.svg"), &svg)?;
    }
    Ok(())
}

/// `track` subcommand: per-method estimate CSVs + truth record + report.
pub fn run_track(args: &ExperimentArgs) -> Result<()> {
    let cfg = resolve_config(args)?;
    let record = build_record(&cfg)?;
    let skip = (cfg.skip_s * record.truth.sample_rate_hz) as usize;
    let mut reports = Vec::new();
    let mut all = Vec::new();
    for &m in &cfg.methods {
        let (est, ops) = run_method(m, &record)?;
        let path = cfg.out_dir.join(format!("estimates_{}.csv", m.label()));
        io::write_atomic(&path, &io::estimates_csv(&est, &record.truth, &cfg.describe(), cfg.seed))?;
        println!("wrote {}", path.display());
        if let Ok(rep) = evaluate_method(m, &record, &est, &ops, skip) {
            reports.push(rep);
        }
        all.push((m, est));
    }
    io::write_atomic(&cfg.out_dir.join("record.csv"), &io::record_csv(&record, &cfg.describe()))?;
    io::write_atomic(&cfg.out_dir.join("report.csv"), &io::report_csv(&reports, &cfg.describe(), cfg.seed))?;
    print!("{}", io::report_table(&reports));
    if cfg.plot {
        write_parameter_plots(&cfg, &record, &all)?;
    }
    Ok(())
}

/// `evaluate` subcommand: report only.
pub fn run_evaluate(args: &ExperimentArgs) -> Result<()> {
    let cfg = resolve_config(args)?;
    let record = build_record(&cfg)?;
    let skip = (cfg.skip_s * record.truth.sample_rate_hz) as usize;
    let mut reports = Vec::new();
    for &m in &cfg.methods {
        let (est, ops) = run_method(m, &record)?;
        reports.push(evaluate_method(m, &record, &est, &ops, skip)?);
    }
    io::write_atomic(&cfg.out_dir.join("report.csv"), &io::report_csv(&reports, &cfg.describe(), cfg.seed))?;
    print!("{}", io::report_table(&reports));
    Ok(())
}

/// `audit` subcommand: arithmetic cost per sample per method.
pub fn run_audit(args: &ExperimentArgs) -> Result<()> {
    let cfg = resolve_config(args)?;
    let record = build_record(&cfg)?;
    if record.x1.len() < 1000 {
        return Err(Error::InvalidConfig(
            "audit needs at least 1000 samples (raise --duration)".into(),
        ));
    }
    let mut reports = Vec::new();
    for &m in &cfg.methods {
        let (est, ops) = run_method(m, &record)?;
        let (adds, muls, storage) = eval::audit_complexity(&ops, est.len() as u64);
        println!(
            "{:<10} additions/sample = {adds:8.2}  multiplications/sample = {muls:8.2}  storage = {storage} bytes",
            m.label()
        );
        reports.push((m.label().to_string(), adds, muls, storage));
    }
    let mut csv = io::audit_header(&cfg.describe(), cfg.seed);
    csv.push_str("method,additions_per_sample,multiplications_per_sample,static_storage_bytes\n");
    for (label, a, mu, s) in &reports {
        csv.push_str(&format!("{label},{a},{mu},{s}\n"));
    }
    io::write_atomic(&cfg.out_dir.join("audit.csv"), &csv)?;
    Ok(())
}

/// `design` subcommand: response / group-delay / root CSVs.
pub fn run_design(args: &DesignArgs) -> Result<()> {
    let fs = args.fs;
    let out_dir = args.out.clone().unwrap_or_else(default_out_dir);
    let (proto, label) = match (&args.preset, &args.file) {
        (Some(name), _) => match name.as_str() {
            "cbf" => (defaults::elliptic_lp5(), "preset cbf (elliptic lp5)".to_string()),
            "cnf" => (defaults::elliptic_hp4(), "preset cnf (elliptic hp4)".to_string()),
            "cbf3" => (defaults::elliptic_lp3(), "preset cbf3 (elliptic lp3)".to_string()),
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown preset `{other}` (cbf, cnf, cbf3)"
                )))
            }
        },
        (None, Some(path)) => {
            let kind = match args.kind {
                DesignKind::LowPass => FilterKind::LowPass,
                DesignKind::HighPass => FilterKind::HighPass,
            };
            (coeff_file::load_prototype(path, kind, fs)?, path.display().to_string())
        }
        (None, None) => {
            let kind = match args.kind {
                DesignKind::LowPass => FilterKind::LowPass,
                DesignKind::HighPass => FilterKind::HighPass,
            };
            (
                design_butterworth(args.order, args.cutoff_hz, kind, fs)?,
                format!("butterworth order={} cutoff={} Hz", args.order, args.cutoff_hz),
            )
        }
    };
    let shift_hz = match args.preset.as_deref() {
        Some("cnf") => -args.shift_hz,
        _ => args.shift_hz,
    };
    let shift = 2.0 * std::f64::consts::PI * shift_hz / fs;
    let shifted = complex_shift(&proto, shift)?;
    let desc = format!("design: {label} shift_hz={shift_hz} fs={fs}");

    let mut resp = io::audit_header(&desc, 0);
    resp.push_str("freq_hz,mag_db,group_delay_samples\n");
    let mut peak = (0.0f64, f64::NEG_INFINITY);
    for i in 0..args.grid {
        let w = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / args.grid as f64;
        let f_hz = w * fs / (2.0 * std::f64::consts::PI);
        let mag = response_of(&shifted, w).norm();
        let mag_db = 20.0 * mag.max(1e-300).log10();
        if mag_db > peak.1 {
            peak = (f_hz, mag_db);
        }
        let (gd, _) = group_delay(&shifted, w);
        resp.push_str(&format!("{f_hz},{mag_db},{gd}\n"));
    }
    io::write_atomic(&out_dir.join("response.csv"), &resp)?;

    let mut roots = io::audit_header(&desc, 0);
    roots.push_str("stage,kind,re,im,radius\n");
    for (stage, zeros, poles) in [
        ("prototype", proto.zeros()?, proto.poles()?),
        ("shifted", shifted.zeros()?, shifted.poles()?),
    ] {
        for z in zeros {
            roots.push_str(&format!("{stage},zero,{},{},{}\n", z.re, z.im, z.norm()));
        }
        for p in poles {
            roots.push_str(&format!("{stage},pole,{},{},{}\n", p.re, p.im, p.norm()));
        }
    }
    io::write_atomic(&out_dir.join("roots.csv"), &roots)?;
    println!(
        "wrote {} and {} (peak {:.2} dB at {:.2} Hz)",
        out_dir.join("response.csv").display(),
        out_dir.join("roots.csv").display(),
        peak.1,
        peak.0
    );

    if args.plot {
        let mut f_axis = Vec::with_capacity(args.grid);
        let mut mag_axis = Vec::with_capacity(args.grid);
        for i in 0..args.grid {
            let w = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / args.grid as f64;
            f_axis.push(w * fs / (2.0 * std::f64::consts::PI));
            mag_axis.push(20.0 * response_of(&shifted, w).norm().max(1e-300).log10());
        }
        let svg = line_chart(
            &desc,
            "frequency (Hz)",
            "magnitude (dB)",
            &[Series { label: "|H|", x: &f_axis, y: &mag_axis }],
        );
        io::write_atomic(&out_dir.join("plot_response.svg"), &svg)?;
    }
    Ok(())
}

/// Dispatch; returns process exit code 0 (success) or 2 (runtime error).
/// Usage errors (exit 1) are handled by the binary's argument parsing.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Design(a) => run_design(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Track(a) => run_track(a),
        Command::Evaluate(a) => run_evaluate(a),
        Command::Audit(a) => run_audit(a),
    };
    match result {
        Ok(()) => 0,
        // Configuration mistakes are usage errors (exit 1); everything else
        // (I/O, numerics, parse failures in data files) is a runtime failure.
        Err(e @ Error::InvalidConfig(_)) => {
            eprintln!("error: {e}");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
