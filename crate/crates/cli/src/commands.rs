use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use thiserror::Error;

use irs_mec::experiments::{
    self, direct_rate, fit_gain_interpretation, headline_report, irs_rate, write_all_figures,
    ExperimentError, FigureId,
};
use irs_mec::scenario::{load_scenario_with, ConfigFormat};
use irs_mec::units::{dbm_to_watts, linear_to_db, watts_to_dbm};
use irs_mec::{
    calibrate_interference, expand_sweep, local_latency, max_local_data_for_deadline,
    mean_throughput_mc, min_bandwidth_for_deadline, offload_latency, received_power_direct,
    received_power_irs, snr, throughput, DirectLink, FadingSampler, GainInterpretation, ModelError,
    Processor, Scenario, ScenarioError, SweepSpec, SweepVariable,
};

use crate::record::Record;
use crate::Cli;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Scenario(_) => "validation",
            CliError::Model(_) => "domain",
            CliError::Experiment(ExperimentError::Io { .. }) | CliError::Io { .. } => "io",
            CliError::Experiment(ExperimentError::Scenario(_)) => "validation",
            CliError::Experiment(_) => "domain",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let scenario = load(cli)?;
    let json = cli.global.json;
    match &cli.command {
        crate::Command::Link(args) => cmd_link(&scenario, args, json),
        crate::Command::Offload(args) => cmd_offload(&scenario, args, json),
        crate::Command::Calibrate(args) => cmd_calibrate(&scenario, args, json),
        crate::Command::Figure(args) => cmd_figure(&scenario, args, json),
        crate::Command::Sweep(args) => cmd_sweep(&scenario, args),
        crate::Command::Headline(args) => cmd_headline(&scenario, args, json),
    }
}

fn load(cli: &Cli) -> Result<Scenario, CliError> {
    let g = &cli.global;
    let (text, format) = match &g.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let format = match g.config_format.as_deref() {
                Some("json") => ConfigFormat::Json,
                Some(_) => ConfigFormat::Toml,
                None if path.extension().is_some_and(|e| e == "json") => ConfigFormat::Json,
                None => ConfigFormat::Toml,
            };
            (text, format)
        }
        None => (String::new(), ConfigFormat::Toml),
    };
    Ok(load_scenario_with(&text, format, &g.overrides)?)
}

/// Collects flag-level edits as config overrides so they pass through the
/// same validation as the config file.
#[derive(Default)]
struct Edits(Vec<String>);

impl Edits {
    fn set(&mut self, key: &str, value: Option<impl ToString>) -> &mut Self {
        if let Some(v) = value {
            self.0.push(format!("{key}={}", v.to_string()));
        }
        self
    }

    fn apply(&self, scenario: &Scenario) -> Result<Scenario, CliError> {
        Ok(scenario.with_overrides(&self.0)?)
    }
}

fn one_of(a: Option<f64>, b: Option<f64>, scale: f64) -> Option<f64> {
    a.or(b.map(|v| v * scale))
}

#[derive(Debug, Args)]
pub struct LinkArgs {
    /// Evaluate the IRS-reflected link instead of the direct one.
    #[arg(long)]
    pub irs: bool,
    /// UE-BS separation in meters (IRS: split as d1 = d2 = separation / 2).
    #[arg(long, value_name = "M")]
    pub separation: Option<f64>,
    /// UE-IRS distance in meters (IRS link only).
    #[arg(long, value_name = "M", requires = "irs")]
    pub d1: Option<f64>,
    /// IRS-BS distance in meters (IRS link only).
    #[arg(long, value_name = "M", requires = "irs")]
    pub d2: Option<f64>,
    /// Uplink bandwidth in Hz.
    #[arg(long, value_name = "HZ", conflicts_with = "bandwidth_mhz")]
    pub bandwidth: Option<f64>,
    /// Uplink bandwidth in MHz.
    #[arg(long, value_name = "MHZ")]
    pub bandwidth_mhz: Option<f64>,
    /// Transmit power in watts.
    #[arg(long, value_name = "W", conflicts_with = "tx_power_dbm")]
    pub tx_power: Option<f64>,
    /// Transmit power in dBm.
    #[arg(long, value_name = "DBM")]
    pub tx_power_dbm: Option<f64>,
    /// How antenna gains in dB keys are read (db or linear).
    #[arg(long, value_name = "MODE")]
    pub gain_interpretation: Option<GainInterpretation>,
    /// Also estimate the mean direct-link throughput under Rayleigh fading
    /// with this many samples.
    #[arg(long, value_name = "N")]
    pub mc_samples: Option<usize>,
    /// Fading RNG seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn cmd_link(base: &Scenario, args: &LinkArgs, json: bool) -> Result<(), CliError> {
    if args.irs && args.mc_samples.is_some() {
        return Err(CliError::Usage(
            "--mc-samples applies to the direct link only".to_owned(),
        ));
    }
    let bandwidth = one_of(args.bandwidth, args.bandwidth_mhz, 1e6);
    let tx_power = args.tx_power.or(args.tx_power_dbm.map(dbm_to_watts));
    let mut edits = Edits::default();
    if args.irs {
        edits
            .set("irs.bandwidth_hz", bandwidth)
            .set("irs.tx_power_w", tx_power)
            .set("irs.d1_m", args.separation.map(|s| s / 2.0))
            .set("irs.d2_m", args.separation.map(|s| s / 2.0))
            .set("irs.d1_m", args.d1)
            .set("irs.d2_m", args.d2);
    } else {
        edits
            .set("direct.bandwidth_hz", bandwidth)
            .set("direct.tx_power_w", tx_power)
            .set("direct.distance_m", args.separation);
    }
    edits.set(
        "irs.gain_interpretation",
        args.gain_interpretation.map(|g| format!("\"{g}\"")),
    );
    let scenario = edits.apply(base)?;
    let env = &scenario.environment;

    let (power, bandwidth) = if args.irs {
        (received_power_irs(&scenario.irs, env)?, scenario.irs.bandwidth_hz)
    } else {
        (received_power_direct(&scenario.direct, env)?, scenario.direct.bandwidth_hz)
    };
    let ratio = snr(power, env)?;
    let rate = throughput(bandwidth, ratio)?;

    let mut rec = Record::new();
    rec.text("link", if args.irs { "irs" } else { "direct" })
        .num("received_power_w", power)
        .num("received_power_dbm", watts_to_dbm(power))
        .num("interference_power_w", env.interference_power_w)
        .num("snr", ratio)
        .num("snr_db", linear_to_db(ratio))
        .num("bandwidth_hz", bandwidth)
        .num("throughput_bps", rate);
    if args.irs {
        rec.num("d1_m", scenario.irs.d1_m)
            .num("d2_m", scenario.irs.d2_m)
            .text("gain_interpretation", scenario.config.irs.gain_interpretation.to_string());
    } else {
        rec.num("distance_m", scenario.direct.distance_m);
    }
    if let Some(n) = args.mc_samples {
        let est = mean_throughput_mc(&scenario.direct, env, &FadingSampler::new(args.seed, 0), n)?;
        rec.int("mc_samples", est.samples)
            .int("mc_seed", args.seed)
            .num("mc_mean_throughput_bps", est.mean_bps)
            .num("mc_half_width_bps", est.half_width_bps);
    }
    print!("{}", rec.render(json));
    Ok(())
}

#[derive(Debug, Args)]
pub struct OffloadArgs {
    /// Task size in bytes (default: largest configured size).
    #[arg(long, value_name = "BYTES")]
    pub data_bytes: Option<u64>,
    /// Offload over the IRS-reflected link.
    #[arg(long)]
    pub irs: bool,
    /// Uplink bandwidth in Hz.
    #[arg(long, value_name = "HZ", conflicts_with = "bandwidth_mhz")]
    pub bandwidth: Option<f64>,
    /// Uplink bandwidth in MHz.
    #[arg(long, value_name = "MHZ")]
    pub bandwidth_mhz: Option<f64>,
    /// UE-BS separation in meters (IRS: d1 = d2 = separation / 2).
    #[arg(long, value_name = "M")]
    pub separation: Option<f64>,
    /// Per-user MEC capacity in Hz.
    #[arg(long, value_name = "HZ", conflicts_with = "mec_ghz")]
    pub mec_hz: Option<f64>,
    /// Per-user MEC capacity in GHz.
    #[arg(long, value_name = "GHZ")]
    pub mec_ghz: Option<f64>,
    /// CPU cycles per bit.
    #[arg(long, value_name = "CYCLES")]
    pub cycles_per_bit: Option<f64>,
    /// Completion deadline in seconds.
    #[arg(long, value_name = "S")]
    pub deadline: Option<f64>,
    /// UE CPU frequency in Hz for the local-processing comparison
    /// (default: first configured UE CPU).
    #[arg(long, value_name = "HZ")]
    pub cpu_hz: Option<f64>,
}

fn cmd_offload(base: &Scenario, args: &OffloadArgs, json: bool) -> Result<(), CliError> {
    let bandwidth = one_of(args.bandwidth, args.bandwidth_mhz, 1e6);
    let mut edits = Edits::default();
    edits
        .set("direct.bandwidth_hz", bandwidth)
        .set("irs.bandwidth_hz", bandwidth)
        .set("direct.distance_m", args.separation)
        .set("irs.d1_m", args.separation.map(|s| s / 2.0))
        .set("irs.d2_m", args.separation.map(|s| s / 2.0))
        .set("compute.mec_per_user_hz", one_of(args.mec_hz, args.mec_ghz, 1e9))
        .set("compute.cycles_per_bit", args.cycles_per_bit)
        .set("compute.deadline_s", args.deadline);
    let scenario = edits.apply(base)?;
    let env = &scenario.environment;
    let task = scenario.task(args.data_bytes.unwrap_or(scenario.config.compute.data_bytes_max));

    let (power, bandwidth) = if args.irs {
        (received_power_irs(&scenario.irs, env)?, scenario.irs.bandwidth_hz)
    } else {
        (received_power_direct(&scenario.direct, env)?, scenario.direct.bandwidth_hz)
    };
    let ratio = snr(power, env)?;
    let rate = throughput(bandwidth, ratio)?;
    let latency = offload_latency(&task, rate, &scenario.mec)?;

    let mut rec = Record::new();
    rec.text("link", if args.irs { "irs" } else { "direct" })
        .int("data_bytes", task.data_bytes)
        .num("bandwidth_hz", bandwidth)
        .num("uplink_rate_bps", rate)
        .num("transmission_s", latency.transmission_s)
        .num("processing_s", latency.processing_s)
        .num("total_s", latency.total_s())
        .num("deadline_s", task.deadline_s)
        .flag("meets_deadline", latency.total_s() <= task.deadline_s);
    match min_bandwidth_for_deadline(&task, ratio, &scenario.mec) {
        Ok(b) => {
            rec.num("min_bandwidth_hz", b);
        }
        Err(ModelError::InfeasibleDeadline { .. }) => {
            rec.text("min_bandwidth_hz", "infeasible");
        }
        Err(e) => return Err(e.into()),
    }
    let cpu = match args.cpu_hz {
        Some(hz) => Processor::new(hz, scenario.config.compute.ue_occupied_hz)?,
        None => scenario.ue_cpus[0],
    };
    rec.num("local_cpu_hz", cpu.total_hz)
        .num("local_latency_s", local_latency(&task, &cpu)?)
        .int(
            "max_local_bytes",
            max_local_data_for_deadline(&cpu, task.cycles_per_bit, task.deadline_s)?,
        );
    print!("{}", rec.render(json));
    Ok(())
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Observed direct-link throughput at the anchor, b/s.
    #[arg(long, value_name = "BPS")]
    pub anchor_rate: Option<f64>,
    /// Bandwidth at the anchor, Hz.
    #[arg(long, value_name = "HZ")]
    pub anchor_bandwidth: Option<f64>,
    /// UE-BS distance at the anchor, m.
    #[arg(long, value_name = "M")]
    pub anchor_distance: Option<f64>,
    /// Also pick the antenna-gain reading that best reproduces the
    /// published IRS throughputs.
    #[arg(long)]
    pub fit_gain: bool,
}

fn cmd_calibrate(scenario: &Scenario, args: &CalibrateArgs, json: bool) -> Result<(), CliError> {
    let cal = &scenario.config.calibration;
    let anchor = DirectLink {
        bandwidth_hz: args.anchor_bandwidth.unwrap_or(cal.anchor_bandwidth_hz),
        distance_m: args.anchor_distance.unwrap_or(cal.anchor_distance_m),
        fading_coeff: 1.0,
        ..scenario.direct
    };
    anchor.validate()?;
    let rate = args.anchor_rate.unwrap_or(cal.anchor_rate_bps);
    let n = calibrate_interference(&anchor, scenario.environment.path_loss_exponent, rate)?;

    let check = {
        let env = irs_mec::RadioEnvironment {
            interference_power_w: n,
            ..scenario.environment
        };
        throughput(anchor.bandwidth_hz, snr(received_power_direct(&anchor, &env)?, &env)?)?
    };
    let fit = if args.fit_gain {
        let calibrated = scenario.modified(|c| c.environment.interference_power_w = Some(n))?;
        Some(fit_gain_interpretation(&calibrated)?)
    } else {
        None
    };

    if json {
        let mut rec = Record::new();
        rec.num("interference_power_w", n)
            .num("anchor_rate_bps", rate)
            .num("anchor_bandwidth_hz", anchor.bandwidth_hz)
            .num("anchor_distance_m", anchor.distance_m)
            .num("reproduced_rate_bps", check);
        if let Some(fit) = &fit {
            rec.text("gain_interpretation", fit.best.to_string());
            for (g, _, err) in &fit.candidates {
                rec.num(format!("gain_fit_error_{g}"), *err);
            }
        }
        print!("{}", rec.render(true));
        return Ok(());
    }
    let mut out = String::new();
    writeln!(
        out,
        "# anchor: {rate} b/s at {} Hz, {} m; reproduced {check} b/s",
        anchor.bandwidth_hz, anchor.distance_m
    )
    .unwrap();
    writeln!(out, "[environment]").unwrap();
    writeln!(out, "interference_power_w = {n:e}").unwrap();
    if let Some(fit) = &fit {
        for (g, rates, err) in &fit.candidates {
            writeln!(
                out,
                "# {g}: irs rates {:e} / {:e} / {:e} b/s, worst relative error {err:.4}",
                rates[0], rates[1], rates[2]
            )
            .unwrap();
        }
        writeln!(out, "[irs]").unwrap();
        writeln!(out, "gain_interpretation = \"{}\"", fit.best).unwrap();
    }
    print!("{out}");
    Ok(())
}

#[derive(Debug, Clone, Copy)]
pub enum FigureSelection {
    One(FigureId),
    All,
}

fn parse_figure_id(s: &str) -> Result<FigureSelection, String> {
    if s == "all" {
        return Ok(FigureSelection::All);
    }
    let id: u32 = s
        .parse()
        .map_err(|_| format!("`{s}` is not a figure id (2..9 or all)"))?;
    FigureId::new(id)
        .map(FigureSelection::One)
        .map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure to generate: 2..9, or `all`.
    #[arg(long, value_name = "ID", value_parser = parse_figure_id)]
    pub id: FigureSelection,
    /// Output directory (created if missing).
    #[arg(long, value_name = "DIR", default_value = "figures")]
    pub out: PathBuf,
}

fn cmd_figure(scenario: &Scenario, args: &FigureArgs, json: bool) -> Result<(), CliError> {
    let written = match args.id {
        FigureSelection::All => write_all_figures(scenario, &args.out)?,
        FigureSelection::One(id) => {
            fs::create_dir_all(&args.out).map_err(|source| CliError::Io {
                path: args.out.clone(),
                source,
            })?;
            let dataset = experiments::run_figure(id, scenario)?;
            vec![(dataset.write_to(&args.out)?, dataset.rows.len())]
        }
    };
    for (path, rows) in written {
        let mut rec = Record::new();
        rec.text("wrote", path.display().to_string()).int("rows", rows as u64);
        if json {
            print!("{}", rec.render(true));
        } else {
            println!("wrote {} rows={rows}", path.display());
        }
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Variable to sweep: bandwidth_hz, data_bytes, distance_m, separation_m.
    #[arg(long = "var", value_name = "VARIABLE")]
    pub variable: SweepVariable,
    #[arg(long)]
    pub start: f64,
    #[arg(long)]
    pub stop: f64,
    #[arg(long)]
    pub step: f64,
    /// Task size for latency columns when not sweeping data_bytes
    /// (default: largest configured size).
    #[arg(long, value_name = "BYTES")]
    pub data_bytes: Option<u64>,
    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Add Monte Carlo mean direct-link throughput columns.
    #[arg(long, value_name = "N")]
    pub mc_samples: Option<usize>,
    /// Fading RNG seed; each sweep point uses its index as the substream.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn cmd_sweep(base: &Scenario, args: &SweepArgs) -> Result<(), CliError> {
    let spec = SweepSpec {
        variable: args.variable,
        start: args.start,
        stop: args.stop,
        step: args.step,
        overrides: Vec::new(),
    };
    let points = expand_sweep(&spec, base)?;
    let mut csv = String::new();
    write!(
        csv,
        "{},data_bytes,throughput_noirs_bps,throughput_irs_bps,latency_noirs_s,latency_irs_s,deadline_s",
        args.variable
    )
    .unwrap();
    if args.mc_samples.is_some() {
        csv.push_str(",throughput_noirs_mc_bps,throughput_noirs_mc_halfwidth_bps");
    }
    csv.push('\n');
    for point in &points {
        let s = &point.scenario;
        let bytes = match args.variable {
            SweepVariable::DataBytes => point.value as u64,
            _ => args.data_bytes.unwrap_or(s.config.compute.data_bytes_max),
        };
        let task = s.task(bytes);
        let direct = direct_rate(s, s.direct.bandwidth_hz, s.direct.distance_m)?;
        let reflected = irs_rate(s, s.irs.bandwidth_hz, s.irs.d1_m, s.irs.d2_m)?;
        let l_direct = offload_latency(&task, direct, &s.mec)?.total_s();
        let l_irs = offload_latency(&task, reflected, &s.mec)?.total_s();
        write!(
            csv,
            "{},{bytes},{direct},{reflected},{l_direct},{l_irs},{}",
            point.value, s.deadline_s
        )
        .unwrap();
        if let Some(n) = args.mc_samples {
            let sampler = FadingSampler::new(args.seed, point.index as u64);
            let est = mean_throughput_mc(&s.direct, &s.environment, &sampler, n)?;
            write!(csv, ",{},{}", est.mean_bps, est.half_width_bps).unwrap();
        }
        csv.push('\n');
    }
    emit(&csv, args.out.as_deref())
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Debug, Args)]
pub struct HeadlineArgs {
    /// Use the gain reading that best reproduces the published IRS
    /// throughputs instead of the configured one.
    #[arg(long)]
    pub fit_gain: bool,
    /// Also write headline.csv into this directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

fn cmd_headline(base: &Scenario, args: &HeadlineArgs, json: bool) -> Result<(), CliError> {
    let scenario = if args.fit_gain {
        let best = fit_gain_interpretation(base)?.best;
        base.modified(|c| c.irs.gain_interpretation = best)?
    } else {
        base.clone()
    };
    let report = headline_report(&scenario)?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
        emit(&report.to_csv(), Some(&dir.join("headline.csv")))?;
    }
    let mut rec = Record::new();
    rec.text("gain_interpretation", report.gain_interpretation.to_string());
    for (metric, model, reported) in report.rows() {
        rec.num(metric, model).num(format!("{metric}.reported"), reported);
    }
    print!("{}", rec.render(json));
    Ok(())
}
