//! `pmflab` command-line front end.
//!
//! Every subcommand takes `--config FILE`, a JSON object whose keys are the
//! subcommand's long flag names; flags given on the command line win.
//! Exit codes: 0 success, 1 runtime or domain failure, 2 usage error.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::fading::{pmf_bounds_awgn, pmf_bounds_rx_csi, upper_bound_txrx_csi};
use crate::flow::{pmf_bounds_wireline, FlowOptions};
use crate::geometry::{connectivity_radius, Region};
use crate::graph::{
    conductance, grid_points, sparsest_cut, sparsest_cut_exact, sparsest_cut_sweep, CapGraph, Cut, WeightVector,
};
use crate::interference::{protocol_model, sinr_beta_star, sinr_threshold_model, umf_bounds_combinatorial, SinrParams};
use crate::limits::Limits;
use crate::network::{Network, Pathloss};
use crate::random_net::{
    delay_report, grid_xy_paths, sample_points, scaling_experiment_combinatorial, scaling_experiment_fading,
    CombinatorialConfig, DelayReport, ExperimentResult, FadingConfig, PathFlow,
};
use crate::report::BoundReport;
use crate::traffic::{umf_matrix, TrafficMatrix};

/// Failure of a CLI invocation.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn runtime(msg: impl Into<String>) -> CliError {
    CliError::Runtime(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "pmflab", version, about = "Bounds on product multicommodity flow in wireless networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a network (random geometric or grid placement).
    Gen(GenArgs),
    /// Lower and upper bounds on the maximum concurrent flow.
    Bound(BoundArgs),
    /// Scaling experiments over random networks.
    Experiment(ExperimentArgs),
    /// Hop-count delay of a path decomposition.
    Delay(DelayArgs),
    /// Sparsest cut or conductance of a capacitated graph.
    Cut(CutArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenModel {
    Geometric,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionKind {
    UnitSquare,
    Square,
    Torus,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct GenArgs {
    /// Placement model [default: geometric]
    #[arg(long, value_enum)]
    pub model: Option<GenModel>,
    /// Node count (geometric)
    #[arg(long)]
    pub n: Option<usize>,
    /// Grid side (grid)
    #[arg(long)]
    pub m: Option<usize>,
    /// Region [default: unit-square]
    #[arg(long, value_enum)]
    pub region: Option<RegionKind>,
    /// Region side; square and torus default to √n, the area-n region
    #[arg(long)]
    pub side: Option<f64>,
    /// Transmit power P [default: 1]
    #[arg(long)]
    pub power: Option<f64>,
    /// Pathloss exponent of g(x) = (1 + x)^-alpha [default: 3.5]
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file [default: stdout]
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMode {
    Wireline,
    Combinatorial,
    RxCsi,
    TxrxCsi,
    Awgn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    Restricted,
    Standard,
    Sinr,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub mode: Option<BoundMode>,
    /// Network JSON (all modes but wireline)
    #[arg(long)]
    pub net: Option<PathBuf>,
    /// Capacitated graph JSON (wireline)
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Node weights: `uniform`, an inline list, or a file [default: uniform]
    #[arg(long)]
    pub pi: Option<String>,
    /// Interference model for combinatorial mode [default: restricted]
    #[arg(long, value_enum)]
    pub protocol: Option<Protocol>,
    /// Link radius, or `auto` for the connectivity radius r* [default: auto]
    #[arg(long)]
    pub r: Option<String>,
    /// Protocol guard factor [default: 0.5]
    #[arg(long)]
    pub eta: Option<f64>,
    /// Treat a transmitting receiver as a conflict [default: true]
    #[arg(long)]
    pub half_duplex: Option<bool>,
    /// SINR link threshold
    #[arg(long)]
    pub gamma: Option<f64>,
    /// SINR interference threshold [default: the largest feasible beta]
    #[arg(long)]
    pub beta: Option<f64>,
    /// SINR link rate W [default: 1]
    #[arg(long)]
    pub w: Option<f64>,
    /// Noise power N0B [default: the network's, else 1]
    #[arg(long)]
    pub n0b: Option<f64>,
    /// AWGN residual interference budget [default: 0.1]
    #[arg(long)]
    pub delta: Option<f64>,
    /// Use the approximate flow with this accuracy when the LP is too large
    #[arg(long)]
    pub approximate: Option<f64>,
    /// Caps such as `enumeration=20,lp_rows=900` [default: $PMFLAB_LIMITS]
    #[arg(long)]
    pub limits: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    ScalingComb,
    ScalingFading,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub kind: Option<ExperimentKind>,
    /// Network sizes [default: 16,36,64,100,144,196 or 16,36,64,100]
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<usize>>,
    /// Trials per size [default: 10 or 20]
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Pathloss exponent (fading) [default: 3.5]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Radius constant (combinatorial) [default: 1]
    #[arg(long)]
    pub c_r: Option<f64>,
    /// Protocol guard factor (combinatorial) [default: 0.5]
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub half_duplex: Option<bool>,
    /// TDMA radius constant (fading) [default: 1]
    #[arg(long)]
    pub c: Option<f64>,
    /// Accuracy of the approximate flow [default: 0.5]
    #[arg(long)]
    pub flow_eps: Option<f64>,
    #[arg(long)]
    pub limits: Option<String>,
    /// Stdout format when no output directory is given [default: csv]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output directory for results.csv and summary.json
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct DelayArgs {
    /// JSON list of `{"nodes": [...], "flow": f}` routes
    #[arg(long)]
    pub paths: Option<PathBuf>,
    /// Traffic matrix JSON the routes must carry
    #[arg(long)]
    pub traffic: Option<PathBuf>,
    /// Row-then-column routes of the uniform flow on the m x m grid
    #[arg(long)]
    pub grid: Option<usize>,
    /// Per-pair rate for --grid [default: 1]
    #[arg(long)]
    pub f: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutKind {
    Sparsest,
    Conductance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutMethod {
    Auto,
    Exact,
    Sweep,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct CutArgs {
    /// Capacitated graph JSON
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Objective [default: sparsest]
    #[arg(long, value_enum)]
    pub kind: Option<CutKind>,
    /// Sparsest-cut method [default: auto]
    #[arg(long, value_enum)]
    pub method: Option<CutMethod>,
    #[arg(long)]
    pub pi: Option<String>,
    #[arg(long)]
    pub limits: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

/// Result of `pmflab cut`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutReport {
    pub kind: CutKind,
    pub value: f64,
    pub cut: Cut,
}

/// Parses `args` (program name first), runs the subcommand and maps the
/// outcome to an exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("\nFor more information, try '--help'.");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Gen(a) => {
            let a = merge_config(&a, a.config.as_deref())?;
            let net = cmd_gen(&a)?;
            emit(a.output.as_deref(), &to_json(&net))
        }
        Command::Bound(a) => {
            let a = merge_config(&a, a.config.as_deref())?;
            let report = cmd_bound(&a)?;
            emit(a.output.as_deref(), &to_json(&report))
        }
        Command::Experiment(a) => {
            let a = merge_config(&a, a.config.as_deref())?;
            cmd_experiment(&a)
        }
        Command::Delay(a) => {
            let a = merge_config(&a, a.config.as_deref())?;
            let report = cmd_delay(&a)?;
            emit(a.output.as_deref(), &to_json(&report))
        }
        Command::Cut(a) => {
            let a = merge_config(&a, a.config.as_deref())?;
            let report = cmd_cut(&a)?;
            emit(a.output.as_deref(), &to_json(&report))
        }
    }
}

/// Overlays the flags that were given on the config file's object.
pub fn merge_config<T>(flags: &T, config: Option<&Path>) -> Result<T, CliError>
where
    T: Serialize + DeserializeOwned + Clone,
{
    let Some(path) = config else {
        return Ok(flags.clone());
    };
    let text =
        std::fs::read_to_string(path).map_err(|e| runtime(format!("cannot read config {}: {e}", path.display())))?;
    let mut base: Value = serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
    let Value::Object(map) = &mut base else {
        return Err(usage(format!("config {} must hold a JSON object", path.display())));
    };
    if let Value::Object(given) = serde_json::to_value(flags).expect("arguments serialize") {
        for (k, v) in given.into_iter().filter(|(_, v)| !v.is_null()) {
            map.insert(k, v);
        }
    }
    serde_json::from_value(base).map_err(|e| usage(format!("config {}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))
}

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| runtime(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| runtime(format!("invalid {what} {}: {e}", path.display())))
}

fn load_network(path: Option<&Path>) -> Result<Network, CliError> {
    let path = path.ok_or_else(|| usage("--net is required for this mode"))?;
    let net: Network = read_json(path, "network")?;
    net.validate()?;
    Ok(net)
}

fn load_graph(path: Option<&Path>) -> Result<CapGraph, CliError> {
    let path = path.ok_or_else(|| usage("--graph is required"))?;
    read_json(path, "graph")
}

/// `--limits` beats `$PMFLAB_LIMITS`, which beats the defaults.
pub fn resolve_limits(flag: Option<&str>) -> Result<Limits, CliError> {
    match flag {
        Some(spec) => Limits::parse(spec).map_err(|e| usage(format!("--limits: {e}"))),
        None => Ok(Limits::from_env()?),
    }
}

/// Reads `--pi` for an `n`-node instance and rescales it to `Σπ = p_π`,
/// warning on stderr when that changed anything.
pub fn load_pi(spec: Option<&str>, n: usize) -> Result<WeightVector, CliError> {
    let spec = spec.unwrap_or("uniform").trim();
    let w = if spec == "uniform" {
        WeightVector::uniform(n)
    } else {
        let text = if Path::new(spec).is_file() {
            std::fs::read_to_string(spec).map_err(|e| runtime(format!("cannot read weights {spec}: {e}")))?
        } else {
            spec.to_string()
        };
        WeightVector::new(parse_list(&text)?)?
    };
    let (normalized, changed) = w.normalized();
    if changed {
        eprintln!("warning: weights rescaled so that they sum to the number of positive entries");
    }
    Ok(normalized)
}

fn parse_list(text: &str) -> Result<Vec<f64>, CliError> {
    let text = text.trim();
    if text.starts_with('[') {
        return serde_json::from_str(text).map_err(|e| usage(format!("--pi: {e}")));
    }
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| usage(format!("--pi: `{t}` is not a number"))))
        .collect()
}

pub fn cmd_gen(a: &GenArgs) -> Result<Network, CliError> {
    let alpha = a.alpha.unwrap_or(3.5);
    let power = a.power.unwrap_or(1.0);
    let seed = a.seed.unwrap_or(0);
    let pathloss = Pathloss::InversePoly { alpha };
    match a.model.unwrap_or(GenModel::Geometric) {
        GenModel::Geometric => {
            let n = a.n.ok_or_else(|| usage("--n is required for --model geometric"))?;
            let region = region_for(a, n)?;
            let points = sample_points(n, region, seed, n as u64)?;
            Ok(Network::new(region, points, power, pathloss)?)
        }
        GenModel::Grid => {
            let m = a.m.ok_or_else(|| usage("--m is required for --model grid"))?;
            if m == 0 {
                return Err(usage("--m must be positive"));
            }
            let region = region_for(a, m * m)?;
            let points = grid_points(m, region.side());
            Ok(Network::new(region, points, power, pathloss)?)
        }
    }
}

fn region_for(a: &GenArgs, n: usize) -> Result<Region, CliError> {
    let side = a.side.unwrap_or((n as f64).sqrt());
    let region = match a.region.unwrap_or(RegionKind::UnitSquare) {
        RegionKind::UnitSquare => {
            if a.side.is_some_and(|s| s != 1.0) {
                return Err(usage("--side conflicts with --region unit-square"));
            }
            Region::UNIT
        }
        RegionKind::Square => Region::Square { side },
        RegionKind::Torus => Region::Torus { side },
    };
    region.validate()?;
    Ok(region)
}

fn radius(spec: Option<&str>, net: &Network) -> Result<f64, CliError> {
    match spec.unwrap_or("auto").trim() {
        "auto" => Ok(connectivity_radius(&net.points, net.region.metric())?),
        s => s.parse::<f64>().map_err(|_| usage(format!("--r expects a number or `auto`, got `{s}`"))),
    }
}

pub fn cmd_bound(a: &BoundArgs) -> Result<BoundReport, CliError> {
    let mode = a.mode.ok_or_else(|| usage("--mode is required"))?;
    let limits = resolve_limits(a.limits.as_deref())?;
    let mut opts = FlowOptions::with_limits(limits);
    opts.approximate = a.approximate;
    if mode == BoundMode::Wireline {
        let g = load_graph(a.graph.as_deref())?;
        let w = load_pi(a.pi.as_deref(), g.n())?;
        return Ok(pmf_bounds_wireline(&g, &w, &limits)?);
    }
    let net = load_network(a.net.as_deref())?;
    let w = load_pi(a.pi.as_deref(), net.n())?;
    match mode {
        BoundMode::Wireline => unreachable!(),
        BoundMode::Combinatorial => {
            let half_duplex = a.half_duplex.unwrap_or(true);
            let protocol = a.protocol.unwrap_or(Protocol::Restricted);
            let model = match protocol {
                Protocol::Restricted | Protocol::Standard => {
                    let r = radius(a.r.as_deref(), &net)?;
                    protocol_model(&net, r, a.eta.unwrap_or(0.5), protocol == Protocol::Restricted, half_duplex)?
                }
                Protocol::Sinr => {
                    let gamma = a.gamma.ok_or_else(|| usage("--gamma is required for --protocol sinr"))?;
                    let w_rate = a.w.unwrap_or(1.0);
                    let n0b = a.n0b.or(net.n0b).unwrap_or(1.0);
                    let beta = a.beta.unwrap_or_else(|| sinr_beta_star(net.n(), net.power, gamma, w_rate, n0b));
                    sinr_threshold_model(&net, SinrParams { gamma, beta, w: w_rate, n0b }, half_duplex)?
                }
            };
            Ok(umf_bounds_combinatorial(&model, &w, &opts)?)
        }
        BoundMode::RxCsi => {
            let r = radius(a.r.as_deref(), &net)?;
            Ok(pmf_bounds_rx_csi(&net, &w, r, &opts)?)
        }
        BoundMode::TxrxCsi => {
            let r = radius(a.r.as_deref(), &net)?;
            let (upper, cut) = upper_bound_txrx_csi(&net, &w, limits.enumeration)?;
            let rx = pmf_bounds_rx_csi(&net, &w, r, &opts)?;
            let mut report = BoundReport::new(rx.lower, upper, cut.side_s.clone())
                .with("cut_capacity", cut.cut_capacity)
                .with("rx_csi_upper", rx.upper);
            for key in ["r", "r_star", "log_p_pi"] {
                if let Some(v) = rx.meta(key) {
                    report = report.with(key, v);
                }
            }
            report.heuristic = cut.heuristic || rx.heuristic;
            report.lower_witness = rx.lower_witness;
            Ok(report)
        }
        BoundMode::Awgn => Ok(pmf_bounds_awgn(&net, &w, a.delta.unwrap_or(0.1), &opts)?),
    }
}

pub fn cmd_experiment(a: &ExperimentArgs) -> Result<(), CliError> {
    let kind = a.kind.ok_or_else(|| usage("experiment kind is required (scaling-comb or scaling-fading)"))?;
    let limits = resolve_limits(a.limits.as_deref())?;
    let seed = a.seed.unwrap_or(0);
    let result = match kind {
        ExperimentKind::ScalingComb => {
            let d = CombinatorialConfig::default();
            let cfg = CombinatorialConfig {
                c_r: a.c_r.unwrap_or(d.c_r),
                eta: a.eta.unwrap_or(d.eta),
                half_duplex: a.half_duplex.unwrap_or(d.half_duplex),
                flow_eps: a.flow_eps.unwrap_or(d.flow_eps),
                limits,
            };
            let ns = a.ns.clone().unwrap_or_else(|| vec![16, 36, 64, 100, 144, 196]);
            scaling_experiment_combinatorial(&ns, a.trials.unwrap_or(10), seed, &cfg)?
        }
        ExperimentKind::ScalingFading => {
            let d = FadingConfig::default();
            let cfg = FadingConfig { c: a.c.unwrap_or(d.c), flow_eps: a.flow_eps.unwrap_or(d.flow_eps), limits };
            let ns = a.ns.clone().unwrap_or_else(|| vec![16, 36, 64, 100]);
            scaling_experiment_fading(&ns, a.alpha.unwrap_or(3.5), a.trials.unwrap_or(20), seed, &cfg)?
        }
    };
    write_experiment(&result, a.output.as_deref(), a.format.unwrap_or(Format::Csv))?;
    if result.all_failed() {
        return Err(runtime("every trial failed; see the status column"));
    }
    Ok(())
}

fn write_experiment(result: &ExperimentResult, dir: Option<&Path>, format: Format) -> Result<(), CliError> {
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| runtime(format!("cannot create {}: {e}", dir.display())))?;
            write_file(&dir.join("results.csv"), &result.to_csv())?;
            write_file(&dir.join("summary.json"), &to_json(result))
        }
        None => match format {
            Format::Csv => emit(None, &result.to_csv()),
            Format::Json => emit(None, &to_json(result)),
        },
    }
}

pub fn cmd_delay(a: &DelayArgs) -> Result<DelayReport, CliError> {
    match (a.grid, a.paths.as_deref()) {
        (Some(_), Some(_)) => Err(usage("--grid and --paths are mutually exclusive")),
        (Some(m), None) => {
            if m < 2 {
                return Err(usage("--grid needs m >= 2"));
            }
            let f = a.f.unwrap_or(1.0);
            Ok(delay_report(&grid_xy_paths(m, f), &umf_matrix(m * m, f))?)
        }
        (None, Some(paths)) => {
            let paths: Vec<PathFlow> = read_json(paths, "paths")?;
            let traffic = a.traffic.as_deref().ok_or_else(|| usage("--traffic is required with --paths"))?;
            let lam: TrafficMatrix = read_json(traffic, "traffic matrix")?;
            Ok(delay_report(&paths, &lam)?)
        }
        (None, None) => Err(usage("give --paths with --traffic, or --grid")),
    }
}

pub fn cmd_cut(a: &CutArgs) -> Result<CutReport, CliError> {
    let g = load_graph(a.graph.as_deref())?;
    let limits = resolve_limits(a.limits.as_deref())?;
    match a.kind.unwrap_or(CutKind::Sparsest) {
        CutKind::Sparsest => {
            let w = load_pi(a.pi.as_deref(), g.n())?;
            let cut = match a.method.unwrap_or(CutMethod::Auto) {
                CutMethod::Auto => sparsest_cut(&g, &w, limits.enumeration)?,
                CutMethod::Exact => sparsest_cut_exact(&g, &w, limits.enumeration)?,
                CutMethod::Sweep => sparsest_cut_sweep(&g, &w)?,
            };
            Ok(CutReport { kind: CutKind::Sparsest, value: cut.sparsity, cut })
        }
        CutKind::Conductance => {
            if a.pi.is_some() {
                return Err(usage("--pi does not apply to conductance"));
            }
            let (cut, value) = conductance(&g, limits.enumeration)?;
            Ok(CutReport { kind: CutKind::Conductance, value, cut })
        }
    }
}
