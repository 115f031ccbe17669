//! Argument parsing and command dispatch.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdc_core::counts::CountRecord;
use qdc_core::fitkit::{
    fit_dip_position_vs_phi, fit_hom_dip, fit_noise_params, HomDipModel, NoiseFitConfig,
    NOISE_PARAM_NAMES,
};
use qdc_core::grid::{GridSpec, SurfaceGrid};
use qdc_core::optics::NoiseModel;
use qdc_core::spacetime::{check_locality, Ledger, TwoLabTimeline};
use serde::Serialize;

use crate::config::{parse_grid, parse_noise, SweepConfig, SweepConfigFile};
use crate::error::{CliError, CliResult};
use crate::io::counts_csv::{read_counts, write_counts};
use crate::io::fit_json::FitReport;
use crate::io::hom_csv::{read_hom_points, write_curve, HomPoint};
use crate::io::ledger_json::{read_ledger, report_to_json};
use crate::io::surface_csv::write_surface;
use crate::io::Sink;
use crate::surface::compute_surface;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "QDC_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "qdc",
    version,
    about = "Delayed-choice interferometer simulator and analysis tools"
)]
pub struct Cli {
    /// Base seed for Monte Carlo sampling.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    /// Output file. Defaults to a file in $QDC_OUTPUT_DIR, else stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Directory used when --output is absent.
    #[arg(long, global = true, env = OUTPUT_DIR_ENV, hide_env_values = true)]
    pub output_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate P_C and P_Q over a (phi, alpha, delta) grid.
    Surface(SurfaceArgs),
    /// Fit the source and interferometer fidelities to a counts CSV.
    Fit(FitArgs),
    /// Check space-like separation between two groups of events.
    Locality(LocalityArgs),
    /// Fit Gaussian dips to a coincidence scan.
    Hom(HomArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// 12 phi x 9 alpha at delta = 0.
    Alpha,
    /// 12 phi x 9 delta at alpha = pi/4.
    Delta,
    /// 12 phi x 9 alpha x 9 delta.
    Full,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// JSON sweep configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Grid preset; --phi, --alpha and --delta override single axes.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Radians: 'a,b,c' or 'start:stop:count'. 'pi' forms such as 3pi/4 are accepted.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Fidelities 'f1,f2,f3'.
    #[arg(long, conflicts_with = "paper_defaults")]
    pub noise: Option<String>,
    /// Use the measured fidelities (0.98, 0.90, 0.61).
    #[arg(long)]
    pub paper_defaults: bool,
    /// Sampled trials per point; 0 evaluates the closed form only.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Also write the sampled counts to this CSV.
    #[arg(long, requires = "trials")]
    pub counts: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Counts CSV with header phi,alpha,delta,s,c,a,bit,count.
    pub input: PathBuf,
    /// 'joint', or 'frozen:f1=1,f2=1' to hold the named fidelities fixed.
    #[arg(long, default_value = "joint")]
    pub mode: String,
}

#[derive(Debug, Args)]
pub struct LocalityArgs {
    /// Event ledger JSON: [{"label", "x_m", "y_m", "z_m", "t_ns"}, ...].
    #[arg(long, conflicts_with = "paper_defaults")]
    pub ledger: Option<PathBuf>,
    /// Use the two-lab layout of the experiment.
    #[arg(long)]
    pub paper_defaults: bool,
    /// Comma-separated labels; defaults to the interference event(s).
    #[arg(long, value_delimiter = ',')]
    pub group_a: Vec<String>,
    /// Comma-separated labels; defaults to F,R,D.
    #[arg(long, value_delimiter = ',')]
    pub group_b: Vec<String>,
    /// Lab separation in metres for the default layout.
    #[arg(long, requires = "paper_defaults")]
    pub lab2_distance: Option<f64>,
    /// Bracket the interferometer passage with I_start and I_end.
    #[arg(long, requires = "paper_defaults")]
    pub window: bool,
}

#[derive(Debug, Args)]
pub struct HomArgs {
    /// Scan CSV with columns position_mm,counts and optionally phi.
    pub input: PathBuf,
    /// Write the fitted model curve to this CSV.
    #[arg(long)]
    pub curve: Option<PathBuf>,
}

/// Result of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    /// The analysis finished but flagged its result (non-convergence, a
    /// time-like pair).
    Flagged,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Flagged => 2,
        }
    }

    fn from_ok(ok: bool) -> Self {
        if ok {
            Status::Success
        } else {
            Status::Flagged
        }
    }
}

impl Cli {
    fn sink(&self, configured: Option<&Path>, default_name: &str) -> Sink {
        if let Some(p) = self.output.as_deref().or(configured) {
            return Sink::File(p.to_path_buf());
        }
        match &self.output_dir {
            Some(dir) => Sink::File(dir.join(default_name)),
            None => Sink::Stdout,
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<Status> {
    match &cli.command {
        Command::Surface(args) => cmd_surface(cli, args),
        Command::Fit(args) => cmd_fit(cli, args),
        Command::Locality(args) => cmd_locality(cli, args),
        Command::Hom(args) => cmd_hom(cli, args),
    }
}

fn write_json<T: Serialize>(sink: &Sink, value: &T) -> CliResult<()> {
    let mut w = sink.open()?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| sink.err(e.into()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| sink.err(e))
}

fn csv_failure(sink: &Sink, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => sink.err(io),
        other => CliError::usage(format!("{}: {other:?}", sink.describe())),
    }
}

/// Merges defaults, the config file and flags, in increasing priority.
pub fn resolve_sweep(cli: &Cli, args: &SurfaceArgs) -> CliResult<SweepConfig> {
    let file = match &args.config {
        Some(p) => SweepConfigFile::load(p)?,
        None => SweepConfigFile::default(),
    };
    let mut grid = match args.preset {
        None | Some(Preset::Alpha) => SurfaceGrid::alpha_sweep(),
        Some(Preset::Delta) => SurfaceGrid::delta_sweep(),
        Some(Preset::Full) => SurfaceGrid::full(),
    };
    let axis = |flag: &Option<String>, from_file: &Option<crate::config::GridJson>| {
        flag.as_deref()
            .map(parse_grid)
            .transpose()
            .map(|g| g.or_else(|| from_file.clone().map(GridSpec::from)))
    };
    if let Some(g) = axis(&args.phi, &file.phi_grid)? {
        grid.phi = g;
    }
    if let Some(g) = axis(&args.alpha, &file.alpha_grid)? {
        grid.alpha = g;
    }
    if let Some(g) = axis(&args.delta, &file.delta_grid)? {
        grid.delta = g;
    }
    let noise = if args.paper_defaults {
        NoiseModel::MEASURED
    } else if let Some(n) = &args.noise {
        parse_noise(n)?
    } else if let Some(f) = file.noise {
        NoiseModel::from_array(f)?
    } else {
        NoiseModel::IDEAL
    };
    let config = SweepConfig {
        grid,
        noise,
        trials: args.trials.or(file.trials).unwrap_or(0),
        seed: cli.seed.or(file.seed).unwrap_or(0),
        output_path: file.output_path,
    };
    config.validate()?;
    Ok(config)
}

fn cmd_surface(cli: &Cli, args: &SurfaceArgs) -> CliResult<Status> {
    let config = resolve_sweep(cli, args)?;
    let surface = compute_surface(&config, cli.jobs)?;
    let sampled = config.trials > 0;

    let sink = cli.sink(config.output_path.as_deref(), "surface.csv");
    let w = sink.open()?;
    write_surface(w, &surface.rows, sampled).map_err(|e| csv_failure(&sink, e))?;

    if let Some(path) = &args.counts {
        let sink = Sink::File(path.clone());
        write_counts(sink.open()?, &surface.counts).map_err(|e| csv_failure(&sink, e))?;
    }
    eprintln!(
        "surface: {} rows, {} with undefined P_Q, written to {}",
        surface.rows.len(),
        surface.degenerate_rows(),
        sink.describe()
    );
    Ok(Status::Success)
}

/// Parses `joint` or `frozen:name=value,...`.
pub fn parse_fit_mode(mode: &str) -> CliResult<NoiseFitConfig> {
    let mode = mode.trim();
    if mode == "joint" {
        return Ok(NoiseFitConfig::joint());
    }
    let Some(list) = mode.strip_prefix("frozen:") else {
        return Err(CliError::usage(format!(
            "unknown fit mode '{mode}'; use 'joint' or 'frozen:f1=1,f2=1'"
        )));
    };
    let mut cfg = NoiseFitConfig::joint();
    for item in list.split(',') {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("'{item}': expected name=value")))?;
        let index = NOISE_PARAM_NAMES
            .iter()
            .position(|n| *n == name.trim())
            .ok_or_else(|| CliError::usage(format!("unknown parameter '{name}'")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("'{value}' is not a number")))?;
        if cfg.frozen[index].is_some() {
            return Err(CliError::usage(format!("parameter '{name}' frozen twice")));
        }
        cfg = cfg.freeze(index, value);
    }
    Ok(cfg)
}

fn cmd_fit(cli: &Cli, args: &FitArgs) -> CliResult<Status> {
    let config = parse_fit_mode(&args.mode)?;
    let records: Vec<CountRecord> = read_counts(&args.input)?;
    let tables: Vec<_> = records.iter().map(CountRecord::to_bins).collect();
    let fit = fit_noise_params(&tables, &config)?;
    write_json(&cli.sink(None, "fit.json"), &FitReport::from(&fit))?;
    if !fit.converged {
        eprintln!("fit: solver did not converge");
    }
    Ok(Status::from_ok(fit.converged))
}

fn cmd_locality(cli: &Cli, args: &LocalityArgs) -> CliResult<Status> {
    let ledger: Ledger = match (&args.ledger, args.paper_defaults) {
        (Some(path), _) => read_ledger(path)?,
        (None, true) => {
            let mut layout = TwoLabTimeline {
                interference_window: args.window,
                ..TwoLabTimeline::default()
            };
            if let Some(d) = args.lab2_distance {
                layout.lab2_distance_m = d;
            }
            layout.build()?
        }
        (None, false) => {
            return Err(CliError::usage("give --ledger <file> or --paper-defaults"));
        }
    };
    let group_a: Vec<&str> = if args.group_a.is_empty() {
        if args.window {
            vec!["I_start", "I_end"]
        } else {
            vec!["I"]
        }
    } else {
        args.group_a.iter().map(|s| s.trim()).collect()
    };
    let group_b: Vec<&str> = if args.group_b.is_empty() {
        vec!["F", "R", "D"]
    } else {
        args.group_b.iter().map(|s| s.trim()).collect()
    };
    let report = check_locality(&ledger, &group_a, &group_b)?;
    println!("{report}");
    if cli.output.is_some() || cli.output_dir.is_some() {
        write_json(
            &cli.sink(None, "locality.json"),
            &report_to_json(&report, &ledger),
        )?;
    }
    Ok(Status::from_ok(report.pass))
}

#[derive(Serialize)]
struct DipReport {
    phi: f64,
    fit: FitReport,
}

#[derive(Serialize)]
struct DipSeriesReport {
    dips: Vec<DipReport>,
    center_vs_phi: FitReport,
}

/// Points sampled along the model curve for each dip.
const CURVE_POINTS: usize = 201;

fn curve_rows(
    phi: Option<f64>,
    points: &[HomPoint],
    model: &HomDipModel,
) -> Vec<(Option<f64>, f64, f64)> {
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.position_mm), hi.max(p.position_mm))
        });
    (0..CURVE_POINTS)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (CURVE_POINTS - 1) as f64;
            (phi, x, model.value(x))
        })
        .collect()
}

fn fit_dip(points: &[HomPoint]) -> CliResult<qdc_core::fitkit::FitResult> {
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.position_mm, p.counts)).collect();
    Ok(fit_hom_dip(&xy)?)
}

fn cmd_hom(cli: &Cli, args: &HomArgs) -> CliResult<Status> {
    let points = read_hom_points(&args.input)?;
    if points.len() < 5 {
        return Err(CliError::usage(format!(
            "{}: a dip fit needs at least 5 points, found {}",
            args.input.display(),
            points.len()
        )));
    }
    let sink = cli.sink(None, "hom.json");
    let mut curve = Vec::new();

    let status = if points.iter().all(|p| p.phi.is_none()) {
        let fit = fit_dip(&points)?;
        curve.extend(curve_rows(None, &points, &HomDipModel::from_fit(&fit)));
        write_json(&sink, &FitReport::from(&fit))?;
        Status::from_ok(fit.converged)
    } else {
        let mut by_phi: BTreeMap<u64, (f64, Vec<HomPoint>)> = BTreeMap::new();
        for p in &points {
            let phi = p.phi.ok_or_else(|| {
                CliError::usage(format!(
                    "{}: phi is missing on some rows",
                    args.input.display()
                ))
            })?;
            // Order keys numerically: flip the sign bit so positive
            // values sort after negative ones.
            let bits = phi.to_bits();
            let key = if phi.is_sign_negative() {
                !bits
            } else {
                bits | 1 << 63
            };
            by_phi
                .entry(key)
                .or_insert_with(|| (phi, Vec::new()))
                .1
                .push(*p);
        }
        let mut dips = Vec::new();
        let mut line_points = Vec::new();
        let mut all_converged = true;
        for (phi, group) in by_phi.values() {
            let fit = fit_dip(group)?;
            let model = HomDipModel::from_fit(&fit);
            curve.extend(curve_rows(Some(*phi), group, &model));
            let sigma = fit
                .std_error("center")
                .filter(|s| s.is_finite() && *s > 0.0)
                .unwrap_or(1.0);
            line_points.push((*phi, model.center, sigma));
            all_converged &= fit.converged;
            dips.push(DipReport {
                phi: *phi,
                fit: FitReport::from(&fit),
            });
        }
        let line = fit_dip_position_vs_phi(&line_points)?;
        write_json(
            &sink,
            &DipSeriesReport {
                dips,
                center_vs_phi: FitReport::from(&line),
            },
        )?;
        Status::from_ok(all_converged && line.converged)
    };

    if let Some(path) = &args.curve {
        let sink = Sink::File(path.clone());
        write_curve(sink.open()?, &curve).map_err(|e| csv_failure(&sink, e))?;
    }
    Ok(status)
}
