//! Command-line front end for the `qfisher` experiments.
//!
//! Each subcommand prints a summary (JSON with `--json`) and, given `--out`,
//! writes plot-ready CSV files, a JSON summary and a `manifest.json` holding
//! the exact argument vector of the run.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qfisher::interferometer::{
    fisher_phase_at_zero, linearized_phase_error, moments, outcome_distribution, phase_model, resource_scaling,
    FockInput, LinearizedError,
};
use qfisher::montecarlo::{run_accumulation_with, run_trials, AccumulationConfig, Estimator, TrialConfig, TrialReport};
use qfisher::slit::{farfield_model_on, uncertainty_chain, FarFieldGrid, SlitGeometry};
use qfisher::stats::models::bernoulli;

pub const SLIT_SCHEMA: &str = "qfisher/slit-summary/v1";
pub const MZ_SCHEMA: &str = "qfisher/mz-summary/v1";
pub const TRIAL_SCHEMA: &str = "qfisher/trial-report/v1";
pub const ACCUMULATION_SCHEMA: &str = "qfisher/accumulation-summary/v1";
pub const MANIFEST_SCHEMA: &str = "qfisher/run-manifest/v1";

#[derive(Debug, Parser)]
#[command(name = "qfisher", version, about = "Fisher-information experiments: slit diffraction and Mach-Zehnder phase estimation")]
pub struct Cli {
    /// Seed for every random draw of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for CSV, JSON and manifest files (created if missing).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print the summary as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Reduced Planck constant (natural units by default).
    #[arg(long, global = true, default_value_t = 1.0)]
    pub hbar: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Single-slit far field, Fisher information and the uncertainty chain.
    Slit(SlitArgs),
    /// Mach-Zehnder outcome statistics for a Fock input.
    Mz(MzArgs),
    /// Repeated estimation experiments compared with the Cramér-Rao bound.
    Montecarlo(MonteCarloArgs),
    /// Posterior accumulation over repeated balanced shots.
    Accumulate(AccumulateArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SlitArgs {
    /// Slit width.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// de Broglie wavelength.
    #[arg(long, default_value_t = 0.01)]
    pub lambda: f64,
    /// Slit-to-screen distance.
    #[arg(long, default_value_t = 100.0)]
    pub d: f64,
    /// Incident transverse wavenumber.
    #[arg(long = "k-x", default_value_t = 0.0, allow_negative_numbers = true)]
    pub k_x: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct MzArgs {
    #[arg(long)]
    pub n1: u32,
    #[arg(long)]
    pub n2: u32,
    /// Phase difference between the arms.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelSelector {
    Slit,
    Mz,
    Bernoulli,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorArg {
    Mle,
    BayesMean,
}

#[derive(Debug, Args, Serialize)]
pub struct MonteCarloArgs {
    #[arg(long, value_enum)]
    pub model: ModelSelector,
    /// True parameter: ν for slit, φ for mz, the first-outcome probability for bernoulli.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: f64,
    /// Particles per trial.
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Mle)]
    pub estimator: EstimatorArg,
    /// Input port counts for the mz model.
    #[arg(long, default_value_t = 5)]
    pub n1: u32,
    #[arg(long, default_value_t = 5)]
    pub n2: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct AccumulateArgs {
    /// Particles per port (`n1 = n2 = j`).
    #[arg(long, default_value_t = 50)]
    pub j: u32,
    #[arg(long, default_value_t = 4)]
    pub repeats: u32,
    #[arg(long = "phi-true", default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi_true: f64,
    /// Full width of the phase window, centred on 0.
    #[arg(long, default_value_t = PI)]
    pub window: f64,
    #[arg(long, default_value_t = qfisher::interferometer::DEFAULT_POSTERIOR_POINTS)]
    pub points: usize,
    /// Condition on every shot giving k = 0 instead of sampling.
    #[arg(long = "postselect-zero")]
    pub postselect_zero: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] qfisher::Error),
    #[error(transparent)]
    Parse(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use qfisher::Error as E;
        match self {
            Self::Parse(e) => u8::try_from(e.exit_code()).unwrap_or(2),
            Self::Usage(_) => 2,
            Self::Model(e) => match e {
                E::SizeLimit { .. } => 4,
                E::TooManyFailures { .. } => 5,
                E::ZeroPosterior { .. } => 6,
                E::NonFiniteLikelihood { .. }
                | E::DegenerateModel { .. }
                | E::FlatLikelihood { .. }
                | E::PhaseUnwrapFailure { .. } => 3,
                E::OutOfDomain { .. }
                | E::DataMismatch { .. }
                | E::InvalidData
                | E::InvalidGrid { .. }
                | E::InvalidModel(_)
                | E::InvalidGeometry(_)
                | E::InvalidInput(_)
                | E::InvalidConfig(_) => 2,
            },
            Self::Io(_) | Self::Csv(_) | Self::Json(_) => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Serialize)]
pub struct HeuristicWidth {
    pub label: &'static str,
    /// Spread of `k_x` read off the first minima, `2π/a`.
    pub delta_k_x: f64,
    /// Half the slit width.
    pub delta_x: f64,
    /// `ħ Δk_x Δx = πħ`.
    pub product: f64,
}

#[derive(Debug, Serialize)]
pub struct SlitSummary {
    pub schema: &'static str,
    pub geometry: SlitGeometry,
    pub nu: f64,
    pub fisher: f64,
    pub position_variance: f64,
    pub fisher_momentum_bound: f64,
    pub heisenberg_bound: f64,
    pub product: f64,
    pub naive_width_product: HeuristicWidth,
}

#[derive(Debug, Serialize)]
pub struct MzSummary {
    pub schema: &'static str,
    pub n1: u32,
    pub n2: u32,
    pub j: f64,
    pub m: f64,
    pub phi: f64,
    #[serde(rename = "F0")]
    pub f0: f64,
    #[serde(rename = "F0_finite_difference")]
    pub f0_finite_difference: f64,
    pub delta_phi_linearized: LinearizedError,
    pub crb_phase: f64,
    #[serde(rename = "mean_J3")]
    pub mean_j3: f64,
    #[serde(rename = "var_J3")]
    pub var_j3: f64,
}

#[derive(Debug, Serialize)]
pub struct TrialSummary {
    pub schema: &'static str,
    #[serde(flatten)]
    pub report: TrialReport,
}

#[derive(Debug, Serialize)]
pub struct AccumulationSummary {
    pub schema: &'static str,
    pub j: u32,
    pub repeats: u32,
    pub phi_true: f64,
    pub window: f64,
    pub postselect_zero: bool,
    pub seed: u64,
    pub outcomes: Vec<f64>,
    pub variance: f64,
    /// Posterior variance before any shot and after each one.
    pub variances: Vec<f64>,
    /// `1/(n j²)`; absent without shots.
    pub prediction_1_over_njj: Option<f64>,
    /// `4n/N_tot²`; absent without shots.
    pub prediction_quant_res: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub schema: &'static str,
    pub tool_version: &'static str,
    /// Arguments after the program name; replaying them reproduces the outputs.
    pub argv: &'a [String],
    pub subcommand: &'a Command,
    pub seed: u64,
    pub hbar: f64,
    pub outputs: Vec<String>,
}

/// Parses `argv` (program name first) and runs it, writing the summary to `stdout`.
pub fn run_from_args(argv: &[String], stdout: &mut impl Write) -> CliResult<()> {
    let cli = Cli::try_parse_from(argv)?;
    run(&cli, &argv[1..], stdout)
}

pub fn run(cli: &Cli, argv: &[String], stdout: &mut impl Write) -> CliResult<()> {
    if !(cli.hbar > 0.0 && cli.hbar.is_finite()) {
        return Err(CliError::Usage(format!("--hbar must be positive, got {}", cli.hbar)));
    }
    let out = cli.out.as_deref();
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
    }
    let outputs = match &cli.command {
        Command::Slit(args) => cmd_slit(cli, args, out, stdout)?,
        Command::Mz(args) => cmd_mz(cli, args, out, stdout)?,
        Command::Montecarlo(args) => cmd_montecarlo(cli, args, out, stdout)?,
        Command::Accumulate(args) => cmd_accumulate(cli, args, out, stdout)?,
    };
    if let Some(dir) = out {
        let manifest = RunManifest {
            schema: MANIFEST_SCHEMA,
            tool_version: env!("CARGO_PKG_VERSION"),
            argv,
            subcommand: &cli.command,
            seed: cli.seed,
            hbar: cli.hbar,
            outputs,
        };
        write_json(&dir.join("manifest.json"), &manifest)?;
    }
    Ok(())
}

fn write_json(path: &Path, value: &impl Serialize) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn write_csv<R: Serialize>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = R>) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the summary to stdout and, with an output directory, to `name`.
fn emit(
    cli: &Cli,
    out: Option<&Path>,
    name: &str,
    summary: &impl Serialize,
    text: &str,
    outputs: &mut Vec<String>,
    stdout: &mut impl Write,
) -> CliResult<()> {
    if cli.json {
        writeln!(stdout, "{}", serde_json::to_string_pretty(summary)?)?;
    } else {
        stdout.write_all(text.as_bytes())?;
    }
    if let Some(dir) = out {
        write_json(&dir.join(name), summary)?;
        outputs.push(name.to_string());
    }
    Ok(())
}

fn cmd_slit(cli: &Cli, args: &SlitArgs, out: Option<&Path>, stdout: &mut impl Write) -> CliResult<Vec<String>> {
    let geometry = SlitGeometry::new(args.a, args.lambda, args.d, args.k_x)?.with_hbar(cli.hbar)?;
    let config = FarFieldGrid::default();
    let model = farfield_model_on(&geometry, &config)?;
    let chain = uncertainty_chain(&geometry)?;
    let delta_k_x = 2.0 * PI / geometry.a;
    let delta_x = geometry.a / 2.0;
    let summary = SlitSummary {
        schema: SLIT_SCHEMA,
        geometry,
        nu: geometry.nu(),
        fisher: chain.fisher_mu,
        position_variance: chain.position_variance,
        fisher_momentum_bound: chain.momentum_bound,
        heisenberg_bound: chain.heisenberg_bound,
        product: chain.product,
        naive_width_product: HeuristicWidth {
            label: "heuristic",
            delta_k_x,
            delta_x,
            product: geometry.hbar * delta_k_x * delta_x,
        },
    };

    let mut outputs = Vec::new();
    if let Some(dir) = out {
        let grid = model.grid().expect("far-field model is gridded").clone();
        let values = model.values(geometry.nu());
        write_csv(&dir.join("slit_density.csv"), &["mu", "p"], grid.points().zip(values))?;
        outputs.push("slit_density.csv".to_string());
    }
    let text = format!(
        "fisher (per particle, about nu)  {:.9}\n\
         position variance               {:.9}\n\
         fisher momentum bound           {:.9}\n\
         heisenberg bound                {:.9}\n\
         product (bound x position var)  {:.9}\n\
         heuristic width product         {:.9}  (first-minimum widths, not a bound)\n",
        summary.fisher,
        summary.position_variance,
        summary.fisher_momentum_bound,
        summary.heisenberg_bound,
        summary.product,
        summary.naive_width_product.product,
    );
    emit(cli, out, "slit_summary.json", &summary, &text, &mut outputs, stdout)?;
    Ok(outputs)
}

fn cmd_mz(cli: &Cli, args: &MzArgs, out: Option<&Path>, stdout: &mut impl Write) -> CliResult<Vec<String>> {
    let input = FockInput::new(args.n1, args.n2)?;
    let p = outcome_distribution(&input, args.phi)?;
    let f0 = fisher_phase_at_zero(&input)?;
    let mo = moments(&input, args.phi);
    let summary = MzSummary {
        schema: MZ_SCHEMA,
        n1: args.n1,
        n2: args.n2,
        j: input.j(),
        m: input.m(),
        phi: args.phi,
        f0: f0.closed_form,
        f0_finite_difference: f0.finite_difference,
        delta_phi_linearized: linearized_phase_error(&input, args.phi),
        crb_phase: f0.crb(),
        mean_j3: mo.mean_j3,
        var_j3: mo.variance(),
    };
    let mut outputs = Vec::new();
    if let Some(dir) = out {
        write_csv(&dir.join("mz_distribution.csv"), &["k", "p"], input.outcomes().into_iter().zip(p))?;
        outputs.push("mz_distribution.csv".to_string());
    }
    let text = format!(
        "j = {}, m = {}, phi = {}\n\
         F0                      {}\n\
         crb (phase variance)    {:.9e}\n\
         linearized delta phi    {}\n\
         <J3>, var J3            {:.9}, {:.9}\n",
        summary.j,
        summary.m,
        summary.phi,
        summary.f0,
        summary.crb_phase,
        summary.delta_phi_linearized,
        summary.mean_j3,
        summary.var_j3,
    );
    emit(cli, out, "mz_summary.json", &summary, &text, &mut outputs, stdout)?;
    Ok(outputs)
}

fn cmd_montecarlo(
    cli: &Cli,
    args: &MonteCarloArgs,
    out: Option<&Path>,
    stdout: &mut impl Write,
) -> CliResult<Vec<String>> {
    let model = match args.model {
        ModelSelector::Slit => {
            let geometry = SlitGeometry {
                k_x: 2.0 * args.theta,
                ..SlitGeometry::default()
            };
            farfield_model_on(&geometry, &FarFieldGrid::default())?
        }
        ModelSelector::Mz => phase_model(&FockInput::new(args.n1, args.n2)?)?,
        ModelSelector::Bernoulli => bernoulli(),
    };
    let estimator = match args.estimator {
        EstimatorArg::Mle => Estimator::Mle,
        EstimatorArg::BayesMean => Estimator::BayesMean,
    };
    let config = TrialConfig::new(model, args.theta, args.n, args.trials, cli.seed).with_estimator(estimator);
    let report = run_trials(&config)?;
    let text = format!(
        "{} theta = {}: mean {:.6e}, variance {:.6e}, crb {:.6e}, efficiency {:.4} ± {:.4}, failures {}\n",
        report.model,
        report.theta_true,
        report.empirical_mean,
        report.empirical_variance,
        report.crb,
        report.efficiency,
        report.efficiency_standard_error,
        report.failures
    );
    let summary = TrialSummary {
        schema: TRIAL_SCHEMA,
        report,
    };
    let mut outputs = Vec::new();
    emit(cli, out, "trial_report.json", &summary, &text, &mut outputs, stdout)?;
    Ok(outputs)
}

fn cmd_accumulate(
    cli: &Cli,
    args: &AccumulateArgs,
    out: Option<&Path>,
    stdout: &mut impl Write,
) -> CliResult<Vec<String>> {
    if !(args.window > 0.0 && args.window <= 2.0 * PI) {
        return Err(CliError::Usage(format!("--window must lie in (0, 2π], got {}", args.window)));
    }
    let config = AccumulationConfig {
        j: args.j,
        n_repeats: args.repeats,
        phi_true: args.phi_true,
        window: args.window / 2.0,
        points: args.points,
        postselect: args.postselect_zero,
        seed: cli.seed,
    };
    // shot 0 is the flat prior
    let mut rows: Vec<(usize, f64, f64)> = Vec::new();
    let mut record = |shot: usize, post: &qfisher::interferometer::Posterior| {
        if out.is_some() {
            rows.extend(post.grid().points().zip(post.density()).map(|(x, d)| (shot, x, *d)));
        }
    };
    record(0, &qfisher::interferometer::Posterior::new(config.window, config.points)?);
    let run = run_accumulation_with(&config, |i, p| record(i + 1, p))?;

    let j = f64::from(args.j);
    let n = f64::from(args.repeats);
    let summary = AccumulationSummary {
        schema: ACCUMULATION_SCHEMA,
        j: args.j,
        repeats: args.repeats,
        phi_true: args.phi_true,
        window: args.window,
        postselect_zero: args.postselect_zero,
        seed: cli.seed,
        outcomes: run.outcomes().to_vec(),
        variance: run.variance,
        variances: run.variances.clone(),
        prediction_1_over_njj: (args.repeats > 0).then(|| 1.0 / (n * j * j)),
        prediction_quant_res: (args.repeats > 0).then(|| resource_scaling(j, args.repeats)),
    };
    let mut outputs = Vec::new();
    if let Some(dir) = out {
        write_csv(&dir.join("posterior.csv"), &["shot", "phi", "density"], rows)?;
        outputs.push("posterior.csv".to_string());
    }
    let text = format!(
        "j = {}, shots = {}, outcomes {:?}\nposterior variance {:.6e}{}\n",
        summary.j,
        summary.repeats,
        summary.outcomes,
        summary.variance,
        summary
            .prediction_1_over_njj
            .map(|p| format!(" (1/(n j^2) = {p:.6e})"))
            .unwrap_or_default()
    );
    emit(cli, out, "accumulation_summary.json", &summary, &text, &mut outputs, stdout)?;
    Ok(outputs)
}
