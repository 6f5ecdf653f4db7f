use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rabi_core::jc_analytic::{numeric_doublet, NumericDoublet};
use rabi_core::spectra::{detect_avoided_crossings_with, sweep_with};
use rabi_core::{
    classify_regimes, degenerate_perturbation, sweep_2d, Axis, DetectOptions, Error, RegimeOptions,
    SweepOptions, SweepResult, Truncation,
};
use serde::Serialize;

use crate::config::{
    AxisName, CrossingArgs, FileConfig, Format, GridArgs, GridSpec, JcArgs, ModelArgs,
    ModelSettings, OutputArgs, RegimeArgs, TruncSpec,
};
use crate::error::{CliError, Result};
use crate::output::{emit, json, render_crossings, render_sweep, sweep_records, CrossingRecord};
use crate::presets::{preset, Figure, Preset};

/// Spectra and atom–field entanglement of the (asymmetric) quantum Rabi and
/// Jaynes–Cummings models. Energies are in units of the field frequency.
#[derive(Debug, Parser)]
#[command(name = "asymrabi", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies and entropies over a one- or two-dimensional grid.
    Sweep(SweepCmd),
    /// Gap minima (avoided crossings) of one level along a 1D sweep.
    Crossings(CrossingsCmd),
    /// Coupling-regime boundaries of the undriven Rabi model.
    Regimes(RegimesCmd),
    /// Degenerate perturbation theory of the driven JC doublet vs numerics.
    JcPerturb(JcCmd),
    /// Regenerate the data behind one figure.
    Reproduce(ReproduceCmd),
}

#[derive(Debug, Args)]
pub struct SweepCmd {
    /// Flat JSON file of defaults; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CrossingsCmd {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub crossing: CrossingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RegimesCmd {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub regime: RegimeArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct JcCmd {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub jc: JcArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReproduceCmd {
    #[arg(value_enum)]
    pub figure: Figure,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(c) => {
            let file = FileConfig::load(c.config.as_deref())?;
            cmd_sweep(
                &c.model.or(&file.model),
                &c.grid.or(&file.grid),
                &c.output.or(&file.output),
            )
        }
        Command::Crossings(c) => {
            let file = FileConfig::load(c.config.as_deref())?;
            cmd_crossings(
                &c.model.or(&file.model),
                &c.grid.or(&file.grid),
                &c.crossing.or(&file.crossing),
                &c.output.or(&file.output),
            )
        }
        Command::Regimes(c) => {
            let file = FileConfig::load(c.config.as_deref())?;
            cmd_regimes(
                &c.model.or(&file.model),
                &c.regime.or(&file.regime),
                &c.output.or(&file.output),
            )
        }
        Command::JcPerturb(c) => {
            let file = FileConfig::load(c.config.as_deref())?;
            cmd_jc_perturb(&c.jc.or(&file.jc), &c.output.or(&file.output))
        }
        Command::Reproduce(c) => cmd_reproduce(c.figure, &c.output),
    }
}

fn axes(grid: &GridArgs) -> Result<(Axis, Option<Axis>)> {
    let spec = grid
        .grid
        .ok_or_else(|| CliError::config("--grid min:max:count is required"))?;
    let first = spec.axis(grid.axis.unwrap_or(AxisName::G))?;
    let second = match (grid.axis2, grid.grid2) {
        (Some(name), Some(spec)) => Some(spec.axis(name)?),
        (None, None) => None,
        _ => {
            return Err(CliError::config(
                "--axis2 and --grid2 must be given together",
            ))
        }
    };
    Ok((first, second))
}

fn run_sweep(
    s: &ModelSettings,
    first: Axis,
    second: Option<Axis>,
    jobs: Option<usize>,
) -> Result<SweepResult> {
    let opts = SweepOptions {
        jobs,
        ..SweepOptions::default()
    };
    Ok(match second {
        None => sweep_with(s.kind, s.params, first, s.n_levels, s.truncation, &opts)?,
        Some(inner) => sweep_2d(
            s.kind,
            s.params,
            first,
            inner,
            s.n_levels,
            s.truncation,
            &opts,
        )?,
    })
}

fn write_sweep(result: &SweepResult, output: &OutputArgs) -> Result<()> {
    let text = render_sweep(&sweep_records(result), !result.is_1d(), output.format())?;
    emit(output.out.as_deref(), &text)
}

pub fn cmd_sweep(model: &ModelArgs, grid: &GridArgs, output: &OutputArgs) -> Result<()> {
    let settings = model.resolve()?;
    let (first, second) = axes(grid)?;
    let result = run_sweep(&settings, first, second, output.jobs()?)?;
    write_sweep(&result, output)
}

pub fn cmd_crossings(
    model: &ModelArgs,
    grid: &GridArgs,
    crossing: &CrossingArgs,
    output: &OutputArgs,
) -> Result<()> {
    let level = crossing
        .level
        .ok_or_else(|| CliError::config("--level is required"))?;
    let threshold = crossing.threshold.unwrap_or(0.05);
    if !(threshold > 0.0) || !threshold.is_finite() {
        return Err(CliError::config(format!(
            "--threshold must be positive (got {threshold})"
        )));
    }
    let mut opts = DetectOptions::new(threshold);
    if crossing.one_sided == Some(true) {
        opts = opts.one_sided();
    }
    let mut settings = model.resolve()?;
    let (axis, second) = axes(grid)?;
    if second.is_some() {
        return Err(CliError::config("crossings needs a one-dimensional sweep"));
    }
    if level < 1 {
        return Err(CliError::config("--level must be at least 1"));
    }
    settings.n_levels = settings.n_levels.max(level + 1);
    let result = run_sweep(&settings, axis, None, output.jobs()?)?;
    let events = detect_avoided_crossings_with(&result, level, &opts)?;
    for e in &events {
        if let rabi_core::spectra::Refinement::Fallback(why) = &e.refinement {
            eprintln!(
                "warning: levels ({}, {}) near {}: grid minimum used ({why})",
                e.level_low, e.level_high, e.locus
            );
        }
    }
    let rows: Vec<CrossingRecord> = events.iter().map(CrossingRecord::from).collect();
    emit(
        output.out.as_deref(),
        &render_crossings(&rows, output.format())?,
    )
}

fn require_json(output: &OutputArgs, what: &str) -> Result<()> {
    if output.format == Some(Format::Csv) {
        return Err(CliError::config(format!("{what} writes JSON only")));
    }
    Ok(())
}

pub fn cmd_regimes(model: &ModelArgs, regime: &RegimeArgs, output: &OutputArgs) -> Result<()> {
    require_json(output, "regimes")?;
    let settings = model.resolve()?;
    let mut opts = RegimeOptions::default();
    match settings.truncation {
        Truncation::Fixed(n) => opts.n_trunc = n,
        Truncation::Auto { .. } => return Err(CliError::config("regimes needs a fixed --trunc")),
    }
    let g_max = regime.g_max.unwrap_or(4.0);
    let b = classify_regimes(settings.params, g_max, settings.n_levels, &opts)?;
    emit(output.out.as_deref(), &json(&b)?)
}

#[derive(Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum JcReport {
    Degenerate {
        n: usize,
        delta: f64,
        epsilon: f64,
        g_star: f64,
        e0: f64,
        e1_plus: f64,
        e1_minus: f64,
        splitting: f64,
        entropy_perturbative: f64,
        entropy_perturbative_minus: f64,
        /// `ε / g*` close to the validity limit.
        marginal: bool,
        numeric: NumericDoublet,
        numeric_gap: f64,
    },
    NoDegeneracy {
        n: usize,
        delta: f64,
        epsilon: f64,
        reason: String,
    },
}

fn jc_report(n: usize, delta: f64, epsilon: f64, n_trunc: usize) -> Result<JcReport> {
    let pert = match degenerate_perturbation(n, delta, epsilon) {
        Ok(p) => p,
        Err(e @ Error::NoDegeneracy { .. }) => {
            return Ok(JcReport::NoDegeneracy {
                n,
                delta,
                epsilon,
                reason: e.to_string(),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let numeric = numeric_doublet(n, delta, epsilon, n_trunc)?;
    Ok(JcReport::Degenerate {
        n,
        delta,
        epsilon,
        g_star: pert.g_star,
        e0: pert.e0,
        e1_plus: pert.e1_plus,
        e1_minus: pert.e1_minus,
        splitting: pert.splitting(),
        entropy_perturbative: pert.entropy,
        entropy_perturbative_minus: pert.entropy_minus,
        marginal: pert.marginal,
        numeric_gap: numeric.gap(),
        numeric,
    })
}

pub fn cmd_jc_perturb(jc: &JcArgs, output: &OutputArgs) -> Result<()> {
    require_json(output, "jc-perturb")?;
    let n_trunc = match jc.trunc.unwrap_or(TruncSpec::Fixed(60)) {
        TruncSpec::Fixed(n) => n,
        TruncSpec::Auto => return Err(CliError::config("jc-perturb needs a fixed --trunc")),
    };
    let report = jc_report(
        jc.n.unwrap_or(1),
        jc.delta.unwrap_or(0.5),
        jc.epsilon.unwrap_or(0.05),
        n_trunc,
    )?;
    emit(output.out.as_deref(), &json(&report)?)
}

pub fn cmd_reproduce(fig: Figure, output: &OutputArgs) -> Result<()> {
    match preset(fig) {
        Preset::Sweep {
            settings,
            axis,
            axis2,
        } => {
            let to_axis = |(name, spec): (AxisName, GridSpec)| spec.axis(name);
            let second = axis2.map(to_axis).transpose()?;
            let result = run_sweep(&settings, to_axis(axis)?, second, output.jobs()?)?;
            write_sweep(&result, output)
        }
        Preset::JcPerturb {
            n,
            delta,
            epsilon,
            n_trunc,
        } => {
            require_json(output, "fig7")?;
            emit(
                output.out.as_deref(),
                &json(&jc_report(n, delta, epsilon, n_trunc)?)?,
            )
        }
    }
}
