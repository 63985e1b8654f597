use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use loctemp::commands::{
    asymptotic, material_table, nmin_curve, render_asymptotic_csv, render_curve_csv,
    render_material_csv, verify, VerifyConfig,
};
use loctemp::config::{RunConfig, Settings};
use loctemp::error::{CliError, Result};
use loctemp::materials;
use loctemp::output::emit;

/// Minimal group size and length on which a chain in a global thermal state
/// still has a local temperature.
#[derive(Debug, Parser)]
#[command(name = "loctemp", version)]
struct Cli {
    /// TOML file with any of the global settings; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// n_min over the temperature grid (CSV).
    NminCurve,
    /// Closed-form high/low temperature estimate of n_min (CSV).
    Asymptotic {
        /// Temperature: T/Theta, or kelvin when --theta is given.
        #[arg(long)]
        t: f64,
    },
    /// Minimal lengths for a table of materials.
    Material {
        /// Materials CSV; the built-in table when absent.
        #[arg(long)]
        materials: Option<PathBuf>,
        /// Temperature in kelvin.
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Dense checks on a small spin ring (JSON report).
    Verify {
        /// Inverse temperature in units of 1/B.
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long, default_value_t = 12)]
        groups: usize,
        /// Spins per group.
        #[arg(long, default_value_t = 1)]
        size: usize,
    },
}

fn json<T: serde::Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::input(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Runs the command; the returned flag is set when some input rows were
/// rejected although output was produced.
fn run(cli: Cli) -> Result<bool> {
    let settings = match &cli.config {
        Some(path) => cli.settings.over(Settings::from_file(path)?),
        None => cli.settings,
    };
    let cfg = RunConfig::resolve(settings)?;
    let out = cfg.out.as_deref();
    match cli.command {
        Command::NminCurve => emit(out, &render_curve_csv(&nmin_curve(&cfg)?)?)?,
        Command::Asymptotic { t } => {
            let row = asymptotic(t, cfg.theta, cfg.accuracy.alpha, cfg.accuracy.delta)?;
            emit(out, &render_asymptotic_csv(&row)?)?
        }
        Command::Material {
            materials: path,
            t,
            format,
        } => {
            let text = match &path {
                Some(p) => std::fs::read_to_string(p).map_err(|source| CliError::Read {
                    path: p.clone(),
                    source,
                })?,
                None => materials::BUILTIN.to_string(),
            };
            let table = materials::parse(&text)?;
            let report = material_table(&table, t, cfg.accuracy, &cfg.search())?;
            for e in &report.errors {
                eprintln!("materials line {}: {}", e.line, e.message);
            }
            let bytes = match format {
                Format::Csv => render_material_csv(&report)?,
                Format::Json => json(&report)?,
            };
            emit(out, &bytes)?;
            return Ok(!report.errors.is_empty());
        }
        Command::Verify { beta, groups, size } => {
            let report = verify(&VerifyConfig {
                field: cfg.field,
                coupling: cfg.coupling,
                beta,
                groups,
                size,
            })?;
            emit(out, &json(&report)?)?
        }
    }
    Ok(false)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
