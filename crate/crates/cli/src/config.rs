//! Run configuration: a TOML file whose keys mirror the command-line flags,
//! with flags taking precedence over the file and the file over defaults.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use loctemp_core::criteria::{SearchConfig, DEFAULT_CAP};
use loctemp_core::{AccuracyParams, HarmonicParams, IsingParams, ModelParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Harmonic,
    Ising,
}

/// Every setting as it may appear in a config file or on the command line.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Chain model.
    #[arg(long, global = true)]
    pub model: Option<ModelKind>,
    /// Width factor of the energy window (> 1).
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Tolerated relative deviation, in (0, 1).
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Lowest grid temperature: T/Theta (harmonic), T/B (spins), or kelvin
    /// when --theta is given.
    #[arg(long, global = true)]
    pub tmin: Option<f64>,
    /// Highest grid temperature, same units as --tmin.
    #[arg(long, global = true)]
    pub tmax: Option<f64>,
    /// Number of log-spaced grid points (>= 2).
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Spin coupling J in units of the field.
    #[arg(long, global = true)]
    pub j: Option<f64>,
    /// Transverse field B.
    #[arg(long, global = true)]
    pub b: Option<f64>,
    /// Debye temperature in kelvin; makes grid temperatures kelvin.
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Largest group size tried before reporting "above_cap".
    #[arg(long, global = true)]
    pub ncap: Option<u64>,
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }

    /// `self` where set, `base` elsewhere.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            model: self.model.or(base.model),
            alpha: self.alpha.or(base.alpha),
            delta: self.delta.or(base.delta),
            tmin: self.tmin.or(base.tmin),
            tmax: self.tmax.or(base.tmax),
            points: self.points.or(base.points),
            j: self.j.or(base.j),
            b: self.b.or(base.b),
            theta: self.theta.or(base.theta),
            ncap: self.ncap.or(base.ncap),
            out: self.out.or(base.out),
        }
    }
}

pub const DEFAULT_ALPHA: f64 = 10.0;
pub const DEFAULT_DELTA: f64 = 0.01;
pub const DEFAULT_FIELD: f64 = 1.0;
pub const DEFAULT_COUPLING: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl TemperatureGrid {
    /// Log-spaced temperatures from `min` to `max` inclusive.
    pub fn values(&self) -> Vec<f64> {
        let (a, b) = (self.min.ln(), self.max.ln());
        (0..self.points)
            .map(|k| {
                if k == 0 {
                    self.min
                } else if k + 1 == self.points {
                    self.max
                } else {
                    (a + (b - a) * k as f64 / (self.points - 1) as f64).exp()
                }
            })
            .collect()
    }
}

/// Validated settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    pub field: f64,
    pub coupling: f64,
    /// Debye temperature in kelvin, when temperatures are given in kelvin.
    pub theta: Option<f64>,
    pub accuracy: AccuracyParams,
    pub grid: TemperatureGrid,
    pub ncap: u64,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(s: Settings) -> Result<Self> {
        let model = s.model.unwrap_or(ModelKind::Harmonic);
        let accuracy = AccuracyParams::new(
            s.alpha.unwrap_or(DEFAULT_ALPHA),
            s.delta.unwrap_or(DEFAULT_DELTA),
        )?;
        let field = s.b.unwrap_or(DEFAULT_FIELD);
        let coupling = s.j.unwrap_or(DEFAULT_COUPLING);
        if model == ModelKind::Ising {
            IsingParams::new(field, coupling).validate()?;
            if s.theta.is_some() {
                return Err(CliError::input(
                    "--theta applies to the harmonic model only",
                ));
            }
        }
        if let Some(t) = s.theta {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::input("the Debye temperature must be positive"));
            }
        }
        let default_span = match s.theta {
            Some(t) => (1e-4 * t, 1e4 * t),
            None => (1e-4, 1e4),
        };
        let grid = TemperatureGrid {
            min: s.tmin.unwrap_or(default_span.0),
            max: s.tmax.unwrap_or(default_span.1),
            points: s.points.unwrap_or(33),
        };
        if !(grid.min > 0.0 && grid.max.is_finite() && grid.min < grid.max) {
            return Err(CliError::input(
                "the temperature grid needs 0 < tmin < tmax",
            ));
        }
        if grid.points < 2 {
            return Err(CliError::input(
                "the temperature grid needs at least 2 points",
            ));
        }
        let ncap = s.ncap.unwrap_or(DEFAULT_CAP);
        if ncap == 0 {
            return Err(CliError::input("the size cap must be at least 1"));
        }
        Ok(Self {
            model,
            field,
            coupling,
            theta: s.theta,
            accuracy,
            grid,
            ncap,
            out: s.out,
        })
    }

    pub fn params(&self) -> ModelParams {
        match self.model {
            ModelKind::Harmonic => ModelParams::Harmonic(HarmonicParams::new(1.0)),
            ModelKind::Ising => ModelParams::Ising(IsingParams::new(self.field, self.coupling)),
        }
    }

    /// Grid temperature in units of the model's scale (Debye temperature or
    /// field).
    pub fn reduced_temperature(&self, t: f64) -> f64 {
        match self.theta {
            Some(theta) => t / theta,
            None => t,
        }
    }

    /// Inverse temperature in internal energy units for a reduced
    /// temperature.
    pub fn beta(&self, reduced: f64) -> f64 {
        1.0 / (reduced * energy_scale(&self.params()))
    }

    pub fn search(&self) -> SearchConfig {
        SearchConfig {
            cap: self.ncap,
            ..SearchConfig::default()
        }
    }
}

/// Energy that temperatures are measured against: `k_B Theta` for
/// oscillators, `B` for spins.
pub fn energy_scale(params: &ModelParams) -> f64 {
    match params {
        ModelParams::Harmonic(p) => p.debye_energy(),
        ModelParams::Ising(p) => p.field,
    }
}
