//! Run configuration: defaults per command, an optional TOML file, and flag
//! overrides, in increasing precedence.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use imbq::bounds::VerifierConfig;
use imbq::growth::log_spaced;
use imbq::multiplier::validate_delta0;
use imbq::spectral::{default_grid, GridSpec};
use imbq::{DataPreset, Dimension, PresetKind, QuadratureConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Output schema version written into every artifact.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming the bump-table cache directory.
pub const CACHE_ENV: &str = "IMBQ_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Evolve,
    Norms,
    Bounds,
    Fit,
}

/// Keys accepted in the config file; every one is optional.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub schema_version: Option<u32>,
    pub dim: Option<usize>,
    pub preset: Option<String>,
    pub gamma: Option<f64>,
    pub delta0: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub count: Option<usize>,
    pub spacing: Option<Spacing>,
    pub grid_r: Option<f64>,
    pub grid_n: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub input: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let file: FileConfig =
            toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        if let Some(v) = file.schema_version {
            if v != SCHEMA_VERSION {
                return Err(CliError::config(format!(
                    "{}: schema_version {v} is not supported (expected {SCHEMA_VERSION})",
                    path.display()
                )));
            }
        }
        Ok(file)
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Default, Clone, Args)]
pub struct Flags {
    /// Spatial dimension (1, 2 or 3).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Data preset: gaussian[:a=..], bump, dog[:a=..,b=..] or zero.
    #[arg(long)]
    pub preset: Option<String>,
    /// Hölder exponent for the lower chains.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Threshold parameter in (0, 1).
    #[arg(long)]
    pub delta0: Option<f64>,
    #[arg(long = "tmin")]
    pub t_min: Option<f64>,
    #[arg(long = "tmax")]
    pub t_max: Option<f64>,
    /// Number of sample times.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
    /// Grid half-width R.
    #[arg(long = "grid-R")]
    pub grid_r: Option<f64>,
    /// Grid points per axis N.
    #[arg(long = "grid-N")]
    pub grid_n: Option<usize>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// TOML config file; flags take precedence over its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Input series CSV (fit only).
    #[arg(long)]
    pub input: Option<PathBuf>,
}

/// Fully resolved and validated run parameters.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub dim: Dimension,
    pub preset: PresetKind,
    pub gamma: f64,
    pub delta0: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
    pub spacing: Spacing,
    pub grid: Option<(f64, usize)>,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub input: Option<PathBuf>,
    /// Whether the time window was set explicitly (flag or file).
    pub window_given: bool,
}

struct Defaults {
    t_min: f64,
    t_max: f64,
    count: usize,
    spacing: Spacing,
    format: Format,
}

fn defaults(command: Command) -> Defaults {
    match command {
        Command::Evolve => Defaults {
            t_min: 0.0,
            t_max: 100.0,
            count: 11,
            spacing: Spacing::Linear,
            format: Format::Csv,
        },
        Command::Norms => Defaults {
            t_min: 1e2,
            t_max: 1e6,
            count: 64,
            spacing: Spacing::Log,
            format: Format::Csv,
        },
        Command::Bounds => Defaults {
            t_min: 1e2,
            t_max: 1e5,
            count: 4,
            spacing: Spacing::Log,
            format: Format::Csv,
        },
        Command::Fit => Defaults {
            t_min: 1e2,
            t_max: 1e6,
            count: 64,
            spacing: Spacing::Log,
            format: Format::Json,
        },
    }
}

impl RunConfig {
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let d = defaults(command);
        let qd = QuadratureConfig::default();
        let dim_n = flags.dim.or(file.dim).unwrap_or(1);
        let dim = Dimension::new(dim_n).map_err(|_| CliError::config(format!("--dim must be 1, 2 or 3, got {dim_n}")))?;
        let preset_text = flags.preset.clone().or(file.preset).unwrap_or_else(|| "gaussian".into());
        let preset = PresetKind::parse(&preset_text)
            .map_err(|e| CliError::config(format!("--preset {preset_text:?}: {e}")))?;
        let grid_r = flags.grid_r.or(file.grid_r);
        let grid_n = flags.grid_n.or(file.grid_n);
        let grid = match (grid_r, grid_n) {
            (Some(r), Some(n)) => Some((r, n)),
            (None, None) => None,
            _ => return Err(CliError::config("--grid-R and --grid-N must be given together")),
        };
        let t_min = flags.t_min.or(file.t_min);
        let t_max = flags.t_max.or(file.t_max);
        let cfg = RunConfig {
            command,
            dim,
            preset,
            gamma: flags.gamma.or(file.gamma).unwrap_or(1.0),
            delta0: flags.delta0.or(file.delta0).unwrap_or(imbq::multiplier::DEFAULT_DELTA0),
            window_given: t_min.is_some() || t_max.is_some(),
            t_min: t_min.unwrap_or(d.t_min),
            t_max: t_max.unwrap_or(d.t_max),
            count: flags.count.or(file.count).unwrap_or(d.count),
            spacing: flags.spacing.or(file.spacing).unwrap_or(d.spacing),
            grid,
            tol: flags.tol.or(file.tol).unwrap_or(qd.rel_tol),
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format).unwrap_or(d.format),
            input: flags.input.clone().or(file.input),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !validate_delta0(self.delta0) {
            return Err(CliError::config(format!("--delta0 must lie in (0, 1), got {}", self.delta0)));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(CliError::config(format!("--gamma must lie in (0, 1], got {}", self.gamma)));
        }
        if !(self.t_min.is_finite() && self.t_max.is_finite() && self.t_min >= 0.0 && self.t_min <= self.t_max) {
            return Err(CliError::config(format!(
                "need 0 <= --tmin <= --tmax, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if self.count == 0 || (self.count == 1 && self.t_min != self.t_max) {
            return Err(CliError::config(format!(
                "--count must be at least 2 for a window of positive length, got {}",
                self.count
            )));
        }
        if self.spacing == Spacing::Log && self.t_min == 0.0 {
            return Err(CliError::config("log spacing needs --tmin > 0; use --spacing linear to include t = 0"));
        }
        if let Some((r, n)) = self.grid {
            GridSpec::new(self.dim, r, n).map_err(|e| CliError::config(format!("--grid-R/--grid-N: {e}")))?;
        }
        self.quadrature()
            .validate()
            .map_err(|e| CliError::config(format!("--tol: {e}")))?;
        if self.input.is_some() && self.command != Command::Fit {
            return Err(CliError::config("--input is only read by `fit`"));
        }
        if self.command == Command::Fit && self.format != Format::Json {
            return Err(CliError::config("`fit` writes a JSON report; use --format json"));
        }
        Ok(())
    }

    pub fn times(&self) -> Result<Vec<f64>, CliError> {
        if self.count == 1 {
            return Ok(vec![self.t_min]);
        }
        match self.spacing {
            Spacing::Log => Ok(log_spaced(self.t_min, self.t_max, self.count)?),
            Spacing::Linear => {
                let step = (self.t_max - self.t_min) / (self.count - 1) as f64;
                let mut times: Vec<f64> = (0..self.count).map(|k| self.t_min + step * k as f64).collect();
                times[self.count - 1] = self.t_max;
                Ok(times)
            }
        }
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: self.tol,
            ..QuadratureConfig::default()
        }
    }

    pub fn verifier(&self) -> VerifierConfig {
        let base = VerifierConfig::default();
        VerifierConfig {
            delta0: self.delta0,
            // asymptotic checks start at the sweep's first time
            t_min: if self.t_min > 1.0 { self.t_min } else { base.t_min },
            quadrature: self.quadrature(),
            ..base
        }
    }

    pub fn build_preset(&self) -> Result<DataPreset, CliError> {
        let cache = std::env::var_os(CACHE_ENV).map(PathBuf::from);
        Ok(DataPreset::new(self.preset, self.dim, cache.as_deref())?)
    }

    pub fn grid(&self, preset: &DataPreset) -> Result<GridSpec, CliError> {
        match self.grid {
            Some((r, n)) => Ok(GridSpec::new(self.dim, r, n)?),
            None => Ok(default_grid(preset, self.t_max)?),
        }
    }
}
