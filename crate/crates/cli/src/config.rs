use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Flat,
    Spc,
    Freq,
    SweepC,
    SweepP,
    Atlas,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Flat => "flat",
            Command::Spc => "spc",
            Command::Freq => "freq",
            Command::SweepC => "sweep-c",
            Command::SweepP => "sweep-p",
            Command::Atlas => "atlas",
        }
    }
}

/// Where the band gains come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterSource {
    Constant { gain: f64 },
    File { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Range of the swept constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub log: bool,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if i == 0 {
                    self.from
                } else if i == n - 1 {
                    self.to
                } else if self.log {
                    (self.from.ln() + t * (self.to.ln() - self.from.ln())).exp()
                } else {
                    self.from + t * (self.to - self.from)
                }
            })
            .collect()
    }
}

/// Everything a run depends on. Echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    /// Total power: per channel use for the flat commands, Watt for `freq`.
    pub power: f64,
    /// Total fronthaul: bits per channel use, or bits/s for `freq`.
    pub fronthaul: f64,
    /// Bandwidth in Hz; defaults to the filter span for file filters.
    pub bandwidth: Option<f64>,
    pub filter: FilterSource,
    pub bands: usize,
    pub grid: usize,
    pub sweep: Option<Sweep>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub alloc: Option<PathBuf>,
}

fn nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be a finite number >= 0, got {v}")))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        nonneg("--power", self.power)?;
        nonneg("--fronthaul", self.fronthaul)?;
        if let Some(w) = self.bandwidth {
            nonneg("--bandwidth", w)?;
            if w == 0.0 {
                return Err(CliError::Config("--bandwidth must be positive".into()));
            }
        }
        if let FilterSource::Constant { gain } = self.filter {
            nonneg("--gain", gain)?;
        }
        if self.grid < 2 {
            return Err(CliError::Config(format!("--grid must be at least 2, got {}", self.grid)));
        }
        if self.bands == 0 {
            return Err(CliError::Config("--bands must be at least 1".into()));
        }
        match (self.command, &self.sweep) {
            (Command::SweepC | Command::SweepP, None) => {
                return Err(CliError::Config(format!("{} needs --from and --to", self.command.name())));
            }
            (_, Some(s)) => {
                nonneg("--from", s.from)?;
                nonneg("--to", s.to)?;
                if s.to < s.from {
                    return Err(CliError::Config(format!("--to {} is below --from {}", s.to, s.from)));
                }
                if s.steps < 2 {
                    return Err(CliError::Config("--steps must be at least 2".into()));
                }
                if s.log && s.from <= 0.0 {
                    return Err(CliError::Config("--log needs --from > 0".into()));
                }
            }
            _ => {}
        }
        if self.alloc.is_some() && self.command != Command::Freq {
            return Err(CliError::Config("--alloc only applies to freq".into()));
        }
        if self.format == Format::Csv && !matches!(self.command, Command::SweepC | Command::SweepP | Command::Atlas) {
            return Err(CliError::Config("--format csv only applies to sweeps and atlas".into()));
        }
        Ok(())
    }
}
