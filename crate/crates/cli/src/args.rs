use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{Command, FilterSource, Format, RunConfig, Sweep};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "diamond", version, about = "Rates and allocations for the Gaussian diamond relay channel")]
pub struct Args {
    #[command(subcommand)]
    pub command: Cmd,

    /// Total power (per channel use for flat commands, Watt for freq).
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = 3.0)]
    pub power: f64,
    /// Total fronthaul (bits per channel use, or bits/s for freq).
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = 1.0)]
    pub fronthaul: f64,
    /// Bandwidth in Hz (freq only; must match the filter span).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub bandwidth: Option<f64>,
    /// Filter table with `frequency,gain` rows.
    #[arg(long, global = true, conflicts_with = "gain")]
    pub filter: Option<PathBuf>,
    /// Constant channel gain.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gain: Option<f64>,
    /// Number of uniform bands for freq.
    #[arg(long, global = true, default_value_t = 64)]
    pub bands: usize,
    /// Grid resolution; defaults to 512 (flat, spc, sweeps), 200 (freq)
    /// and 200 samples per line (atlas).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// First value of the swept constraint.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub from: Option<f64>,
    /// Last value of the swept constraint.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub to: Option<f64>,
    /// Number of sweep points.
    #[arg(long, global = true, default_value_t = 26)]
    pub steps: usize,
    /// Space sweep points logarithmically.
    #[arg(long, global = true)]
    pub log: bool,
    /// Output format for sweeps and atlas.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Per-band allocation CSV (freq only).
    #[arg(long, global = true)]
    pub alloc: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Cmd {
    /// Optimal CF/DF time sharing on a flat channel.
    Flat,
    /// Superposition of a DF and a CF layer.
    Spc,
    /// Dual-based allocation over a frequency-selective channel.
    Freq,
    /// Flat time sharing over a range of fronthaul values at fixed power.
    SweepC,
    /// Flat time sharing over a range of powers at fixed fronthaul.
    SweepP,
    /// Sample the region border lines for one gain.
    Atlas,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

impl Args {
    pub fn into_config(self) -> Result<RunConfig> {
        let command = match self.command {
            Cmd::Flat => Command::Flat,
            Cmd::Spc => Command::Spc,
            Cmd::Freq => Command::Freq,
            Cmd::SweepC => Command::SweepC,
            Cmd::SweepP => Command::SweepP,
            Cmd::Atlas => Command::Atlas,
        };
        let filter = match (self.filter, self.gain) {
            (Some(path), None) => FilterSource::File { path },
            (None, gain) => FilterSource::Constant { gain: gain.unwrap_or(1.0) },
            (Some(_), Some(_)) => return Err(CliError::Config("give either --filter or --gain, not both".into())),
        };
        let grid = self.grid.unwrap_or(match command {
            Command::Freq | Command::Atlas => 200,
            _ => 512,
        });
        let sweep = match (self.from, self.to) {
            (Some(from), Some(to)) => Some(Sweep { from, to, steps: self.steps, log: self.log }),
            (None, None) => None,
            _ => return Err(CliError::Config("--from and --to go together".into())),
        };
        let format = match self.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        };
        let cfg = RunConfig {
            command,
            power: self.power,
            fronthaul: self.fronthaul,
            bandwidth: self.bandwidth,
            filter,
            bands: self.bands,
            grid,
            sweep,
            format,
            out: self.out,
            alloc: self.alloc,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
