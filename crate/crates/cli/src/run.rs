use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use diamond_core::atlas::{equal_power_junction, equal_relay_junction, BorderKind, BorderLine};
use diamond_core::flat::{flat_optimize, flat_sweep_c, flat_sweep_p, FlatGrid, FlatReferences};
use diamond_core::freq::{cutset_bound, optimize, ChannelSpec, DualGrid, ModeSet};
use diamond_core::superposition::spc_optimize;
use serde::Serialize;

use crate::config::{Command, FilterSource, Format, RunConfig};
use crate::error::{CliError, Result};
use crate::filter::parse_filter_csv;
use crate::report::{AtlasReport, AtlasRow, BandRow, Output, RateReport, References, SweepReport, SweepRow};

/// Relative mismatch allowed between `--bandwidth` and the filter span.
const SPAN_TOL: f64 = 1e-9;

/// Band gains for `freq`, plus the frequency of the lower band edge.
pub fn channel_spec(cfg: &RunConfig) -> Result<(ChannelSpec, f64)> {
    match &cfg.filter {
        FilterSource::Constant { gain } => {
            let w = cfg.bandwidth.ok_or_else(|| CliError::Config("--bandwidth is required with --gain".into()))?;
            Ok((ChannelSpec::flat(w, *gain, cfg.bands, cfg.power, cfg.fronthaul)?, 0.0))
        }
        FilterSource::File { path } => {
            let table = parse_filter_csv(path)?;
            let span = table.span();
            if let Some(w) = cfg.bandwidth {
                if (w - span).abs() > SPAN_TOL * span {
                    return Err(CliError::Config(format!(
                        "--bandwidth {w} does not match the filter span {span} of {}",
                        path.display()
                    )));
                }
            }
            let spec = ChannelSpec::new(span, table.resample(cfg.bands), cfg.power, cfg.fronthaul)?;
            Ok((spec, table.rows()[0].0))
        }
    }
}

fn constant_gain(cfg: &RunConfig) -> Result<f64> {
    match cfg.filter {
        FilterSource::Constant { gain } => Ok(gain),
        FilterSource::File { .. } => {
            Err(CliError::Config(format!("{} takes a constant --gain, not --filter", cfg.command.name())))
        }
    }
}

fn flat_only(cfg: &RunConfig) -> Result<()> {
    if constant_gain(cfg)? != 1.0 || cfg.bandwidth.is_some() {
        return Err(CliError::Config(format!(
            "{} works in per-channel-use units; fold the gain into --power instead",
            cfg.command.name()
        )));
    }
    Ok(())
}

pub fn run_flat(cfg: &RunConfig) -> Result<RateReport> {
    flat_only(cfg)?;
    let plan = flat_optimize(cfg.power, cfg.fronthaul, FlatGrid::with_resolution(cfg.grid))?;
    let refs = FlatReferences::new(cfg.power, cfg.fronthaul)?;
    Ok(RateReport {
        config: cfg.clone(),
        achieved: plan.rate,
        references: refs.into(),
        power_used: plan.power_used(),
        fronthaul_used: plan.fronthaul_used(),
        lagrange: None,
        dual_value: None,
        kkt: None,
        flat: Some(plan),
        spc: None,
        bands: Vec::new(),
    })
}

pub fn run_spc(cfg: &RunConfig) -> Result<RateReport> {
    flat_only(cfg)?;
    let sol = spc_optimize(cfg.power, cfg.fronthaul)?;
    let refs = FlatReferences::new(cfg.power, cfg.fronthaul)?;
    Ok(RateReport {
        config: cfg.clone(),
        achieved: sol.rate,
        references: refs.into(),
        power_used: cfg.power,
        fronthaul_used: cfg.fronthaul,
        lagrange: None,
        dual_value: None,
        kkt: None,
        flat: None,
        spc: Some(sol),
        bands: Vec::new(),
    })
}

pub fn run_freq(cfg: &RunConfig) -> Result<RateReport> {
    let (spec, offset) = channel_spec(cfg)?;
    let grid = DualGrid::square(cfg.grid);
    let best = optimize(&spec, &grid, ModeSet::Both)?;
    let cf_only = optimize(&spec, &grid, ModeSet::CfOnly)?.plan.rate;
    let df_only = optimize(&spec, &grid, ModeSet::DfOnly)?.plan.rate;
    Ok(RateReport {
        config: cfg.clone(),
        achieved: best.plan.rate,
        references: References { cf_only, df_only, superposition: None, cutset: cutset_bound(&spec) },
        power_used: best.plan.power_used,
        fronthaul_used: best.plan.fronthaul_used,
        lagrange: Some(best.point),
        dual_value: Some(best.dual_value),
        kkt: Some(best.kkt),
        flat: None,
        spc: None,
        bands: BandRow::from_plan(&best.plan, offset),
    })
}

pub fn run_sweep(cfg: &RunConfig) -> Result<SweepReport> {
    flat_only(cfg)?;
    let sweep = cfg.sweep.ok_or_else(|| CliError::Config("missing sweep range".into()))?;
    let values = sweep.values();
    let grid = FlatGrid::with_resolution(cfg.grid);
    let points = match cfg.command {
        Command::SweepC => flat_sweep_c(cfg.power, &values, grid)?,
        Command::SweepP => flat_sweep_p(cfg.fronthaul, &values, grid)?,
        other => return Err(CliError::Config(format!("{} is not a sweep", other.name()))),
    };
    Ok(SweepReport { config: cfg.clone(), points })
}

pub fn run_atlas(cfg: &RunConfig) -> Result<AtlasReport> {
    let h = constant_gain(cfg)?;
    let mut rows = Vec::new();
    for kind in BorderKind::ALL {
        for (lambda_c, lambda_s) in BorderLine::new(kind, h).sample(cfg.grid)? {
            rows.push(AtlasRow { line: kind.name().to_string(), lambda_c, lambda_s });
        }
    }
    Ok(AtlasReport {
        config: cfg.clone(),
        gain: h,
        equal_power_junction: equal_power_junction(),
        equal_relay_junction: equal_relay_junction(),
        rows,
    })
}

/// Validate `cfg` and run its command.
pub fn run(cfg: &RunConfig) -> Result<Output> {
    cfg.validate()?;
    let out = match cfg.command {
        Command::Flat => Output::Rate(run_flat(cfg)?),
        Command::Spc => Output::Rate(run_spc(cfg)?),
        Command::Freq => Output::Rate(run_freq(cfg)?),
        Command::SweepC | Command::SweepP => Output::Sweep(run_sweep(cfg)?),
        Command::Atlas => Output::Atlas(run_atlas(cfg)?),
    };
    if let Output::Rate(r) = &out {
        if !r.is_finite() {
            return Err(diamond_core::Error::Domain("report contains a non-finite value".into()).into());
        }
    }
    Ok(out)
}

fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|source| CliError::Io { path: p.to_path_buf(), source })?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.unwrap_or(Path::new("<stdout>")).to_path_buf(), source }
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut w = open(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| io_err(path)(e.into()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(io_err(path))
}

fn write_csv<T: Serialize>(rows: &[T], path: Option<&Path>) -> Result<()> {
    let mut w = csv::Writer::from_writer(open(path)?);
    let csv_err = |source| CliError::Csv { path: path.unwrap_or(Path::new("<stdout>")).to_path_buf(), source };
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))
}

/// Write `output` where `cfg` asks for it: the report to `--out` (or
/// stdout) and the band table to `--alloc`.
pub fn write_output(cfg: &RunConfig, output: &Output) -> Result<()> {
    let out = cfg.out.as_deref();
    match (output, cfg.format) {
        (Output::Rate(r), _) => {
            write_json(r, out)?;
            if let Some(path) = cfg.alloc.as_deref() {
                write_csv(&r.bands, Some(path))?;
            }
            Ok(())
        }
        (Output::Sweep(s), Format::Json) => write_json(s, out),
        (Output::Sweep(s), Format::Csv) => {
            let rows: Vec<SweepRow> = s.points.iter().map(SweepRow::from).collect();
            write_csv(&rows, out)
        }
        (Output::Atlas(a), Format::Json) => write_json(a, out),
        (Output::Atlas(a), Format::Csv) => write_csv(&a.rows, out),
    }
}
