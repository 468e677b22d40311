//! Filter tables: `frequency,gain` rows resampled onto uniform bands.

use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use diamond_core::freq::ChannelSpec;

use crate::error::{CliError, Result};

/// Sampled `|H(f)|` with strictly increasing frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterTable {
    rows: Vec<(f64, f64)>,
}

impl FilterTable {
    pub fn rows(&self) -> &[(f64, f64)] {
        &self.rows
    }

    /// Width of the sampled span.
    pub fn span(&self) -> f64 {
        self.rows[self.rows.len() - 1].0 - self.rows[0].0
    }

    /// Gain at `f` by linear interpolation, clamped to the end rows.
    pub fn gain_at(&self, f: f64) -> f64 {
        let rows = &self.rows;
        if f <= rows[0].0 {
            return rows[0].1;
        }
        let k = rows.partition_point(|r| r.0 <= f);
        if k >= rows.len() {
            return rows[rows.len() - 1].1;
        }
        let (f0, g0) = rows[k - 1];
        let (f1, g1) = rows[k];
        let t = (f - f0) / (f1 - f0);
        g0 + t * (g1 - g0)
    }

    /// Gains at the centres of `n` equal bands covering the span.
    pub fn resample(&self, n: usize) -> Vec<f64> {
        let f0 = self.rows[0].0;
        let width = self.span() / n as f64;
        (0..n).map(|i| self.gain_at(f0 + (i as f64 + 0.5) * width)).collect()
    }
}

fn parse_err(path: &Path, row: usize, message: impl Into<String>) -> CliError {
    CliError::Parse { path: path.to_path_buf(), row, message: message.into() }
}

/// Parse `frequency,gain` rows from any reader; `path` is only used in
/// error messages. A first row that is not numeric is taken as a header.
pub fn parse_filter_reader<R: Read>(reader: R, path: &Path) -> Result<FilterTable> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).flexible(true).from_reader(reader);
    let mut rows: Vec<(f64, f64)> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| parse_err(path, row, e.to_string()))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if record.len() != 2 {
            return Err(parse_err(path, row, format!("expected 2 fields, found {}", record.len())));
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        let (f, g) = match parsed {
            (Ok(f), Ok(g)) => (f, g),
            _ if row == 1 => continue,
            _ => {
                return Err(parse_err(path, row, format!("not a number pair: {:?}", record.iter().collect::<Vec<_>>())))
            }
        };
        if !f.is_finite() || !g.is_finite() {
            return Err(parse_err(path, row, "values must be finite"));
        }
        if g < 0.0 {
            return Err(parse_err(path, row, format!("gain must be >= 0, got {g}")));
        }
        if let Some(&(prev, _)) = rows.last() {
            if f <= prev {
                return Err(parse_err(path, row, format!("frequency {f} does not increase (previous {prev})")));
            }
        }
        rows.push((f, g));
    }
    match rows.len() {
        0 => Err(parse_err(path, 0, "no data rows")),
        1 => Err(parse_err(path, 1, "at least two rows are needed to define a band")),
        _ => Ok(FilterTable { rows }),
    }
}

pub fn parse_filter_csv(path: &Path) -> Result<FilterTable> {
    let file = File::open(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_filter_reader(file, path)
}

/// Write a table that re-imports to the same band gains: the band centres
/// plus the two band edges.
pub fn write_filter_csv(spec: &ChannelSpec, path: &Path) -> Result<()> {
    let csv_err = |source| CliError::Csv { path: PathBuf::from(path), source };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    let gains = spec.gains();
    w.write_record(["frequency", "gain"]).map_err(csv_err)?;
    let mut put = |f: f64, g: f64| w.write_record([f.to_string(), g.to_string()]).map_err(csv_err);
    put(0.0, gains[0])?;
    for (i, &g) in gains.iter().enumerate() {
        put(spec.band_center(i), g)?;
    }
    put(spec.bandwidth(), gains[gains.len() - 1])?;
    w.flush().map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}
