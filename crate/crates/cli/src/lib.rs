//! Command-line front end for `diamond-core`: reads filter tables, runs the
//! solvers and writes JSON reports and CSV tables.

pub mod args;
pub mod config;
pub mod error;
pub mod filter;
pub mod report;
pub mod run;

pub use config::{Command, FilterSource, Format, RunConfig, Sweep};
pub use error::{CliError, Result};
pub use filter::{parse_filter_csv, parse_filter_reader, write_filter_csv, FilterTable};
pub use report::{BandRow, Output, RateReport, References};
pub use run::{run, write_output};
