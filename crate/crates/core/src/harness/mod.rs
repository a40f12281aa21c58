//! Command-line front end, telemetry files, plots, sweeps and the acceptance matrix.

pub mod cli;
pub mod matrix;
pub mod selftest;
pub mod svg;
pub mod sweep;
pub mod telemetry_io;

pub use matrix::{verify_all, CheckLine, CheckReport};
pub use selftest::{random_monotone, random_positive_increasing, selftest};
pub use svg::{line_chart, PlotOptions};
pub use sweep::{sweep, sweep_table, SweepParam};
pub use telemetry_io::{read_csv, read_json, read_records, write_csv, write_json, CSV_HEADER};
