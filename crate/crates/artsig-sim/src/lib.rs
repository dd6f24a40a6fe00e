//! Monte Carlo harness, file formats, and runtime checks around the core
//! signal-realignment toolkit. The `artsig` binary in this crate exposes the
//! sweeps on the command line; the modules here are library-usable so tests
//! and other tools can drive the same code paths.

pub mod config;
pub mod csv;
pub mod problem;
pub mod selftest;
pub mod sweep;

pub use config::{load_overlay, parse_scheme_list, ConfigOverlay, ExperimentConfig};
pub use csv::{format_csv, write_csv, CSV_HEADER};
pub use problem::{load_problem, parse_complex};
pub use selftest::{run_selftest, CheckOutcome};
pub use sweep::{expected_rows, run_sweep, Receiver, SweepResult, SweepRow};
