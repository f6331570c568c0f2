//! Command-line front end for the qtraj experiments.
//!
//! `qtraj <experiment> [--config <file>] [--out <dir>] [--seed <u64>]
//! [--threads <n|auto>] [--<key> <value>]...` runs one experiment and writes
//! `result.csv`, `scalars.csv` and `manifest.txt` into a fresh run directory.
//! `qtraj selftest` runs the analytic-oracle suite.

pub mod config;
pub mod run;
pub mod selftest;

pub use config::{parse_args, ConfigError, ExperimentConfig, RawConfig, RunConfig, Threads};
pub use run::{compute, execute, RunError};
pub use selftest::{run_selftest, Check};
