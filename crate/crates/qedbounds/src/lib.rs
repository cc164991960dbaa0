//! Sweep harness for the self-energy bounds library.
//!
//! One JSON config describes a task and a parameter grid; the harness runs
//! the grid through a worker pool, restores grid order, and writes a single
//! self-describing CSV schema shared by every task. `accept` runs the
//! acceptance suite instead and emits a JSON report.
//!
//! Module map:
//! - [`config`]: the JSON sweep configuration and the exit-code error type.
//! - [`rows`]: the CSV row schema, 17-significant-digit formatting, parsing.
//! - [`fitting`]: log-log power-law fits over parsed rows.
//! - [`tasks`]: per-task row emitters and the deterministic worker pool.
//! - [`accept`]: the acceptance criteria and the JSON report.

pub mod accept;
pub mod config;
pub mod fitting;
pub mod rows;
pub mod tasks;

pub use config::{CliError, SweepConfig, Task};
pub use rows::{ResultRow, CSV_HEADER, TOOL_VERSION};
