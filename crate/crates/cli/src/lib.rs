//! Experiment harness for the tVHA toolkit.
//!
//! Each subcommand reads a [`RunConfig`] (JSON, with command-line overrides)
//! and writes CSV data plus a manifest that is enough to replay the run:
//!
//! - `hist`: classified Hamiltonian coefficients (`hist.csv`)
//! - `sweep`: VQE energies over the truncation and Trotter grid (`sweep.csv`)
//! - `resources`: CNOT and parameter counts without optimization (`resources.csv`)
//! - `fci`: exact ground energy against the fixture metadata
//! - `plot`: SVG of a sweep or resources CSV

pub mod commands;
pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod plot;

pub use commands::{cmd_fci, cmd_hist, cmd_resources, cmd_sweep, FciReport, SweepReport};
pub use config::{AnsatzKind, BodyMode, Overrides, PTargets, RunConfig};
pub use error::{CliError, Result};
pub use experiment::{auto_grid, GridLevel, ResourceRow, SweepRow};
pub use plot::{cmd_plot, Metric, References};
