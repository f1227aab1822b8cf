//! Command-line harness around `lamocs-core`: instance generation, single
//! solves, benchmark sweeps and the brute-force oracle check.

pub mod app;
pub mod error;
pub mod oracle;
pub mod run;
pub mod sweep;
pub mod table;

pub use error::{CliError, Result};
pub use run::{run_algorithm, Algorithm, RunOutcome, RunReport, SolverOptions};
pub use sweep::{run_sweep, RunRecord, SweepConfig};
