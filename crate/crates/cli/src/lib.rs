//! Sweeps, exact runs, oracle verification and file formats for random
//! quasi-abelian codes. The arithmetic lives in `qacodes-core`.

pub mod config;
pub mod emit;
pub mod error;
pub mod exact;
pub mod stats;
pub mod sweep;
pub mod verify;

pub use config::{FieldSpec, Format, Mode, SweepConfig};
pub use error::{CliError, Result};
pub use exact::{run_exact, ExactReport};
pub use sweep::{run_sweep, Side, SummaryRow, SweepOutput, TrialRecord};
pub use verify::{run_verify, CheckReport, VerifyOptions};
