//! Verification suites over the classical and quantum tau-function checks,
//! seeded group elements and versioned reports.

mod group;
mod report;
mod scenario;
mod suite;

pub use group::{compose_group_element, random_group_element, Draw};
pub use report::{emit_report, CheckRecord, Format, Report, Status, Summary, SCHEMA};
pub use scenario::{ConfigError, Limits, Parametrization, Scenario, Suite};
pub use suite::run_suite;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },
}

impl HarnessError {
    /// Configuration and I/O problems both exit with `2`.
    pub fn exit_code(&self) -> u8 {
        2
    }
}
