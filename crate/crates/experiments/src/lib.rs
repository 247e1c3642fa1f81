//! Reproducible spectral experiments: each run builds a truncated operator,
//! computes its spectrum and compares it with the zeros of the predicted
//! entire function, producing a structured report.

pub mod common;
mod config;
mod error;
mod report;
pub mod runs;
mod suite;

pub use error::ExperimentError;
pub use report::{Check, CheckKind, ExperimentReport, CSV_HEADER};
pub use config::{reports_csv, run_all, ExperimentConfig, ExperimentKind, SuiteConfig};
pub use runs::*;
pub use suite::{acceptance_suite, negative_controls, run_acceptance, run_criterion, Criterion, CriterionResult, NEGATIVE_FACTOR};
