//! Command-line laboratory around `boltzwave-core`: threaded executor,
//! key=value configs, CSV and binary outputs, run manifests.

pub mod cli;
pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod exec;
pub mod manifest;
pub mod samples;
pub mod snapshot;

pub use error::{LabError, LabResult};
