//! The analyses behind each CLI subcommand, as plain functions from a
//! [`RunConfig`] to a serializable report.

mod commands;
mod config;
mod render;

use std::fs::File;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

pub use commands::{
    bins, ccdf, deps_metrics, fit, ingest_ghtorrent, tailwalk, BinRow, BinsReport, CcdfPoint, CcdfReport,
    DepsMetricsReport, FamilyFailure, FitReport, FitRow, IngestReport, Member, TailWalkReport, TailWalkRow,
};
pub use config::{OutputFormat, RunConfig};
pub use render::{render, to_csv, to_table, Cell, Report, Rows};

use crate::ingest::IngestError;

#[derive(Debug, Error)]
pub enum PipelineError {
    /// Unreadable, malformed or inconsistent input. Exit code 1.
    #[error("{0}")]
    Input(String),
    /// The input parsed but the numerics could not produce a result.
    /// Exit code 2.
    #[error("{0}")]
    Numeric(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Input(_) => 1,
            PipelineError::Numeric(_) => 2,
        }
    }
}

impl From<IngestError> for PipelineError {
    fn from(e: IngestError) -> Self {
        PipelineError::Input(e.to_string())
    }
}

/// Header of every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub toolkit_version: &'static str,
    pub command: &'static str,
    pub config: RunConfig,
}

impl Meta {
    fn new(command: &'static str, config: &RunConfig) -> Self {
        Meta {
            toolkit_version: crate::VERSION,
            command,
            config: config.clone(),
        }
    }
}

/// A finished report plus anything worth telling the user on the side.
#[derive(Debug, Clone)]
pub struct Run<T> {
    pub report: T,
    pub warnings: Vec<String>,
    /// Set when the report was produced but nothing in it could be fitted;
    /// callers should exit with status 2 after writing it.
    pub numeric_failure: Option<String>,
}

impl<T> Run<T> {
    fn ok(report: T, warnings: Vec<String>) -> Self {
        Run {
            report,
            warnings,
            numeric_failure: None,
        }
    }
}

fn open(path: &Option<PathBuf>, flag: &str, command: &str) -> Result<(File, PathBuf), PipelineError> {
    let path = path
        .as_ref()
        .ok_or_else(|| PipelineError::Input(format!("{command} needs --{flag}")))?;
    let f = File::open(path).map_err(|e| PipelineError::Input(format!("{}: {e}", display(path))))?;
    Ok((f, path.clone()))
}

fn display(p: &Path) -> String {
    p.display().to_string()
}
