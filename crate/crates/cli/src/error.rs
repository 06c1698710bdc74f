use std::fmt;

use thiserror::Error;

/// Pipeline stage an error is attributed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Extract,
    Scaffold,
    Annotate,
    Count,
    Seed,
    Enrich,
    Threshold,
    Apply,
    Manual,
    Serialize,
    Write,
    Load,
    Coverage,
    Optimize,
    Normalize,
    Report,
    Export,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Extract => "extract",
            Stage::Scaffold => "scaffold",
            Stage::Annotate => "annotate",
            Stage::Count => "count",
            Stage::Seed => "seed",
            Stage::Enrich => "enrich",
            Stage::Threshold => "find_threshold",
            Stage::Apply => "apply_threshold",
            Stage::Manual => "manual",
            Stage::Serialize => "serialize",
            Stage::Write => "write",
            Stage::Load => "load",
            Stage::Coverage => "coverage",
            Stage::Optimize => "optimize",
            Stage::Normalize => "normalize",
            Stage::Report => "report",
            Stage::Export => "export",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad or missing input; exit status 2.
    Input,
    /// Failure inside the pipeline or while writing results; exit status 3.
    Pipeline,
}

#[derive(Debug, Error)]
#[error("stage {stage}: {message}")]
pub struct CliError {
    pub stage: Stage,
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn input(stage: Stage, message: impl Into<String>) -> Self {
        CliError { stage, kind: ErrorKind::Input, message: message.into() }
    }

    pub fn pipeline(stage: Stage, message: impl Into<String>) -> Self {
        CliError { stage, kind: ErrorKind::Pipeline, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Input => 2,
            ErrorKind::Pipeline => 3,
        }
    }
}
