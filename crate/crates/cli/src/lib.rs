//! Command-line pipeline for building, evaluating and querying an
//! eligibility-criteria ontology.
//!
//! Exit status: 0 success, 1 usage error, 2 invalid input, 3 pipeline
//! failure. Every error message names the stage it came from.

mod commands;
pub mod curve;
mod error;
mod io;
pub mod manifest;
pub mod pipeline;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trialonto_core::Category;

pub use error::{CliError, ErrorKind, Stage};

#[derive(Debug, Parser)]
#[command(name = "trialonto", version, about = "Build and query coverage-optimized eligibility-criteria ontologies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the whole pipeline; writes the ontology, a run manifest and the enrichment curve.
    Build(BuildArgs),
    /// Coverage of an ontology over the mentions of a corpus.
    Coverage(CoverageArgs),
    /// Threshold selection over an enrichment curve CSV.
    Optimize(OptimizeArgs),
    /// Map a free-text term to its concept, annotations, codes and related entities.
    Normalize(NormalizeArgs),
    /// Summarize a build from its manifest.
    Report(ReportArgs),
    /// Re-emit an ontology as OWL, TSV or JSON.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClusterOn {
    Gains,
    Cumulative,
}

impl ClusterOn {
    pub fn as_str(self) -> &'static str {
        match self {
            ClusterOn::Gains => "gains",
            ClusterOn::Cumulative => "cumulative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Cut {
    /// The first p concepts of the global enrichment queue.
    Global,
    /// Every enrichable category cut at seed size + p concepts.
    PerCategory,
}

impl Cut {
    pub fn as_str(self) -> &'static str {
        match self {
            Cut::Global => "global",
            Cut::PerCategory => "per-category",
        }
    }
}

// `none` parses to no category so `--disable-enrichment none` clears the list.
fn parse_category_or_none(s: &str) -> Result<Option<Category>, String> {
    if s.trim().eq_ignore_ascii_case("none") {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|e: trialonto_core::category::UnknownCategory| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    /// Trial records, one JSON object per line.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Surface form → concept TSV.
    #[arg(long)]
    pub lexicon: PathBuf,
    /// Category scaffold TOML.
    #[arg(long)]
    pub scaffold: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub seed_size: usize,
    /// Labels and annotations for data-derived concepts (TSV).
    #[arg(long)]
    pub annotations: Option<PathBuf>,
    /// Concepts added by hand after the threshold (TSV).
    #[arg(long)]
    pub manual_additions: Option<PathBuf>,
    /// Categories kept out of enrichment, comma-separated, or `none`.
    #[arg(long, value_delimiter = ',', default_value = "SDoH", value_parser = parse_category_or_none)]
    pub disable_enrichment: Vec<Option<Category>>,
    #[arg(long, value_enum, default_value_t = ClusterOn::Gains)]
    pub cluster_on: ClusterOn,
    #[arg(long, value_enum, default_value_t = Cut::Global)]
    pub cut: Cut,
    /// Output ontology (OWL functional syntax).
    #[arg(long)]
    pub out: PathBuf,
    /// Manifest path; defaults to the output with a `.manifest.json` extension.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Curve CSV path; defaults to the output with a `.curve.csv` extension.
    #[arg(long)]
    pub curve: Option<PathBuf>,
}

impl BuildArgs {
    /// Disabled categories, sorted and deduplicated.
    pub fn disabled_categories(&self) -> Vec<Category> {
        let mut v: Vec<Category> = self.disable_enrichment.iter().flatten().copied().collect();
        v.sort();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, Args)]
pub struct CoverageArgs {
    #[arg(long)]
    pub ontology: PathBuf,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub lexicon: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    /// Curve CSV with `gain` and `cumulative` columns.
    #[arg(long)]
    pub series: PathBuf,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(usize))]
    pub classes: usize,
    #[arg(long, value_enum, default_value_t = ClusterOn::Gains)]
    pub cluster_on: ClusterOn,
}

#[derive(Debug, Clone, Args)]
pub struct NormalizeArgs {
    #[arg(long)]
    pub term: String,
    #[arg(long)]
    pub ontology: PathBuf,
    #[arg(long)]
    pub lexicon: PathBuf,
    #[arg(long)]
    pub valuesets: PathBuf,
    #[arg(long)]
    pub associations: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Ontology to report on; defaults to the one the manifest names.
    #[arg(long)]
    pub ontology: Option<PathBuf>,
    /// Print the validated enrichment curve CSV instead of the summary.
    #[arg(long)]
    pub curve: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Owl,
    Tsv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub ontology: PathBuf,
    #[arg(long, value_enum)]
    pub format: ExportFormat,
    /// Write to a file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn dispatch(command: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Build(a) => pipeline::cmd_build(a, out).map(|_| ()),
        Command::Coverage(a) => commands::cmd_coverage(a, out),
        Command::Optimize(a) => commands::cmd_optimize(a, out),
        Command::Normalize(a) => commands::cmd_normalize(a, out),
        Command::Report(a) => commands::cmd_report(a, out),
        Command::Export(a) => commands::cmd_export(a, out),
    }
}

/// Parses `args` and runs the command; returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests land here too
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                1
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match dispatch(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
