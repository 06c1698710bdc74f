//! The `build` pipeline: ingest → extract → count → seed → enrich →
//! find_threshold → apply_threshold → manual → serialize.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use trialonto_core::corpus::{criterion_lines, parse_corpus};
use trialonto_core::coverage_opt::{
    apply_manual_additions, apply_per_category_cut, apply_threshold, count_frequencies, coverage_counts,
    enrichment_series, load_manual_additions, materialize_seed, per_category_additions, select_seed, CoverageSeries,
    PipelineConfig, Placement, ThresholdCut,
};
use trialonto_core::jenks::{threshold_from_cumulative, threshold_from_gains};
use trialonto_core::lexicon::{extract_all, load_lexicon, EntityMention};
use trialonto_core::ontology::{load_catalog, parse_owl, serialize_owl, ConceptCatalog, Ontology, ScaffoldConfig};
use trialonto_core::Category;

use crate::curve::write_curve;
use crate::error::{CliError, Stage};
use crate::io::{sha256_hex, write_atomic, Input};
use crate::manifest::{
    format_coverage, Artifacts, ClassCounts, ConfigEcho, CorpusSummary, CoverageFigures, FileDigest, Manifest,
    MentionCounts,
};
use crate::{BuildArgs, ClusterOn, Cut};

/// Everything a build produces, before anything is written.
#[derive(Debug, Clone)]
pub struct BuildOutcome {
    pub manifest: Manifest,
    pub owl: String,
    pub curve_csv: String,
    pub series: CoverageSeries,
    pub mentions: Vec<EntityMention>,
    pub ontology: Ontology,
    pub manifest_path: PathBuf,
    pub curve_path: PathBuf,
}

pub fn manifest_path(args: &BuildArgs) -> PathBuf {
    args.manifest.clone().unwrap_or_else(|| args.out.with_extension("manifest.json"))
}

pub fn curve_path(args: &BuildArgs) -> PathBuf {
    args.curve.clone().unwrap_or_else(|| args.out.with_extension("curve.csv"))
}

// Artifact reference stored in the manifest: a bare file name when the
// artifact sits beside the manifest, the path as given otherwise.
fn artifact_ref(artifact: &Path, manifest: &Path) -> String {
    if artifact.parent() == manifest.parent() {
        if let Some(name) = artifact.file_name() {
            return name.to_string_lossy().into_owned();
        }
    }
    artifact.display().to_string()
}

/// Runs the pipeline in memory.
pub fn build(args: &BuildArgs) -> Result<BuildOutcome, CliError> {
    let mut inputs = BTreeMap::new();
    let mut record = |role: &str, input: &Input| {
        inputs.insert(
            role.to_string(),
            FileDigest { path: input.path.display().to_string(), sha256: input.sha256() },
        );
    };

    // ingest
    let corpus_in = Input::read(Stage::Ingest, "corpus", &args.corpus)?;
    record("corpus", &corpus_in);
    let records = parse_corpus(&corpus_in.bytes[..]).map_err(|e| corpus_in.invalid(Stage::Ingest, e))?;

    let lexicon_in = Input::read(Stage::Extract, "lexicon", &args.lexicon)?;
    record("lexicon", &lexicon_in);
    let lexicon = load_lexicon(&lexicon_in.bytes[..]).map_err(|e| lexicon_in.invalid(Stage::Extract, e))?;

    let scaffold_in = Input::read(Stage::Scaffold, "scaffold", &args.scaffold)?;
    record("scaffold", &scaffold_in);
    let scaffold = ScaffoldConfig::parse(scaffold_in.text(Stage::Scaffold)?)
        .map_err(|e| scaffold_in.invalid(Stage::Scaffold, e))?;
    let scaffold_ontology = scaffold.build().map_err(|e| scaffold_in.invalid(Stage::Scaffold, e))?;
    let default_parents = scaffold.default_parents();

    let catalog = match &args.annotations {
        Some(path) => {
            let input = Input::read(Stage::Annotate, "annotations", path)?;
            record("annotations", &input);
            load_catalog(&input.bytes[..]).map_err(|e| input.invalid(Stage::Annotate, e))?
        }
        None => ConceptCatalog::new(),
    };
    let manual = match &args.manual_additions {
        Some(path) => {
            let input = Input::read(Stage::Manual, "manual additions", path)?;
            record("manual_additions", &input);
            load_manual_additions(&input.bytes[..]).map_err(|e| input.invalid(Stage::Manual, e))?
        }
        None => Vec::new(),
    };

    // extract
    let lines = criterion_lines(&records);
    let mentions = extract_all(&lines, &lexicon).map_err(|e| lexicon_in.invalid(Stage::Extract, e))?;

    // count
    let freqs = count_frequencies(&mentions);
    if let Some((cat, id, _)) = freqs.iter().find(|(_, id, _)| scaffold_ontology.contains(id)) {
        return Err(CliError::input(
            Stage::Count,
            format!("{cat} concept {id:?} from the lexicon collides with a scaffold class id"),
        ));
    }

    let disabled = args.disabled_categories();
    let config = PipelineConfig {
        seed_size: args.seed_size,
        enrichment_disabled: disabled.iter().copied().collect(),
        cut: match args.cut {
            Cut::Global => ThresholdCut::GlobalPrefix,
            Cut::PerCategory => ThresholdCut::PerCategory,
        },
        ..PipelineConfig::default()
    };
    let placement = Placement { default_parents: &default_parents, catalog: &catalog };

    // seed
    let seeds = select_seed(&freqs, config.seed_size);
    let mut seeded = scaffold_ontology.clone();
    materialize_seed(&mut seeded, &seeds, placement).map_err(|e| CliError::pipeline(Stage::Seed, e.to_string()))?;

    // enrich
    let series = enrichment_series(&freqs, &seeds, &config);
    series
        .check()
        .map_err(|e| CliError::pipeline(Stage::Enrich, format!("enrichment curve invalid: {e}")))?;
    let (baseline_covered, total) = coverage_counts(&seeded, &mentions);
    if baseline_covered != series.baseline_mentions || total != series.total_mentions {
        return Err(CliError::pipeline(Stage::Enrich, "seed coverage disagrees with the enrichment baseline"));
    }

    // find_threshold
    let p = if series.is_empty() {
        0
    } else {
        match args.cluster_on {
            ClusterOn::Gains => threshold_from_gains(&series.gains()),
            ClusterOn::Cumulative => threshold_from_cumulative(&series.cumulative()),
        }
        .map_err(|e| CliError::pipeline(Stage::Threshold, e.to_string()))?
    };

    // apply_threshold
    let (applied, added) = match config.cut {
        ThresholdCut::GlobalPrefix => (apply_threshold(&series, p, &seeded, &freqs, placement), p),
        ThresholdCut::PerCategory => (
            apply_per_category_cut(&series, p, &seeded, &freqs, &config, placement),
            per_category_additions(&series, &freqs, &config, p).len(),
        ),
    };
    let applied = applied.map_err(|e| CliError::pipeline(Stage::Apply, e.to_string()))?;
    let (optimized_covered, _) = coverage_counts(&applied, &mentions);

    // manual
    let final_ontology = apply_manual_additions(&applied, &manual, placement)
        .map_err(|e| CliError::pipeline(Stage::Manual, e.to_string()))?;
    let (final_covered, _) = coverage_counts(&final_ontology, &mentions);

    // serialize
    let owl = serialize_owl(&final_ontology);
    match parse_owl(&owl) {
        Ok(back) if back == final_ontology => {}
        Ok(_) => return Err(CliError::pipeline(Stage::Serialize, "serialized ontology does not read back identically")),
        Err(e) => return Err(CliError::pipeline(Stage::Serialize, format!("serialized ontology does not parse: {e}"))),
    }
    let curve_csv = write_curve(&series);

    let manifest_path = manifest_path(args);
    let curve_path = curve_path(args);
    let counts = ClassCounts {
        scaffold: scaffold_ontology.len(),
        seeded: seeds.len(),
        added,
        manual: manual.len(),
    };
    debug_assert_eq!(counts.total(), final_ontology.len());

    let manifest = Manifest {
        tool: format!("trialonto {}", env!("CARGO_PKG_VERSION")),
        config: ConfigEcho {
            seed_size: config.seed_size,
            classes: config.jenks_class_count,
            cluster_on: args.cluster_on.as_str().to_string(),
            cut: args.cut.as_str().to_string(),
            enrichment_disabled: disabled,
            tie_break: config.tie_break.as_str().to_string(),
        },
        inputs,
        corpus: CorpusSummary {
            trials: records.len(),
            criterion_lines: lines.len(),
            mentions: freqs.total_mentions(),
            distinct_concepts: freqs.concept_count(),
        },
        p,
        series_length: series.len(),
        coverage: CoverageFigures {
            baseline: format_coverage(baseline_covered, total),
            optimized: format_coverage(optimized_covered, total),
            final_: format_coverage(final_covered, total),
        },
        covered_mentions: MentionCounts {
            total,
            baseline: baseline_covered,
            optimized: optimized_covered,
            final_: final_covered,
        },
        counts,
        stats: final_ontology.stats(),
        artifacts: Artifacts {
            ontology: artifact_ref(&args.out, &manifest_path),
            ontology_sha256: sha256_hex(owl.as_bytes()),
            curve: artifact_ref(&curve_path, &manifest_path),
        },
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
    };

    Ok(BuildOutcome {
        manifest,
        owl,
        curve_csv,
        series,
        mentions,
        ontology: final_ontology,
        manifest_path,
        curve_path,
    })
}

/// Runs the pipeline and writes the ontology, curve and manifest.
pub fn cmd_build(args: &BuildArgs, out: &mut dyn std::io::Write) -> Result<BuildOutcome, CliError> {
    let outcome = build(args)?;
    write_atomic(&args.out, outcome.owl.as_bytes())?;
    write_atomic(&outcome.curve_path, outcome.curve_csv.as_bytes())?;
    write_atomic(&outcome.manifest_path, outcome.manifest.to_json().as_bytes())?;
    let m = &outcome.manifest;
    let summary = format!(
        "mentions: {} ({} concepts)\np: {} of {}\ncoverage: baseline {} optimized {} final {}\nclasses: {}\n\
         wrote {}\nwrote {}\nwrote {}\n",
        m.corpus.mentions,
        m.corpus.distinct_concepts,
        m.p,
        m.series_length,
        m.coverage.baseline,
        m.coverage.optimized,
        m.coverage.final_,
        m.stats.class_count,
        args.out.display(),
        outcome.curve_path.display(),
        outcome.manifest_path.display(),
    );
    out.write_all(summary.as_bytes())
        .map_err(|e| CliError::pipeline(Stage::Write, e.to_string()))?;
    Ok(outcome)
}

pub(crate) fn category_list(categories: &[Category]) -> String {
    if categories.is_empty() {
        "none".into()
    } else {
        categories.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(",")
    }
}
