use std::io::Write;
use std::path::{Path, PathBuf};

use trialonto_core::corpus::{criterion_lines, parse_corpus};
use trialonto_core::coverage_opt::coverage_counts;
use trialonto_core::jenks::{gvf, jenks_breaks, threshold_from_cumulative, threshold_from_gains};
use trialonto_core::lexicon::{extract_all, load_lexicon, Lexicon};
use trialonto_core::normalize::{normalize_term, AssociationTable, NormalizeError, ValuesetStore};
use trialonto_core::ontology::{parse_owl, serialize_owl, ConceptNode, Ontology};

use crate::curve::{read_curve, Curve};
use crate::error::{CliError, Stage};
use crate::io::{sha256_hex, write_atomic, Input};
use crate::manifest::{format_coverage, Manifest};
use crate::{ClusterOn, CoverageArgs, ExportArgs, ExportFormat, NormalizeArgs, OptimizeArgs, ReportArgs};

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::pipeline(Stage::Write, e.to_string()))
}

pub(crate) fn load_ontology(stage: Stage, path: &Path) -> Result<Ontology, CliError> {
    let input = Input::read(stage, "ontology", path)?;
    parse_owl(input.text(stage)?).map_err(|e| input.invalid(stage, e))
}

fn load_lexicon_file(stage: Stage, path: &Path) -> Result<Lexicon, CliError> {
    let input = Input::read(stage, "lexicon", path)?;
    load_lexicon(&input.bytes[..]).map_err(|e| input.invalid(stage, e))
}

pub fn cmd_coverage(args: &CoverageArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let ontology = load_ontology(Stage::Coverage, &args.ontology)?;
    let corpus = Input::read(Stage::Ingest, "corpus", &args.corpus)?;
    let records = parse_corpus(&corpus.bytes[..]).map_err(|e| corpus.invalid(Stage::Ingest, e))?;
    let lexicon = load_lexicon_file(Stage::Extract, &args.lexicon)?;
    let mentions = extract_all(&criterion_lines(&records), &lexicon)
        .map_err(|e| CliError::input(Stage::Extract, format!("{}: {e}", args.lexicon.display())))?;
    let (covered, total) = coverage_counts(&ontology, &mentions);
    emit(out, &format!("coverage: {} ({covered}/{total} mentions)\n", format_coverage(covered, total)))
}

pub fn cmd_optimize(args: &OptimizeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let input = Input::read(Stage::Optimize, "series", &args.series)?;
    let curve = read_curve(input.text(Stage::Optimize)?).map_err(|e| input.invalid(Stage::Optimize, e))?;
    curve.check().map_err(|e| input.invalid(Stage::Optimize, e))?;
    if curve.rows.is_empty() {
        return Err(input.invalid(Stage::Optimize, "series has no additions"));
    }
    let values = match args.cluster_on {
        ClusterOn::Gains => curve.gains(),
        ClusterOn::Cumulative => curve.cumulative(),
    };
    let result = jenks_breaks(&values, args.classes).map_err(|e| input.invalid(Stage::Optimize, e))?;
    let n = values.len();
    let p = match (args.cluster_on, args.classes) {
        (ClusterOn::Gains, 2) => threshold_from_gains(&values),
        (ClusterOn::Cumulative, 2) => threshold_from_cumulative(&values),
        // more classes: the top gain class, or the lowest cumulative class
        (ClusterOn::Gains, _) => Ok(if values.iter().all(|v| *v == values[0]) {
            n
        } else {
            n - result.class_boundaries.last().copied().unwrap_or(0)
        }),
        (ClusterOn::Cumulative, _) => Ok(result.class_boundaries.first().copied().unwrap_or(n)),
    }
    .map_err(|e| CliError::pipeline(Stage::Optimize, e.to_string()))?;
    let cutoff = if p == 0 { None } else { Some(curve.rows[p - 1].gain) };
    let mut text = format!(
        "p: {p}\nseries length: {n}\nclasses: {}\nclustered on: {}\nsdcm: {}\ngvf: {:.5}\n",
        args.classes,
        args.cluster_on.as_str(),
        result.sdcm,
        gvf(&values, &result),
    );
    match cutoff {
        Some(g) => text.push_str(&format!("gain cutoff: {g}\n")),
        None => text.push_str("gain cutoff: none\n"),
    }
    text.push_str(&format!("coverage at p: {:.4}\n", coverage_at(&curve, p)));
    emit(out, &text)
}

fn coverage_at(curve: &Curve, p: usize) -> f64 {
    if p == 0 {
        curve
            .baseline
            .unwrap_or_else(|| curve.rows.first().map(|r| r.cumulative - r.gain).unwrap_or(0.0))
    } else {
        curve.rows[p - 1].cumulative
    }
}

pub fn cmd_normalize(args: &NormalizeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let ontology = load_ontology(Stage::Load, &args.ontology)?;
    let lexicon = load_lexicon_file(Stage::Load, &args.lexicon)?;
    let store_in = Input::read(Stage::Load, "value sets", &args.valuesets)?;
    let store = ValuesetStore::load(&store_in.bytes[..]).map_err(|e| store_in.invalid(Stage::Load, e))?;
    let associations = match &args.associations {
        Some(path) => {
            let input = Input::read(Stage::Load, "associations", path)?;
            AssociationTable::load(&input.bytes[..], &ontology).map_err(|e| input.invalid(Stage::Load, e))?
        }
        None => AssociationTable::default(),
    };
    let result = normalize_term(&args.term, &ontology, &lexicon, &store, &associations).map_err(|e| match e {
        NormalizeError::NotFound { .. } => CliError::input(Stage::Normalize, e.to_string()),
        _ => CliError::pipeline(Stage::Normalize, e.to_string()),
    })?;
    let mut json = serde_json::to_string_pretty(&result).expect("result serializes");
    json.push('\n');
    emit(out, &json)
}

// Relative artifact references resolve against the manifest's directory
// first, then the working directory.
fn resolve(manifest: &Path, reference: &str) -> PathBuf {
    let p = Path::new(reference);
    if p.is_absolute() {
        return p.to_path_buf();
    }
    let beside = manifest.parent().unwrap_or(Path::new("")).join(p);
    if beside.exists() {
        beside
    } else {
        p.to_path_buf()
    }
}

pub fn cmd_report(args: &ReportArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let manifest_in = Input::read(Stage::Report, "manifest", &args.manifest)?;
    let manifest =
        Manifest::from_json(manifest_in.text(Stage::Report)?).map_err(|e| manifest_in.invalid(Stage::Report, e))?;

    if args.curve {
        let path = resolve(&args.manifest, &manifest.artifacts.curve);
        let input = Input::read(Stage::Report, "curve", &path)?;
        let text = input.text(Stage::Report)?;
        let curve = read_curve(text).map_err(|e| input.invalid(Stage::Report, e))?;
        curve.check().map_err(|e| input.invalid(Stage::Report, e))?;
        if curve.rows.len() != manifest.series_length {
            return Err(input.invalid(
                Stage::Report,
                format!("curve has {} additions, manifest records {}", curve.rows.len(), manifest.series_length),
            ));
        }
        return emit(out, text);
    }

    let ontology_path = args
        .ontology
        .clone()
        .unwrap_or_else(|| resolve(&args.manifest, &manifest.artifacts.ontology));
    let owl_in = Input::read(Stage::Report, "ontology", &ontology_path)?;
    let ontology = parse_owl(owl_in.text(Stage::Report)?).map_err(|e| owl_in.invalid(Stage::Report, e))?;
    let stats = ontology.stats();
    let c = &manifest.counts;
    let digest_note = if owl_in.sha256() == manifest.artifacts.ontology_sha256 {
        "matches manifest"
    } else {
        "differs from manifest"
    };
    let class_note = if c.total() == stats.class_count {
        "consistent"
    } else {
        "INCONSISTENT"
    };
    let m = &manifest.covered_mentions;
    let text = format!(
        "ontology: {} (sha256 {digest_note})\n\
         classes: {} = scaffold {} + seeded {} + added {} + manual {} [{class_note}]\n\
         logical axioms: {}\n\
         declaration axioms: {}\n\
         annotation properties: {}\n\
         annotation assertions: {}\n\
         seed size: {}\n\
         enrichment disabled: {}\n\
         threshold p: {} of {} (clustered on {}, cut {})\n\
         coverage: baseline {} ({}/{}), optimized {} ({}/{}), final {} ({}/{})\n\
         timestamp: {}\n",
        ontology_path.display(),
        stats.class_count,
        c.scaffold,
        c.seeded,
        c.added,
        c.manual,
        stats.logical_axiom_count,
        stats.declaration_axiom_count,
        stats.annotation_property_count,
        stats.annotation_assertion_count,
        manifest.config.seed_size,
        crate::pipeline::category_list(&manifest.config.enrichment_disabled),
        manifest.p,
        manifest.series_length,
        manifest.config.cluster_on,
        manifest.config.cut,
        manifest.coverage.baseline,
        m.baseline,
        m.total,
        manifest.coverage.optimized,
        m.optimized,
        m.total,
        manifest.coverage.final_,
        m.final_,
        m.total,
        manifest.timestamp,
    );
    emit(out, &text)
}

fn tsv_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\t', "\\t").replace('\n', "\\n").replace('\r', "\\r")
}

fn export_tsv(ontology: &Ontology) -> String {
    let mut s = String::from("concept_id\tcategory\tparent_id\tscaffold\tlabel\tannotations\n");
    for node in ontology.nodes() {
        let annotations: Vec<String> = node
            .annotations
            .pairs()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            node.concept_id,
            node.category,
            node.parent_id.as_deref().unwrap_or(""),
            node.scaffold,
            tsv_escape(&node.label),
            tsv_escape(&annotations.join("; ")),
        ));
    }
    s
}

pub fn cmd_export(args: &ExportArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let ontology = load_ontology(Stage::Export, &args.ontology)?;
    let text = match args.format {
        ExportFormat::Owl => serialize_owl(&ontology),
        ExportFormat::Tsv => export_tsv(&ontology),
        ExportFormat::Json => {
            let nodes: Vec<&ConceptNode> = ontology.nodes().collect();
            let mut s = serde_json::to_string_pretty(&nodes).expect("nodes serialize");
            s.push('\n');
            s
        }
    };
    match &args.out {
        Some(path) => {
            write_atomic(path, text.as_bytes())?;
            emit(out, &format!("wrote {} ({} classes, sha256 {})\n", path.display(), ontology.len(), sha256_hex(text.as_bytes())))
        }
        None => emit(out, &text),
    }
}
