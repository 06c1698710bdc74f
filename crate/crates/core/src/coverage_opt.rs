//! Frequency ranking, seed selection, the enrichment curve and coverage.
//!
//! Coverage is the share of entity mentions (tokens, not distinct concepts)
//! whose concept id is a class of the ontology. Enrichment walks every
//! non-seed concept of the enabled categories in one global queue ordered by
//! count descending, then category name, then concept id.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::Category;
use crate::lexicon::EntityMention;
use crate::ontology::{ConceptCatalog, Ontology, OntologyError};

#[derive(Debug, Error, PartialEq)]
pub enum CoverageError {
    #[error("threshold {p} exceeds series length {len}")]
    ThresholdOutOfRange { p: usize, len: usize },
    #[error("series addition {concept_id:?} is inconsistent with the frequency table")]
    Inconsistent { concept_id: String },
    #[error("line {line}: {message}")]
    Manual { line: usize, message: String },
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

/// Mention counts per category and concept.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    counts: BTreeMap<Category, BTreeMap<String, u64>>,
    total_mentions: u64,
}

impl FrequencyTable {
    pub fn total_mentions(&self) -> u64 {
        self.total_mentions
    }

    pub fn count(&self, category: Category, concept_id: &str) -> u64 {
        self.counts
            .get(&category)
            .and_then(|m| m.get(concept_id))
            .copied()
            .unwrap_or(0)
    }

    pub fn category(&self, category: Category) -> Option<&BTreeMap<String, u64>> {
        self.counts.get(&category)
    }

    /// (category, concept, count) in category then concept order.
    pub fn iter(&self) -> impl Iterator<Item = (Category, &str, u64)> {
        self.counts
            .iter()
            .flat_map(|(cat, m)| m.iter().map(move |(id, n)| (*cat, id.as_str(), *n)))
    }

    pub fn concept_count(&self) -> usize {
        self.counts.values().map(BTreeMap::len).sum()
    }

    /// Concepts of `category` in rank order: count descending, id ascending.
    pub fn ranked(&self, category: Category) -> Vec<(&str, u64)> {
        let mut v: Vec<(&str, u64)> = self
            .counts
            .get(&category)
            .map(|m| m.iter().map(|(id, n)| (id.as_str(), *n)).collect())
            .unwrap_or_default();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }

    fn add(&mut self, category: Category, concept_id: &str, n: u64) {
        *self
            .counts
            .entry(category)
            .or_default()
            .entry(concept_id.to_string())
            .or_insert(0) += n;
        self.total_mentions += n;
    }

    /// Adds the counts of `other` into `self`.
    pub fn merge(&mut self, other: &FrequencyTable) {
        for (cat, id, n) in other.iter() {
            self.add(cat, id, n);
        }
    }
}

pub fn count_frequencies(mentions: &[EntityMention]) -> FrequencyTable {
    let mut table = FrequencyTable::default();
    for m in mentions {
        table.add(m.category, &m.concept_id, 1);
    }
    table
}

/// Membership test used by [`coverage_score`].
pub trait ConceptSet {
    fn has_concept(&self, concept_id: &str) -> bool;
}

impl ConceptSet for BTreeSet<String> {
    fn has_concept(&self, concept_id: &str) -> bool {
        self.contains(concept_id)
    }
}

impl ConceptSet for HashSet<String> {
    fn has_concept(&self, concept_id: &str) -> bool {
        self.contains(concept_id)
    }
}

impl ConceptSet for Ontology {
    fn has_concept(&self, concept_id: &str) -> bool {
        self.contains(concept_id)
    }
}

/// Covered mention count and total mention count.
pub fn coverage_counts<S: ConceptSet + ?Sized>(concepts: &S, mentions: &[EntityMention]) -> (u64, u64) {
    let covered = mentions.iter().filter(|m| concepts.has_concept(&m.concept_id)).count();
    (covered as u64, mentions.len() as u64)
}

pub fn coverage_score<S: ConceptSet + ?Sized>(concepts: &S, mentions: &[EntityMention]) -> f64 {
    let (covered, total) = coverage_counts(concepts, mentions);
    ratio(covered, total)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// count descending, then category name, then concept id
    #[default]
    CountCategoryId,
}

impl TieBreak {
    pub fn as_str(self) -> &'static str {
        match self {
            TieBreak::CountCategoryId => "count-desc,category-asc,concept-id-asc",
        }
    }
}

/// How the threshold `p` is turned into ontology additions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdCut {
    /// The first `p` additions of the global enrichment series.
    #[default]
    GlobalPrefix,
    /// Every enabled category cut at `seed_size + p` concepts.
    PerCategory,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub seed_size: usize,
    pub jenks_class_count: usize,
    pub enrichment_disabled: BTreeSet<Category>,
    pub tie_break: TieBreak,
    pub cut: ThresholdCut,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed_size: 20,
            jenks_class_count: 2,
            enrichment_disabled: BTreeSet::from([Category::SDoH]),
            tie_break: TieBreak::default(),
            cut: ThresholdCut::default(),
        }
    }
}

impl PipelineConfig {
    pub fn enrichment_enabled(&self, category: Category) -> bool {
        !self.enrichment_disabled.contains(&category)
    }
}

/// Seed concepts per category, each list in rank order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSelection {
    pub per_category: BTreeMap<Category, Vec<String>>,
}

impl SeedSelection {
    pub fn concepts(&self) -> impl Iterator<Item = (Category, &str)> {
        self.per_category
            .iter()
            .flat_map(|(cat, ids)| ids.iter().map(move |id| (*cat, id.as_str())))
    }

    pub fn concept_set(&self) -> BTreeSet<String> {
        self.concepts().map(|(_, id)| id.to_string()).collect()
    }

    pub fn len(&self) -> usize {
        self.per_category.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The `k` most frequent concepts of each category.
pub fn select_seed(freqs: &FrequencyTable, k: usize) -> SeedSelection {
    let per_category = Category::ALL
        .into_iter()
        .filter_map(|cat| {
            let ids: Vec<String> = freqs
                .ranked(cat)
                .into_iter()
                .take(k)
                .map(|(id, _)| id.to_string())
                .collect();
            (!ids.is_empty()).then_some((cat, ids))
        })
        .collect();
    SeedSelection { per_category }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Addition {
    pub rank: usize,
    pub concept_id: String,
    pub category: Category,
    pub mentions: u64,
    pub gain: f64,
    pub cumulative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageSeries {
    pub total_mentions: u64,
    pub baseline_mentions: u64,
    pub baseline: f64,
    pub additions: Vec<Addition>,
}

impl CoverageSeries {
    pub fn len(&self) -> usize {
        self.additions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.additions.is_empty()
    }

    pub fn gains(&self) -> Vec<f64> {
        self.additions.iter().map(|a| a.gain).collect()
    }

    pub fn cumulative(&self) -> Vec<f64> {
        self.additions.iter().map(|a| a.cumulative).collect()
    }

    /// Coverage after the first `p` additions.
    pub fn coverage_at(&self, p: usize) -> f64 {
        if p == 0 {
            self.baseline
        } else {
            self.additions[p - 1].cumulative
        }
    }

    /// Checks the curve invariants: gains non-increasing, cumulative
    /// non-decreasing and equal to the running sum of gains.
    pub fn check(&self) -> Result<(), String> {
        check_curve(self.baseline, self.additions.iter().map(|a| (a.gain, a.cumulative)))
    }
}

/// Curve invariants over (gain, cumulative) rows starting from `baseline`.
pub fn check_curve(baseline: f64, rows: impl IntoIterator<Item = (f64, f64)>) -> Result<(), String> {
    let mut prev_gain = f64::INFINITY;
    let mut prev_cum = baseline;
    for (i, (gain, cum)) in rows.into_iter().enumerate() {
        let rank = i + 1;
        if !(0.0..=1.0).contains(&gain) || !(0.0..=1.0).contains(&cum) {
            return Err(format!("rank {rank}: values outside [0, 1]"));
        }
        if gain > prev_gain {
            return Err(format!("rank {rank}: gain {gain} exceeds previous gain {prev_gain}"));
        }
        if cum < prev_cum {
            return Err(format!("rank {rank}: cumulative {cum} decreases"));
        }
        if (prev_cum + gain - cum).abs() > 1e-12 {
            return Err(format!("rank {rank}: cumulative {cum} != {prev_cum} + {gain}"));
        }
        prev_gain = gain;
        prev_cum = cum;
    }
    Ok(())
}

pub fn enrichment_series(freqs: &FrequencyTable, seeds: &SeedSelection, config: &PipelineConfig) -> CoverageSeries {
    let seeded = seeds.concept_set();
    let baseline_mentions: u64 = seeds.concepts().map(|(cat, id)| freqs.count(cat, id)).sum();
    let total = freqs.total_mentions();

    let mut candidates: Vec<(Category, &str, u64)> = freqs
        .iter()
        .filter(|(cat, id, _)| config.enrichment_enabled(*cat) && !seeded.contains(*id))
        .collect();
    match config.tie_break {
        TieBreak::CountCategoryId => {
            candidates.sort_by(|a, b| b.2.cmp(&a.2).then(a.0.cmp(&b.0)).then_with(|| a.1.cmp(b.1)))
        }
    }

    let mut covered = baseline_mentions;
    let additions = candidates
        .into_iter()
        .enumerate()
        .map(|(i, (category, id, n))| {
            covered += n;
            Addition {
                rank: i + 1,
                concept_id: id.to_string(),
                category,
                mentions: n,
                gain: ratio(n, total),
                cumulative: ratio(covered, total),
            }
        })
        .collect();
    CoverageSeries {
        total_mentions: total,
        baseline_mentions,
        baseline: ratio(baseline_mentions, total),
        additions,
    }
}

/// Where new concepts attach, and the labels and annotations they carry.
#[derive(Debug, Clone, Copy)]
pub struct Placement<'a> {
    pub default_parents: &'a BTreeMap<Category, String>,
    pub catalog: &'a ConceptCatalog,
}

impl Placement<'_> {
    fn add(&self, ontology: &mut Ontology, category: Category, concept_id: &str) -> Result<(), OntologyError> {
        let parent = self.default_parents.get(&category).map(String::as_str);
        ontology.add_concept(
            concept_id,
            self.catalog.label(concept_id),
            category,
            parent,
            self.catalog.annotations(concept_id),
        )?;
        Ok(())
    }
}

/// Adds every seed concept to the ontology.
pub fn materialize_seed(ontology: &mut Ontology, seeds: &SeedSelection, placement: Placement<'_>) -> Result<(), CoverageError> {
    for (cat, id) in seeds.concepts() {
        placement.add(ontology, cat, id)?;
    }
    Ok(())
}

/// Materializes the first `p` additions of the series.
pub fn apply_threshold(
    series: &CoverageSeries,
    p: usize,
    ontology: &Ontology,
    freqs: &FrequencyTable,
    placement: Placement<'_>,
) -> Result<Ontology, CoverageError> {
    if p > series.len() {
        return Err(CoverageError::ThresholdOutOfRange { p, len: series.len() });
    }
    let mut out = ontology.clone();
    for a in &series.additions[..p] {
        if freqs.count(a.category, &a.concept_id) != a.mentions {
            return Err(CoverageError::Inconsistent { concept_id: a.concept_id.clone() });
        }
        placement.add(&mut out, a.category, &a.concept_id)?;
    }
    Ok(out)
}

/// Concepts beyond the seed that a per-category cut at `seed_size + p` adds,
/// in global series order.
pub fn per_category_additions(series: &CoverageSeries, freqs: &FrequencyTable, config: &PipelineConfig, p: usize) -> Vec<Addition> {
    let keep: BTreeSet<(Category, String)> = Category::ALL
        .into_iter()
        .filter(|c| config.enrichment_enabled(*c))
        .flat_map(|c| {
            freqs
                .ranked(c)
                .into_iter()
                .take(config.seed_size + p)
                .map(move |(id, _)| (c, id.to_string()))
        })
        .collect();
    series
        .additions
        .iter()
        .filter(|a| keep.contains(&(a.category, a.concept_id.clone())))
        .cloned()
        .collect()
}

/// Materializes a per-category cut.
pub fn apply_per_category_cut(
    series: &CoverageSeries,
    p: usize,
    ontology: &Ontology,
    freqs: &FrequencyTable,
    config: &PipelineConfig,
    placement: Placement<'_>,
) -> Result<Ontology, CoverageError> {
    let mut out = ontology.clone();
    for a in per_category_additions(series, freqs, config, p) {
        placement.add(&mut out, a.category, &a.concept_id)?;
    }
    Ok(out)
}

/// A concept added by hand after the data-driven threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManualAddition {
    pub concept_id: String,
    pub category: Category,
    pub parent: Option<String>,
    pub label: Option<String>,
}

/// Reads manual additions: TSV of `concept_id`, `category`, and optional
/// `parent` and `label` columns (empty means default).
pub fn load_manual_additions<R: BufRead>(reader: R) -> Result<Vec<ManualAddition>, CoverageError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| CoverageError::Manual { line: line_no, message: e.to_string() })?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if !(2..=4).contains(&cols.len()) {
            return Err(CoverageError::Manual {
                line: line_no,
                message: format!("expected 2 to 4 tab-separated columns, found {}", cols.len()),
            });
        }
        let category = cols[1]
            .parse()
            .map_err(|e: crate::category::UnknownCategory| CoverageError::Manual { line: line_no, message: e.to_string() })?;
        let opt = |i: usize| cols.get(i).filter(|s| !s.is_empty()).map(|s| s.to_string());
        out.push(ManualAddition {
            concept_id: cols[0].to_string(),
            category,
            parent: opt(2),
            label: opt(3),
        });
    }
    Ok(out)
}

pub fn apply_manual_additions(
    ontology: &Ontology,
    additions: &[ManualAddition],
    placement: Placement<'_>,
) -> Result<Ontology, CoverageError> {
    let mut out = ontology.clone();
    for m in additions {
        let parent = m
            .parent
            .as_deref()
            .or_else(|| placement.default_parents.get(&m.category).map(String::as_str));
        let label = m.label.as_deref().unwrap_or_else(|| placement.catalog.label(&m.concept_id));
        out.add_concept(&m.concept_id, label, m.category, parent, placement.catalog.annotations(&m.concept_id))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mention(concept: &str, category: Category) -> EntityMention {
        EntityMention {
            trial_id: "T".into(),
            line_index: 0,
            span: (0, 1),
            concept_id: concept.into(),
            category,
        }
    }

    fn table(rows: &[(Category, &str, u64)]) -> FrequencyTable {
        let mut t = FrequencyTable::default();
        for (c, id, n) in rows {
            t.add(*c, id, *n);
        }
        t
    }

    fn no_disabled(k: usize) -> PipelineConfig {
        PipelineConfig {
            seed_size: k,
            enrichment_disabled: BTreeSet::new(),
            ..PipelineConfig::default()
        }
    }

    #[test]
    fn counting() {
        assert_eq!(count_frequencies(&[]).total_mentions(), 0);
        let mut ms = vec![mention("Epilepsy", Category::Disease); 3];
        ms.push(mention("MMSE", Category::RatingCriteria));
        let t = count_frequencies(&ms);
        assert_eq!(t.count(Category::Disease, "Epilepsy"), 3);
        assert_eq!(t.count(Category::RatingCriteria, "MMSE"), 1);
        assert_eq!(t.total_mentions(), 4);
        assert_eq!(t.concept_count(), 2);
    }

    #[test]
    fn seed_tie_break_and_short_categories() {
        let t = table(&[
            (Category::Medication, "C", 1),
            (Category::Medication, "B", 3),
            (Category::Medication, "A", 3),
            (Category::Fertility, "F", 2),
        ]);
        let s = select_seed(&t, 2);
        assert_eq!(s.per_category[&Category::Medication], vec!["A", "B"]);
        assert_eq!(s.per_category[&Category::Fertility], vec!["F"]);
        assert!(select_seed(&t, 0).is_empty());
    }

    #[test]
    fn seed_takes_top_k() {
        let rows: Vec<(Category, String, u64)> =
            (0..25).map(|i| (Category::Procedure, format!("P{i:02}"), (i % 7 + 1) as u64)).collect();
        let t = table(&rows.iter().map(|(c, id, n)| (*c, id.as_str(), *n)).collect::<Vec<_>>());
        let s = select_seed(&t, 20);
        let picked = &s.per_category[&Category::Procedure];
        assert_eq!(picked.len(), 20);
        let min_in = picked.iter().map(|id| t.count(Category::Procedure, id)).min().unwrap();
        let max_out = rows
            .iter()
            .filter(|(_, id, _)| !picked.contains(id))
            .map(|(_, _, n)| *n)
            .max()
            .unwrap();
        assert!(min_in >= max_out);
    }

    #[test]
    fn coverage_examples() {
        let mut ms: Vec<_> = (0..6).map(|_| mention("A", Category::Disease)).collect();
        ms.extend((0..4).map(|_| mention("B", Category::Disease)));
        let set: BTreeSet<String> = ["A".to_string()].into();
        assert_eq!(coverage_score(&set, &ms), 0.6);
        assert_eq!(coverage_score(&BTreeSet::new(), &ms), 0.0);
        assert_eq!(coverage_score(&set, &[]), 0.0);
    }

    #[test]
    fn series_cumulative() {
        let t = table(&[
            (Category::Disease, "S", 50),
            (Category::Disease, "X", 20),
            (Category::Medication, "Y", 10),
            (Category::Procedure, "Z", 5),
            (Category::Procedure, "W", 15),
        ]);
        // seed S and W; total 100, baseline 0.65
        let seeds = SeedSelection {
            per_category: BTreeMap::from([
                (Category::Disease, vec!["S".to_string()]),
                (Category::Procedure, vec!["W".to_string()]),
            ]),
        };
        let cfg = PipelineConfig { enrichment_disabled: BTreeSet::new(), ..Default::default() };
        let s = enrichment_series(&t, &seeds, &cfg);
        assert_eq!(s.baseline_mentions, 65);
        assert_eq!(s.additions.iter().map(|a| a.concept_id.as_str()).collect::<Vec<_>>(), vec!["X", "Y", "Z"]);
        assert_eq!(s.cumulative(), vec![0.85, 0.95, 1.0]);
        s.check().unwrap();
    }

    #[test]
    fn series_from_baseline_half() {
        let t = table(&[
            (Category::Disease, "S", 50),
            (Category::Disease, "X", 20),
            (Category::Medication, "Y", 10),
            (Category::Procedure, "Z", 5),
            (Category::SDoH, "Q", 15),
        ]);
        let seeds = SeedSelection { per_category: BTreeMap::from([(Category::Disease, vec!["S".to_string()])]) };
        // SDoH disabled by default
        let s = enrichment_series(&t, &seeds, &PipelineConfig::default());
        assert_eq!(s.baseline, 0.5);
        assert_eq!(s.cumulative(), vec![0.7, 0.8, 0.85]);
    }

    #[test]
    fn gains_and_ties() {
        let t = table(&[
            (Category::Procedure, "b", 7),
            (Category::Disease, "z", 7),
            (Category::Disease, "c", 3),
            (Category::Disease, "s", 83),
        ]);
        let seeds = select_seed(&t, 0);
        let s = enrichment_series(&t, &seeds, &no_disabled(0));
        assert_eq!(s.len(), 4);
        let rest = SeedSelection { per_category: BTreeMap::from([(Category::Disease, vec!["s".to_string()])]) };
        let s = enrichment_series(&t, &rest, &no_disabled(1));
        assert_eq!(s.gains(), vec![0.07, 0.07, 0.03]);
        // equal counts: Disease sorts before Procedure
        assert_eq!(s.additions[0].concept_id, "z");
        assert_eq!(s.additions[1].concept_id, "b");
    }

    #[test]
    fn all_seeded_gives_empty_series() {
        let t = table(&[(Category::Disease, "A", 2), (Category::Medication, "B", 1)]);
        let seeds = select_seed(&t, 5);
        let s = enrichment_series(&t, &seeds, &no_disabled(5));
        assert!(s.is_empty());
        assert_eq!(s.baseline, 1.0);
    }

    #[test]
    fn threshold_application() {
        let t = table(&[(Category::Disease, "A", 5), (Category::Disease, "B", 3), (Category::Medication, "C", 2)]);
        let seeds = select_seed(&t, 0);
        let cfg = no_disabled(0);
        let s = enrichment_series(&t, &seeds, &cfg);
        let o = Ontology::with_roots(&BTreeMap::new());
        let parents = BTreeMap::new();
        let catalog = ConceptCatalog::new();
        let placement = Placement { default_parents: &parents, catalog: &catalog };

        assert_eq!(apply_threshold(&s, 0, &o, &t, placement).unwrap(), o);
        let full = apply_threshold(&s, s.len(), &o, &t, placement).unwrap();
        assert_eq!(full.len(), o.len() + 3);
        let two = apply_threshold(&s, 2, &o, &t, placement).unwrap();
        assert!(two.contains("A") && two.contains("B") && !two.contains("C"));
        assert!(matches!(
            apply_threshold(&s, 4, &o, &t, placement),
            Err(CoverageError::ThresholdOutOfRange { p: 4, len: 3 })
        ));
        let other = table(&[(Category::Disease, "A", 4)]);
        assert!(matches!(apply_threshold(&s, 1, &o, &other, placement), Err(CoverageError::Inconsistent { .. })));
    }

    #[test]
    fn per_category_cut_takes_top_k_plus_p() {
        let t = table(&[
            (Category::Disease, "A", 9),
            (Category::Disease, "B", 8),
            (Category::Disease, "C", 7),
            (Category::Medication, "M", 1),
            (Category::Medication, "N", 1),
        ]);
        let cfg = no_disabled(1);
        let seeds = select_seed(&t, 1);
        let s = enrichment_series(&t, &seeds, &cfg);
        let adds = per_category_additions(&s, &t, &cfg, 1);
        let ids: Vec<_> = adds.iter().map(|a| a.concept_id.as_str()).collect();
        assert_eq!(ids, vec!["B", "N"]);
    }

    #[test]
    fn manual_additions() {
        let rows = "# id\tcategory\tparent\tlabel\nApoE4\tDiagnosticTest\t\tAPOE e4 genotype\nLiving\tSDoH\n";
        let adds = load_manual_additions(rows.as_bytes()).unwrap();
        assert_eq!(adds.len(), 2);
        assert_eq!(adds[0].label.as_deref(), Some("APOE e4 genotype"));
        assert_eq!(adds[1].parent, None);
        let o = Ontology::with_roots(&BTreeMap::new());
        let parents = BTreeMap::new();
        let catalog = ConceptCatalog::new();
        let out = apply_manual_additions(&o, &adds, Placement { default_parents: &parents, catalog: &catalog }).unwrap();
        assert_eq!(out.get("ApoE4").unwrap().label, "APOE e4 genotype");
        assert!(matches!(load_manual_additions("x\n".as_bytes()), Err(CoverageError::Manual { line: 1, .. })));
        assert!(matches!(load_manual_additions("x\tFoo\n".as_bytes()), Err(CoverageError::Manual { line: 1, .. })));
    }
}
