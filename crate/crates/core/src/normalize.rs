//! Term normalization against a built ontology: lexicon lookup, annotation
//! retrieval, value-set expansion and related-entity lookup.
//!
//! Value-set store: TSV of `oid`, `title`, `code`, `code_system`, `display`.
//! Association table: TSV of `source_concept`, `relation_tag`,
//! `target_concept`. Both accept `#` comments and blank lines.

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::Serialize;
use thiserror::Error;

use crate::category::Category;
use crate::lexicon::{normalize_text, Lexicon};
use crate::ontology::{AnnotationSet, ConceptNode, Ontology};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("no lexicon entry for {term:?} (normalized {normalized:?})")]
    NotFound { term: String, normalized: String },
    #[error("surface {surface:?} maps to {concept_id:?}, which is not in the ontology")]
    Inconsistent { surface: String, concept_id: String },
    #[error("value set {oid} annotated on {concept_id:?} is not in the store")]
    MissingValueset { concept_id: String, oid: String },
    #[error("line {line}: {message}")]
    Load { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuesetMember {
    pub code: String,
    pub code_system: String,
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Valueset {
    pub title: String,
    pub members: Vec<ValuesetMember>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValuesetStore {
    sets: BTreeMap<String, Valueset>,
}

fn read_rows<R: BufRead>(reader: R, columns: usize) -> Result<Vec<(usize, Vec<String>)>, NormalizeError> {
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| NormalizeError::Load { line: line_no, message: e.to_string() })?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let cols: Vec<String> = line.split('\t').map(|c| c.trim().to_string()).collect();
        if cols.len() != columns {
            return Err(NormalizeError::Load {
                line: line_no,
                message: format!("expected {columns} tab-separated columns, found {}", cols.len()),
            });
        }
        if let Some(i) = cols.iter().take(columns.min(4)).position(String::is_empty) {
            return Err(NormalizeError::Load { line: line_no, message: format!("column {} is empty", i + 1) });
        }
        rows.push((line_no, cols));
    }
    Ok(rows)
}

impl ValuesetStore {
    pub fn load<R: BufRead>(reader: R) -> Result<Self, NormalizeError> {
        let mut sets: BTreeMap<String, Valueset> = BTreeMap::new();
        for (line, cols) in read_rows(reader, 5)? {
            let [oid, title, code, code_system, display]: [String; 5] = cols.try_into().expect("five columns");
            let mut probe = AnnotationSet::default();
            probe.has_valuesets.insert(oid.clone());
            probe.validate().map_err(|message| NormalizeError::Load { line, message })?;
            let set = sets.entry(oid.clone()).or_insert_with(|| Valueset { title: title.clone(), members: Vec::new() });
            if set.title != title {
                return Err(NormalizeError::Load {
                    line,
                    message: format!("value set {oid} has conflicting titles {:?} and {title:?}", set.title),
                });
            }
            if set.members.iter().any(|m| m.code == code && m.code_system == code_system) {
                return Err(NormalizeError::Load {
                    line,
                    message: format!("duplicate code {code_system}:{code} in value set {oid}"),
                });
            }
            set.members.push(ValuesetMember { code, code_system, display });
        }
        Ok(ValuesetStore { sets })
    }

    pub fn get(&self, oid: &str) -> Option<&Valueset> {
        self.sets.get(oid)
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Fails on the first annotated OID that the store cannot resolve.
    pub fn check_ontology(&self, ontology: &Ontology) -> Result<(), NormalizeError> {
        for node in ontology.nodes() {
            if let Some(oid) = node.annotations.has_valuesets.iter().find(|o| !self.sets.contains_key(*o)) {
                return Err(NormalizeError::MissingValueset { concept_id: node.concept_id.clone(), oid: oid.clone() });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ValuesetCode {
    pub code: String,
    pub code_system: String,
    pub oid: String,
}

/// Member codes of every value set annotated on `concept`, ordered by
/// (oid, code system, code).
pub fn expand_valuesets(concept: &ConceptNode, store: &ValuesetStore) -> Result<Vec<ValuesetCode>, NormalizeError> {
    let mut out = Vec::new();
    for oid in &concept.annotations.has_valuesets {
        let set = store.get(oid).ok_or_else(|| NormalizeError::MissingValueset {
            concept_id: concept.concept_id.clone(),
            oid: oid.clone(),
        })?;
        out.extend(set.members.iter().map(|m| ValuesetCode {
            code: m.code.clone(),
            code_system: m.code_system.clone(),
            oid: oid.clone(),
        }));
    }
    out.sort_by(|a, b| (&a.oid, &a.code_system, &a.code).cmp(&(&b.oid, &b.code_system, &b.code)));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Related {
    pub concept_id: String,
    pub relation_tag: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssociationTable {
    rows: BTreeMap<String, Vec<Related>>,
}

impl AssociationTable {
    /// Loads associations; both endpoints of every row must be classes of
    /// `ontology`.
    pub fn load<R: BufRead>(reader: R, ontology: &Ontology) -> Result<Self, NormalizeError> {
        let mut rows: BTreeMap<String, Vec<Related>> = BTreeMap::new();
        for (line, cols) in read_rows(reader, 3)? {
            let [source, tag, target]: [String; 3] = cols.try_into().expect("three columns");
            for endpoint in [&source, &target] {
                if !ontology.contains(endpoint) {
                    return Err(NormalizeError::Load {
                        line,
                        message: format!("association endpoint {endpoint:?} is not in the ontology"),
                    });
                }
            }
            let entry = rows.entry(source).or_default();
            let rel = Related { concept_id: target, relation_tag: tag };
            if !entry.contains(&rel) {
                entry.push(rel);
            }
        }
        Ok(AssociationTable { rows })
    }
}

/// Association rows of `concept_id`, ordered by (relation tag, concept id).
pub fn related_entities(concept_id: &str, associations: &AssociationTable) -> Vec<Related> {
    let mut out = associations.rows.get(concept_id).cloned().unwrap_or_default();
    out.sort_by(|a, b| (&a.relation_tag, &a.concept_id).cmp(&(&b.relation_tag, &b.concept_id)));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelatedEntry {
    pub concept_id: String,
    pub relation_tag: String,
    pub label: String,
    pub category: Category,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizationResult {
    pub input: String,
    pub matched_surface: String,
    pub concept_id: String,
    pub label: String,
    pub category: Category,
    pub annotations: AnnotationSet,
    pub valueset_codes: Vec<ValuesetCode>,
    pub related: Vec<RelatedEntry>,
}

pub fn normalize_term(
    term: &str,
    ontology: &Ontology,
    lexicon: &Lexicon,
    valuesets: &ValuesetStore,
    associations: &AssociationTable,
) -> Result<NormalizationResult, NormalizeError> {
    let normalized = normalize_text(term);
    let entry = lexicon.get(&normalized).ok_or_else(|| NormalizeError::NotFound {
        term: term.to_string(),
        normalized: normalized.clone(),
    })?;
    let node = ontology.get(&entry.concept_id).ok_or_else(|| NormalizeError::Inconsistent {
        surface: entry.surface_form.clone(),
        concept_id: entry.concept_id.clone(),
    })?;
    let valueset_codes = expand_valuesets(node, valuesets)?;
    let related = related_entities(&node.concept_id, associations)
        .into_iter()
        .map(|r| {
            let target = ontology.get(&r.concept_id).expect("association endpoints checked at load");
            RelatedEntry {
                label: target.label.clone(),
                category: target.category,
                concept_id: r.concept_id,
                relation_tag: r.relation_tag,
            }
        })
        .collect();
    Ok(NormalizationResult {
        input: term.to_string(),
        matched_surface: entry.surface_form.clone(),
        concept_id: node.concept_id.clone(),
        label: node.label.clone(),
        category: node.category,
        annotations: node.annotations.clone(),
        valueset_codes,
        related,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::load_lexicon;

    const STORE: &str = "\
# oid\ttitle\tcode\tcode_system\tdisplay
2.16.840.1.1\tDementia\tG30.9\tICD10CM\tAlzheimer's disease, unspecified
2.16.840.1.1\tDementia\t26929004\tSNOMEDCT\tAlzheimer's disease
2.16.840.1.1\tDementia\tG30.0\tICD10CM\tAlzheimer's disease with early onset
2.16.840.1.2\tEpilepsy\t84757009\tSNOMEDCT\tEpilepsy
";

    fn ontology() -> Ontology {
        let mut o = Ontology::with_roots(&BTreeMap::new());
        let mut ad = AnnotationSet::default();
        ad.set("hasUMLS", "C0002395").unwrap();
        ad.set("hasValuesets", "2.16.840.1.1").unwrap();
        o.add_concept("AlzheimersDisease", "Alzheimer's Disease", Category::Disease, None, ad).unwrap();
        o.add_concept("Donepezil", "donepezil", Category::Medication, None, AnnotationSet::default()).unwrap();
        o.add_concept("MMSE", "Mini-Mental State Examination", Category::RatingCriteria, None, AnnotationSet::default())
            .unwrap();
        o
    }

    fn lexicon() -> Lexicon {
        load_lexicon(
            "AD\tAlzheimersDisease\tDisease\nAlzheimer's disease\tAlzheimersDisease\tDisease\nghost\tGhost\tDisease\n"
                .as_bytes(),
        )
        .unwrap()
    }

    #[test]
    fn expand_in_canonical_order() {
        let store = ValuesetStore::load(STORE.as_bytes()).unwrap();
        let o = ontology();
        let codes = expand_valuesets(o.get("AlzheimersDisease").unwrap(), &store).unwrap();
        let flat: Vec<_> = codes.iter().map(|c| format!("{}:{}", c.code_system, c.code)).collect();
        assert_eq!(flat, vec!["ICD10CM:G30.0", "ICD10CM:G30.9", "SNOMEDCT:26929004"]);
        assert!(expand_valuesets(o.get("Donepezil").unwrap(), &store).unwrap().is_empty());
    }

    #[test]
    fn missing_valueset() {
        let store = ValuesetStore::load("2.16.840.1.2\tEpilepsy\t84757009\tSNOMEDCT\tEpilepsy\n".as_bytes()).unwrap();
        let o = ontology();
        assert_eq!(
            expand_valuesets(o.get("AlzheimersDisease").unwrap(), &store),
            Err(NormalizeError::MissingValueset { concept_id: "AlzheimersDisease".into(), oid: "2.16.840.1.1".into() })
        );
        assert!(store.check_ontology(&o).is_err());
    }

    #[test]
    fn store_validation() {
        assert!(ValuesetStore::load("1.2\tA\tx\tS\td\n1.2\tB\ty\tS\td\n".as_bytes()).is_err());
        assert!(ValuesetStore::load("1.2\tA\tx\tS\td\n1.2\tA\tx\tS\td2\n".as_bytes()).is_err());
        assert!(ValuesetStore::load("abc\tA\tx\tS\td\n".as_bytes()).is_err());
        assert!(ValuesetStore::load("1.2\tA\tx\tS\n".as_bytes()).is_err());
    }

    #[test]
    fn associations() {
        let o = ontology();
        let table = AssociationTable::load(
            "AlzheimersDisease\ttreated_by\tDonepezil\nAlzheimersDisease\tassessed_by\tMMSE\n".as_bytes(),
            &o,
        )
        .unwrap();
        let rel = related_entities("AlzheimersDisease", &table);
        assert_eq!(rel[0].relation_tag, "assessed_by");
        assert_eq!(rel[1].relation_tag, "treated_by");
        assert!(related_entities("MMSE", &table).is_empty());
        assert!(matches!(
            AssociationTable::load("AlzheimersDisease\ttreated_by\tNope\n".as_bytes(), &o),
            Err(NormalizeError::Load { line: 1, .. })
        ));
    }

    #[test]
    fn normalize_abbreviation() {
        let o = ontology();
        let store = ValuesetStore::load(STORE.as_bytes()).unwrap();
        let table = AssociationTable::load("AlzheimersDisease\ttreated_by\tDonepezil\n".as_bytes(), &o).unwrap();
        let r = normalize_term("AD", &o, &lexicon(), &store, &table).unwrap();
        assert_eq!(r.concept_id, "AlzheimersDisease");
        assert_eq!(r.label, "Alzheimer's Disease");
        assert_eq!(r.category, Category::Disease);
        assert_eq!(r.matched_surface, "ad");
        assert_eq!(r.valueset_codes.len(), 3);
        assert_eq!(r.related[0].category, Category::Medication);

        // the label is itself a surface form and resolves to the same concept
        let again = normalize_term(&r.label, &o, &lexicon(), &store, &table).unwrap();
        assert_eq!(again.concept_id, r.concept_id);
    }

    #[test]
    fn normalize_errors() {
        let o = ontology();
        let store = ValuesetStore::load(STORE.as_bytes()).unwrap();
        let table = AssociationTable::default();
        assert!(matches!(
            normalize_term("zzz-unknown", &o, &lexicon(), &store, &table),
            Err(NormalizeError::NotFound { .. })
        ));
        assert!(matches!(
            normalize_term("Ghost", &o, &lexicon(), &store, &table),
            Err(NormalizeError::Inconsistent { .. })
        ));
    }
}
