//! Per-concept labels and annotations applied when data-derived concepts are
//! materialized as classes.
//!
//! TSV with three columns: `concept_id`, `property`, `value`. `property` is
//! `label` or one of the six annotation property names; list-valued
//! properties may repeat. `#` comments and blank lines are ignored.

use std::collections::BTreeMap;
use std::io::BufRead;

use thiserror::Error;

use super::AnnotationSet;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: expected 3 tab-separated columns, found {found}")]
    Columns { line: usize, found: usize },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("line {line}: read failed: {source}")]
    Io {
        line: usize,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CatalogEntry {
    pub label: Option<String>,
    pub annotations: AnnotationSet,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConceptCatalog {
    entries: BTreeMap<String, CatalogEntry>,
}

impl ConceptCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, concept_id: &str) -> Option<&CatalogEntry> {
        self.entries.get(concept_id)
    }

    pub fn label<'a>(&'a self, concept_id: &'a str) -> &'a str {
        self.entries
            .get(concept_id)
            .and_then(|e| e.label.as_deref())
            .unwrap_or(concept_id)
    }

    pub fn annotations(&self, concept_id: &str) -> AnnotationSet {
        self.entries
            .get(concept_id)
            .map(|e| e.annotations.clone())
            .unwrap_or_default()
    }

    pub fn set(&mut self, concept_id: &str, property: &str, value: &str) -> Result<(), String> {
        let entry = self.entries.entry(concept_id.to_string()).or_default();
        if property == "label" {
            if entry.label.is_some() {
                return Err(format!("{concept_id:?} has more than one label"));
            }
            entry.label = Some(value.trim().to_string());
            return Ok(());
        }
        let single = matches!(property, "hasUMLS" | "hasAthenaID");
        if single
            && ((property == "hasUMLS" && entry.annotations.has_umls.is_some())
                || (property == "hasAthenaID" && entry.annotations.has_athena_id.is_some()))
        {
            return Err(format!("{concept_id:?} has more than one {property}"));
        }
        entry.annotations.set(property, value)?;
        entry.annotations.validate().map_err(|m| format!("{concept_id:?}: {m}"))
    }
}

pub fn load_catalog<R: BufRead>(reader: R) -> Result<ConceptCatalog, CatalogError> {
    let mut catalog = ConceptCatalog::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| CatalogError::Io { line: line_no, source })?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(CatalogError::Columns { line: line_no, found: cols.len() });
        }
        catalog
            .set(cols[0].trim(), cols[1].trim(), cols[2])
            .map_err(|message| CatalogError::Invalid { line: line_no, message })?;
    }
    Ok(catalog)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_labels_and_lists() {
        let text = "# id\tprop\tvalue\nEpilepsy\tlabel\tEpilepsy\nEpilepsy\thasUMLS\tC0014544\n\
                    Epilepsy\thasValuesets\t2.16.1\nEpilepsy\thasValuesets\t2.16.2\n";
        let c = load_catalog(text.as_bytes()).unwrap();
        assert_eq!(c.label("Epilepsy"), "Epilepsy");
        assert_eq!(c.label("Other"), "Other");
        assert_eq!(c.annotations("Epilepsy").has_valuesets.len(), 2);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(matches!(
            load_catalog("A\thasUMLS\tX123\n".as_bytes()),
            Err(CatalogError::Invalid { line: 1, .. })
        ));
        assert!(matches!(
            load_catalog("A\thasUMLS\tC0000001\nA\thasUMLS\tC0000002\n".as_bytes()),
            Err(CatalogError::Invalid { line: 2, .. })
        ));
        assert!(matches!(load_catalog("A\tlabel\n".as_bytes()), Err(CatalogError::Columns { .. })));
        assert!(matches!(load_catalog("A\tsynonym\tx\n".as_bytes()), Err(CatalogError::Invalid { .. })));
    }
}
