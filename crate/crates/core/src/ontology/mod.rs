//! Ontology data model: seven category trees of OWL classes carrying
//! cross-vocabulary annotations.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::Category;

mod catalog;
mod owl;
mod scaffold;

pub use catalog::{load_catalog, CatalogEntry, CatalogError, ConceptCatalog};
pub use owl::{parse_owl, serialize_owl, OwlError};
pub use scaffold::{load_scaffold, ScaffoldClass, ScaffoldConfig, ScaffoldRoot};

/// Namespace every class and annotation property IRI is minted under.
pub const BASE_IRI: &str = "https://w3id.org/trialonto#";
/// IRI of the ontology itself.
pub const ONTOLOGY_IRI: &str = "https://w3id.org/trialonto";

/// The annotation properties, in declaration order.
pub const ANNOTATION_PROPERTIES: [&str; 6] = [
    "hasUMLS",
    "hasAthenaID",
    "hasBrandName",
    "hasDrugBankCategory",
    "hasNDC",
    "hasValuesets",
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OntologyError {
    #[error("duplicate concept id {0:?}")]
    DuplicateId(String),
    #[error("concept {concept:?} ({category}) cannot be placed under {parent:?} ({parent_category})")]
    CategoryViolation {
        concept: String,
        category: Category,
        parent: String,
        parent_category: Category,
    },
    #[error("parent {parent:?} of {concept:?} does not exist")]
    MissingParent { concept: String, parent: String },
    #[error("adding {0:?} would create a cycle")]
    Cycle(String),
    #[error("invalid concept id {0:?}")]
    InvalidId(String),
    #[error("{concept:?}: {message}")]
    InvalidAnnotation { concept: String, message: String },
    #[error("scaffold: {0}")]
    Scaffold(String),
}

static CUI: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^C[0-9]{7}$").unwrap());
static OID: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[0-9]+(\.[0-9]+)*$").unwrap());
static CONCEPT_ID: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[A-Za-z0-9_]([A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?$").unwrap());

fn valid_ndc(code: &str) -> bool {
    let digits = code.chars().filter(char::is_ascii_digit).count();
    code.chars().all(|c| c.is_ascii_digit() || c == '-')
        && !code.starts_with('-')
        && !code.ends_with('-')
        && !code.contains("--")
        && (digits == 10 || digits == 11)
}

pub fn is_valid_concept_id(id: &str) -> bool {
    CONCEPT_ID.is_match(id)
}

/// Cross-vocabulary annotations. List-valued properties are kept as sorted
/// sets so that equal annotation content compares equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationSet {
    pub has_umls: Option<String>,
    pub has_athena_id: Option<u64>,
    pub has_brand_name: BTreeSet<String>,
    pub has_drugbank_category: BTreeSet<String>,
    pub has_ndc: BTreeSet<String>,
    pub has_valuesets: BTreeSet<String>,
}

impl AnnotationSet {
    pub fn is_empty(&self) -> bool {
        self.has_umls.is_none()
            && self.has_athena_id.is_none()
            && self.has_brand_name.is_empty()
            && self.has_drugbank_category.is_empty()
            && self.has_ndc.is_empty()
            && self.has_valuesets.is_empty()
    }

    pub fn validate(&self) -> Result<(), String> {
        if let Some(cui) = &self.has_umls {
            if !CUI.is_match(cui) {
                return Err(format!("hasUMLS value {cui:?} is not a CUI"));
            }
        }
        if self.has_athena_id == Some(0) {
            return Err("hasAthenaID must be positive".into());
        }
        if let Some(oid) = self.has_valuesets.iter().find(|o| !OID.is_match(o)) {
            return Err(format!("hasValuesets value {oid:?} is not an OID"));
        }
        if let Some(ndc) = self.has_ndc.iter().find(|c| !valid_ndc(c)) {
            return Err(format!("hasNDC value {ndc:?} is not a 10 or 11 digit NDC"));
        }
        for (name, set) in [("hasBrandName", &self.has_brand_name), ("hasDrugBankCategory", &self.has_drugbank_category)] {
            if set.iter().any(|v| v.trim().is_empty()) {
                return Err(format!("{name} has an empty value"));
            }
        }
        Ok(())
    }

    /// Sets one property from its string form. List properties accumulate.
    pub fn set(&mut self, property: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        match property {
            "hasUMLS" => self.has_umls = Some(value.to_string()),
            "hasAthenaID" => {
                self.has_athena_id = Some(
                    value
                        .parse()
                        .map_err(|_| format!("hasAthenaID value {value:?} is not a positive integer"))?,
                )
            }
            "hasBrandName" => {
                self.has_brand_name.insert(value.to_string());
            }
            "hasDrugBankCategory" => {
                self.has_drugbank_category.insert(value.to_string());
            }
            "hasNDC" => {
                self.has_ndc.insert(value.to_string());
            }
            "hasValuesets" => {
                self.has_valuesets.insert(value.to_string());
            }
            other => return Err(format!("unknown annotation property {other:?}")),
        }
        Ok(())
    }

    /// (property name, value) pairs in declaration order; lists sorted.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if let Some(v) = &self.has_umls {
            out.push(("hasUMLS", v.clone()));
        }
        if let Some(v) = self.has_athena_id {
            out.push(("hasAthenaID", v.to_string()));
        }
        out.extend(self.has_brand_name.iter().map(|v| ("hasBrandName", v.clone())));
        out.extend(self.has_drugbank_category.iter().map(|v| ("hasDrugBankCategory", v.clone())));
        out.extend(self.has_ndc.iter().map(|v| ("hasNDC", v.clone())));
        out.extend(self.has_valuesets.iter().map(|v| ("hasValuesets", v.clone())));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptNode {
    pub concept_id: String,
    pub label: String,
    pub category: Category,
    pub parent_id: Option<String>,
    pub annotations: AnnotationSet,
    /// Structural class from the scaffold rather than a data-derived concept.
    pub scaffold: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OntologyStats {
    pub class_count: usize,
    pub logical_axiom_count: usize,
    pub declaration_axiom_count: usize,
    pub annotation_property_count: usize,
    pub annotation_assertion_count: usize,
}

/// Seven category trees. Each root's concept id is its category name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ontology {
    nodes: BTreeMap<String, ConceptNode>,
}

impl Ontology {
    /// An ontology holding only the seven category roots.
    pub fn with_roots(labels: &BTreeMap<Category, String>) -> Self {
        let nodes = Category::ALL
            .into_iter()
            .map(|cat| {
                let id = cat.as_str().to_string();
                let label = labels.get(&cat).cloned().unwrap_or_else(|| id.clone());
                (
                    id.clone(),
                    ConceptNode {
                        concept_id: id,
                        label,
                        category: cat,
                        parent_id: None,
                        annotations: AnnotationSet::default(),
                        scaffold: true,
                    },
                )
            })
            .collect();
        Ontology { nodes }
    }

    pub fn declared_annotation_properties(&self) -> &'static [&'static str; 6] {
        &ANNOTATION_PROPERTIES
    }

    pub fn root_id(category: Category) -> &'static str {
        category.as_str()
    }

    pub fn get(&self, concept_id: &str) -> Option<&ConceptNode> {
        self.nodes.get(concept_id)
    }

    pub fn contains(&self, concept_id: &str) -> bool {
        self.nodes.contains_key(concept_id)
    }

    /// Nodes ordered by concept id.
    pub fn nodes(&self) -> impl Iterator<Item = &ConceptNode> {
        self.nodes.values()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn concept_ids(&self) -> BTreeSet<String> {
        self.nodes.keys().cloned().collect()
    }

    pub fn children<'a>(&'a self, parent: &'a str) -> impl Iterator<Item = &'a ConceptNode> + 'a {
        self.nodes
            .values()
            .filter(move |n| n.parent_id.as_deref() == Some(parent))
    }

    /// Adds a node; `parent_id = None` attaches it directly under its
    /// category root.
    pub fn add_concept(
        &mut self,
        concept_id: &str,
        label: &str,
        category: Category,
        parent_id: Option<&str>,
        annotations: AnnotationSet,
    ) -> Result<&ConceptNode, OntologyError> {
        self.insert_node(concept_id, label, category, parent_id, annotations, false)
    }

    pub(crate) fn insert_node(
        &mut self,
        concept_id: &str,
        label: &str,
        category: Category,
        parent_id: Option<&str>,
        annotations: AnnotationSet,
        scaffold: bool,
    ) -> Result<&ConceptNode, OntologyError> {
        let parent = parent_id.unwrap_or(category.as_str());
        if parent == concept_id {
            return Err(OntologyError::Cycle(concept_id.to_string()));
        }
        if self.nodes.contains_key(concept_id) {
            return Err(OntologyError::DuplicateId(concept_id.to_string()));
        }
        if !is_valid_concept_id(concept_id) {
            return Err(OntologyError::InvalidId(concept_id.to_string()));
        }
        let parent_node = self.nodes.get(parent).ok_or_else(|| OntologyError::MissingParent {
            concept: concept_id.to_string(),
            parent: parent.to_string(),
        })?;
        if parent_node.category != category {
            return Err(OntologyError::CategoryViolation {
                concept: concept_id.to_string(),
                category,
                parent: parent.to_string(),
                parent_category: parent_node.category,
            });
        }
        annotations.validate().map_err(|message| OntologyError::InvalidAnnotation {
            concept: concept_id.to_string(),
            message,
        })?;
        let label = if label.trim().is_empty() { concept_id } else { label };
        let node = ConceptNode {
            concept_id: concept_id.to_string(),
            label: label.to_string(),
            category,
            parent_id: Some(parent.to_string()),
            annotations,
            scaffold,
        };
        Ok(self.nodes.entry(concept_id.to_string()).or_insert(node))
    }

    pub fn stats(&self) -> OntologyStats {
        let class_count = self.nodes.len();
        let annotation_property_count = ANNOTATION_PROPERTIES.len();
        OntologyStats {
            class_count,
            logical_axiom_count: self.nodes.values().filter(|n| n.parent_id.is_some()).count(),
            declaration_axiom_count: class_count + annotation_property_count,
            annotation_property_count,
            annotation_assertion_count: self
                .nodes
                .values()
                .map(|n| 1 + usize::from(n.scaffold) + n.annotations.pairs().len())
                .sum(),
        }
    }

    /// Number of nodes flagged as scaffold classes (roots included).
    pub fn scaffold_count(&self) -> usize {
        self.nodes.values().filter(|n| n.scaffold).count()
    }

    /// Path from `concept_id` up to its category root, inclusive.
    pub fn ancestors(&self, concept_id: &str) -> Vec<&ConceptNode> {
        let mut out = Vec::new();
        let mut cur = self.nodes.get(concept_id);
        while let Some(node) = cur {
            if out.len() > self.nodes.len() {
                break;
            }
            out.push(node);
            cur = node.parent_id.as_deref().and_then(|p| self.nodes.get(p));
        }
        out
    }
}
