//! Scaffold configuration: the seven category roots and their structural
//! subclasses, supplied as TOML.
//!
//! ```toml
//! [[root]]
//! category = "Procedure"
//! label = "Procedure"
//! default_parent = "OtherProcedure"   # optional; where new concepts attach
//!
//! [[class]]
//! id = "SurgicalProcedure"
//! label = "surgical procedure"
//! category = "Procedure"
//! parent = "Procedure"                # optional; defaults to the category root
//! ```

use std::collections::{BTreeMap, HashSet};
use std::io::Read;

use serde::Deserialize;

use super::{AnnotationSet, Ontology, OntologyError};
use crate::category::Category;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaffoldRoot {
    pub category: Category,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub default_parent: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaffoldClass {
    pub id: String,
    #[serde(default)]
    pub label: Option<String>,
    pub category: Category,
    #[serde(default)]
    pub parent: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaffoldConfig {
    #[serde(default, rename = "root")]
    pub roots: Vec<ScaffoldRoot>,
    #[serde(default, rename = "class")]
    pub classes: Vec<ScaffoldClass>,
}

impl ScaffoldConfig {
    pub fn parse(text: &str) -> Result<Self, OntologyError> {
        toml::from_str(text).map_err(|e| OntologyError::Scaffold(e.to_string()))
    }

    /// Where data-derived concepts of `category` attach by default.
    pub fn default_parent(&self, category: Category) -> &str {
        self.roots
            .iter()
            .find(|r| r.category == category)
            .and_then(|r| r.default_parent.as_deref())
            .unwrap_or(category.as_str())
    }

    pub fn default_parents(&self) -> BTreeMap<Category, String> {
        Category::ALL
            .into_iter()
            .map(|c| (c, self.default_parent(c).to_string()))
            .collect()
    }

    /// Validates the config and builds the scaffold-only ontology.
    pub fn build(&self) -> Result<Ontology, OntologyError> {
        let mut labels = BTreeMap::new();
        for root in &self.roots {
            let label = root.label.clone().unwrap_or_else(|| root.category.to_string());
            if labels.insert(root.category, label).is_some() {
                return Err(OntologyError::Scaffold(format!("category {} declared twice", root.category)));
            }
        }
        if let Some(missing) = Category::ALL.into_iter().find(|c| !labels.contains_key(c)) {
            return Err(OntologyError::Scaffold(format!("missing category root {missing}")));
        }
        let mut ontology = Ontology::with_roots(&labels);

        let mut seen = HashSet::new();
        for class in &self.classes {
            if ontology.contains(&class.id) || !seen.insert(class.id.as_str()) {
                return Err(OntologyError::DuplicateId(class.id.clone()));
            }
        }

        // Insert in dependency order; classes may be listed before their parents.
        let mut pending: Vec<&ScaffoldClass> = self.classes.iter().collect();
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for class in pending {
                let parent = class.parent.as_deref().unwrap_or(class.category.as_str());
                if ontology.contains(parent) {
                    ontology.insert_node(
                        &class.id,
                        class.label.as_deref().unwrap_or(&class.id),
                        class.category,
                        Some(parent),
                        AnnotationSet::default(),
                        true,
                    )?;
                } else {
                    rest.push(class);
                }
            }
            if rest.len() == before {
                let ids: HashSet<&str> = rest.iter().map(|c| c.id.as_str()).collect();
                let class = rest[0];
                let parent = class.parent.clone().unwrap_or_default();
                return Err(if ids.contains(parent.as_str()) {
                    OntologyError::Cycle(class.id.clone())
                } else {
                    OntologyError::MissingParent { concept: class.id.clone(), parent }
                });
            }
            pending = rest;
        }

        for root in &self.roots {
            if let Some(dp) = &root.default_parent {
                match ontology.get(dp) {
                    Some(node) if node.category == root.category => {}
                    _ => {
                        return Err(OntologyError::Scaffold(format!(
                            "default parent {dp:?} is not a {} class",
                            root.category
                        )))
                    }
                }
            }
        }
        Ok(ontology)
    }
}

/// Reads a scaffold config and builds its ontology.
pub fn load_scaffold<R: Read>(mut reader: R) -> Result<(ScaffoldConfig, Ontology), OntologyError> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| OntologyError::Scaffold(e.to_string()))?;
    let config = ScaffoldConfig::parse(&text)?;
    let ontology = config.build()?;
    Ok((config, ontology))
}
