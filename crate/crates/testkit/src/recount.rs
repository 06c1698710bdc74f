//! Plain recounts used to cross-check library statistics.

use std::collections::{BTreeSet, VecDeque};

use trialonto_core::lexicon::EntityMention;
use trialonto_core::ontology::Ontology;
use trialonto_core::Category;

/// Covered and total mention counts by walking every mention.
pub fn recount_coverage(concepts: &BTreeSet<String>, mentions: &[EntityMention]) -> (u64, u64) {
    let mut covered = 0u64;
    let mut total = 0u64;
    for m in mentions {
        total += 1;
        if concepts.contains(&m.concept_id) {
            covered += 1;
        }
    }
    (covered, total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Traversal {
    pub reached: usize,
    pub edges: usize,
}

/// Breadth-first walk down from the seven roots, counting nodes reached and
/// parent links followed. Fails if a node is reached twice.
pub fn traverse(ontology: &Ontology) -> Result<Traversal, String> {
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<String> = Category::ALL.iter().map(|c| c.as_str().to_string()).collect();
    let mut edges = 0;
    while let Some(id) = queue.pop_front() {
        if !seen.insert(id.clone()) {
            return Err(format!("{id} reached twice"));
        }
        for child in ontology.children(&id) {
            edges += 1;
            queue.push_back(child.concept_id.clone());
        }
    }
    Ok(Traversal { reached: seen.len(), edges })
}

/// Counts axiom lines in serialized functional syntax by their leading
/// keyword.
pub fn count_owl_lines(text: &str) -> (usize, usize, usize, usize) {
    let mut class_decl = 0;
    let mut prop_decl = 0;
    let mut subclass = 0;
    let mut assertions = 0;
    for line in text.lines() {
        let l = line.trim_start();
        if l.starts_with("Declaration(Class(") {
            class_decl += 1;
        } else if l.starts_with("Declaration(AnnotationProperty(") {
            prop_decl += 1;
        } else if l.starts_with("SubClassOf(") {
            subclass += 1;
        } else if l.starts_with("AnnotationAssertion(") {
            assertions += 1;
        }
    }
    (class_decl, prop_decl, subclass, assertions)
}
