//! Surface-form lexicon and dictionary-based mention extraction.
//!
//! Lexicon files are UTF-8 TSV with three columns (`surface_form`,
//! `concept_id`, `category`). Lines starting with `#` and blank lines are
//! ignored. Surface forms are normalized on load.

use std::collections::HashMap;
use std::io::BufRead;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

use crate::category::Category;
use crate::corpus::CriterionLine;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: expected 3 tab-separated columns, found {found}")]
    Columns { line: usize, found: usize },
    #[error("line {line}: {message}")]
    Validation { line: usize, message: String },
    #[error("line {line}: duplicate surface form {surface:?}")]
    DuplicateSurface { line: usize, surface: String },
    #[error("line {line}: read failed: {source}")]
    Io {
        line: usize,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon is empty")]
    Empty,
}

// Unicode punctuation other than the apostrophes and hyphen-minus.
static PUNCT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[\p{P}&&[^'’\-]]").unwrap());

/// Canonical text form used for both lexicon surfaces and criterion lines.
pub fn normalize_text(raw: &str) -> String {
    let folded: String = raw.nfkc().flat_map(char::to_lowercase).nfkc().collect();
    let spaced = PUNCT.replace_all(&folded, " ");
    spaced.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub surface_form: String,
    pub concept_id: String,
    pub category: Category,
}

/// Immutable surface-form dictionary with a phrase index keyed by first token.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    by_surface: HashMap<String, usize>,
    // first token -> longest phrase length (in tokens) starting with it
    max_phrase: HashMap<String, usize>,
    concept_category: HashMap<String, Category>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts an entry, normalizing its surface form. `line` is only used for
    /// error reporting.
    pub fn insert(&mut self, entry: LexiconEntry, line: usize) -> Result<(), LexiconError> {
        let surface = normalize_text(&entry.surface_form);
        if surface.is_empty() {
            return Err(LexiconError::Validation {
                line,
                message: format!("surface form {:?} is empty after normalization", entry.surface_form),
            });
        }
        if normalize_text(&surface) != surface {
            return Err(LexiconError::Validation {
                line,
                message: format!("surface form {surface:?} is not stable under normalization"),
            });
        }
        let concept_id = entry.concept_id.trim().to_string();
        if concept_id.is_empty() {
            return Err(LexiconError::Validation { line, message: "concept_id is empty".into() });
        }
        if let Some(&other) = self.concept_category.get(&concept_id) {
            if other != entry.category {
                return Err(LexiconError::Validation {
                    line,
                    message: format!(
                        "concept {concept_id:?} listed under both {other} and {}",
                        entry.category
                    ),
                });
            }
        }
        if self.by_surface.contains_key(&surface) {
            return Err(LexiconError::DuplicateSurface { line, surface });
        }
        let tokens = surface.split(' ').count();
        let first = surface.split(' ').next().unwrap_or_default().to_string();
        let slot = self.max_phrase.entry(first).or_insert(0);
        *slot = (*slot).max(tokens);
        self.concept_category.insert(concept_id.clone(), entry.category);
        self.by_surface.insert(surface.clone(), self.entries.len());
        self.entries.push(LexiconEntry {
            surface_form: surface,
            concept_id,
            category: entry.category,
        });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    /// Exact lookup of an already-normalized surface form.
    pub fn get(&self, surface: &str) -> Option<&LexiconEntry> {
        self.by_surface.get(surface).map(|&i| &self.entries[i])
    }

    /// Normalizes `term` and looks it up.
    pub fn lookup(&self, term: &str) -> Option<&LexiconEntry> {
        self.get(&normalize_text(term))
    }

    /// Category of a concept, if any lexicon row names it.
    pub fn category_of(&self, concept_id: &str) -> Option<Category> {
        self.concept_category.get(concept_id).copied()
    }
}

pub fn load_lexicon<R: BufRead>(reader: R) -> Result<Lexicon, LexiconError> {
    let mut lexicon = Lexicon::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| LexiconError::Io { line: line_no, source })?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 3 {
            return Err(LexiconError::Columns { line: line_no, found: cols.len() });
        }
        let category: Category = cols[2].trim().parse().map_err(|e: crate::category::UnknownCategory| {
            LexiconError::Validation { line: line_no, message: e.to_string() }
        })?;
        lexicon.insert(
            LexiconEntry {
                surface_form: cols[0].to_string(),
                concept_id: cols[1].to_string(),
                category,
            },
            line_no,
        )?;
    }
    Ok(lexicon)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityMention {
    pub trial_id: String,
    pub line_index: usize,
    /// Half-open character interval over the normalized line text.
    pub span: (usize, usize),
    pub concept_id: String,
    pub category: Category,
}

/// Greedy left-to-right longest match over the normalized line, aligned to
/// token boundaries.
pub fn extract_mentions(line: &CriterionLine, lexicon: &Lexicon) -> Result<Vec<EntityMention>, LexiconError> {
    if lexicon.is_empty() {
        return Err(LexiconError::Empty);
    }
    let text = normalize_text(&line.text);
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let tokens: Vec<&str> = text.split(' ').collect();
    // char offset where each token starts
    let mut starts = Vec::with_capacity(tokens.len());
    let mut offset = 0;
    for tok in &tokens {
        starts.push(offset);
        offset += tok.chars().count() + 1;
    }

    let mut mentions = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let longest = lexicon.max_phrase.get(tokens[i]).copied().unwrap_or(0);
        let mut matched = None;
        for len in (1..=longest.min(tokens.len() - i)).rev() {
            let phrase = tokens[i..i + len].join(" ");
            if let Some(entry) = lexicon.get(&phrase) {
                matched = Some((len, entry));
                break;
            }
        }
        match matched {
            Some((len, entry)) => {
                let start = starts[i];
                let end = start + entry.surface_form.chars().count();
                mentions.push(EntityMention {
                    trial_id: line.trial_id.clone(),
                    line_index: line.line_index,
                    span: (start, end),
                    concept_id: entry.concept_id.clone(),
                    category: entry.category,
                });
                i += len;
            }
            None => i += 1,
        }
    }
    Ok(mentions)
}

/// Extracts mentions from every line, in line order.
pub fn extract_all(lines: &[CriterionLine], lexicon: &Lexicon) -> Result<Vec<EntityMention>, LexiconError> {
    let mut out = Vec::new();
    for line in lines {
        out.extend(extract_mentions(line, lexicon)?);
    }
    Ok(out)
}
