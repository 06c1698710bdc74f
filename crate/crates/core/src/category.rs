//! The seven semantic categories that partition eligibility-criteria concepts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A semantic category.
///
/// Variants are declared in ascending order of their canonical names, so the
/// derived `Ord` is the same as comparing [`Category::as_str`] values. Tie-breaks
/// that say "ascending category name" rely on this.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    DiagnosticTest,
    Disease,
    Fertility,
    Medication,
    Procedure,
    RatingCriteria,
    SDoH,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::DiagnosticTest,
        Category::Disease,
        Category::Fertility,
        Category::Medication,
        Category::Procedure,
        Category::RatingCriteria,
        Category::SDoH,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::DiagnosticTest => "DiagnosticTest",
            Category::Disease => "Disease",
            Category::Fertility => "Fertility",
            Category::Medication => "Medication",
            Category::Procedure => "Procedure",
            Category::RatingCriteria => "RatingCriteria",
            Category::SDoH => "SDoH",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown category label {0:?}")]
pub struct UnknownCategory(pub String);

impl FromStr for Category {
    type Err = UnknownCategory;

    /// Accepts the canonical names plus the spaced spellings used in prose
    /// ("Diagnostic Test", "Rating Criteria"), case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '_')
            .flat_map(char::to_lowercase)
            .collect();
        Category::ALL
            .into_iter()
            .find(|c| c.as_str().to_lowercase() == key)
            .ok_or_else(|| UnknownCategory(s.to_string()))
    }
}
