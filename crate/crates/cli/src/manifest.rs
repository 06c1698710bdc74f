//! Run manifest written next to the built ontology.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use trialonto_core::ontology::OntologyStats;
use trialonto_core::Category;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub tool: String,
    pub config: ConfigEcho,
    /// Input role (`corpus`, `lexicon`, ...) to path and digest.
    pub inputs: BTreeMap<String, FileDigest>,
    pub corpus: CorpusSummary,
    pub p: usize,
    pub series_length: usize,
    pub coverage: CoverageFigures,
    pub covered_mentions: MentionCounts,
    pub counts: ClassCounts,
    pub stats: OntologyStats,
    pub artifacts: Artifacts,
    pub timestamp: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEcho {
    pub seed_size: usize,
    pub classes: usize,
    pub cluster_on: String,
    pub cut: String,
    pub enrichment_disabled: Vec<Category>,
    pub tie_break: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSummary {
    pub trials: usize,
    pub criterion_lines: usize,
    pub mentions: u64,
    pub distinct_concepts: usize,
}

/// Coverage fractions rounded to four decimals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageFigures {
    pub baseline: String,
    pub optimized: String,
    #[serde(rename = "final")]
    pub final_: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MentionCounts {
    pub total: u64,
    pub baseline: u64,
    pub optimized: u64,
    #[serde(rename = "final")]
    pub final_: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassCounts {
    pub scaffold: usize,
    pub seeded: usize,
    pub added: usize,
    pub manual: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.scaffold + self.seeded + self.added + self.manual
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Artifacts {
    /// File name of the ontology, relative to the manifest.
    pub ontology: String,
    pub ontology_sha256: String,
    pub curve: String,
}

pub fn format_coverage(covered: u64, total: u64) -> String {
    let v = if total == 0 { 0.0 } else { covered as f64 / total as f64 };
    format!("{v:.4}")
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let m: Manifest = serde_json::from_str(text).map_err(|e| e.to_string())?;
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), String> {
        let figures = [
            ("baseline", &self.coverage.baseline),
            ("optimized", &self.coverage.optimized),
            ("final", &self.coverage.final_),
        ];
        for (name, v) in figures {
            let x: f64 = v.parse().map_err(|_| format!("coverage {name} {v:?} is not a number"))?;
            if !(0.0..=1.0).contains(&x) {
                return Err(format!("coverage {name} {v} outside [0, 1]"));
            }
        }
        let m = &self.covered_mentions;
        if m.baseline > m.total || m.optimized > m.total || m.final_ > m.total {
            return Err("covered mentions exceed the total".into());
        }
        if self.p > self.series_length {
            return Err(format!("p {} exceeds series length {}", self.p, self.series_length));
        }
        for (role, d) in &self.inputs {
            if d.sha256.len() != 64 || !d.sha256.bytes().all(|b| b.is_ascii_hexdigit()) {
                return Err(format!("input {role}: malformed digest"));
            }
        }
        Ok(())
    }

    /// The manifest with the timestamp blanked, for run-to-run comparison.
    pub fn without_timestamp(&self) -> Manifest {
        Manifest { timestamp: String::new(), ..self.clone() }
    }
}
