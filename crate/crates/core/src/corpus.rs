//! Trial-record ingestion and eligibility-criteria segmentation.
//!
//! A corpus file holds one JSON object per line:
//!
//! ```text
//! {"trial_id":"NCT00000001","title":"...","study_type":"interventional","eligibility_text":"Inclusion Criteria:\n- Age over 50"}
//! ```
//!
//! `trial_id` and `eligibility_text` are required; `title` and `study_type`
//! default to the empty string. Blank lines are skipped.

use std::collections::HashSet;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: malformed record: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate trial_id {trial_id:?}")]
    DuplicateTrial { line: usize, trial_id: String },
    #[error("line {line}: read failed: {source}")]
    Io {
        line: usize,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialRecord {
    pub trial_id: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub study_type: String,
    pub eligibility_text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Inclusion,
    Exclusion,
    Unknown,
}

/// A segmented item before it is bound to a trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionFragment {
    pub polarity: Polarity,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionLine {
    pub trial_id: String,
    pub line_index: usize,
    pub polarity: Polarity,
    pub text: String,
}

/// Reads a line-delimited corpus. Line numbers in errors are 1-based.
pub fn parse_corpus<R: BufRead>(reader: R) -> Result<Vec<TrialRecord>, CorpusError> {
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| CorpusError::Io { line: line_no, source })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: TrialRecord = serde_json::from_str(&line).map_err(|e| CorpusError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if record.trial_id.trim().is_empty() {
            return Err(CorpusError::Parse {
                line: line_no,
                message: "trial_id is empty".into(),
            });
        }
        if !seen.insert(record.trial_id.clone()) {
            return Err(CorpusError::DuplicateTrial {
                line: line_no,
                trial_id: record.trial_id,
            });
        }
        records.push(record);
    }
    Ok(records)
}

/// Serializes records back into the corpus line format.
pub fn write_corpus_line(record: &TrialRecord) -> String {
    serde_json::to_string(record).expect("TrialRecord serializes")
}

fn header_polarity(trimmed: &str) -> Option<Polarity> {
    let lower = trimmed.to_lowercase();
    if lower.starts_with("inclusion criteria") {
        Some(Polarity::Inclusion)
    } else if lower.starts_with("exclusion criteria") {
        Some(Polarity::Exclusion)
    } else {
        None
    }
}

/// If `trimmed` starts with a bullet or ordinal marker, returns the content
/// after the marker with leading whitespace removed.
fn strip_marker(trimmed: &str) -> Option<&str> {
    for bullet in ['-', '*', '•'] {
        if let Some(rest) = trimmed.strip_prefix(bullet) {
            return Some(rest.trim_start());
        }
    }
    let digits = trimmed.bytes().take_while(u8::is_ascii_digit).count();
    if digits == 0 {
        return None;
    }
    let rest = &trimmed[digits..];
    let after = rest.strip_prefix('.').or_else(|| rest.strip_prefix(')'))?;
    // "2.5 mg" is a decimal, not an ordinal.
    if after.starts_with(|c: char| c.is_ascii_digit()) {
        return None;
    }
    Some(after.trim_start())
}

/// Splits free-text eligibility criteria into polarity-tagged items.
pub fn segment_criteria(eligibility_text: &str) -> Vec<CriterionFragment> {
    let mut out = Vec::new();
    let mut polarity = Polarity::Unknown;
    let mut current: Option<String> = None;

    let flush = |current: &mut Option<String>, polarity: Polarity, out: &mut Vec<CriterionFragment>| {
        if let Some(text) = current.take() {
            if !text.trim().is_empty() {
                out.push(CriterionFragment { polarity, text });
            }
        }
    };

    for raw in eligibility_text.split('\n') {
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            flush(&mut current, polarity, &mut out);
            continue;
        }
        if let Some(p) = header_polarity(trimmed) {
            flush(&mut current, polarity, &mut out);
            polarity = p;
            continue;
        }
        if let Some(content) = strip_marker(trimmed) {
            flush(&mut current, polarity, &mut out);
            current = Some(content.to_string());
            continue;
        }
        match current.as_mut() {
            Some(text) if !text.is_empty() => {
                text.push(' ');
                text.push_str(trimmed);
            }
            Some(text) => text.push_str(trimmed),
            None => current = Some(trimmed.to_string()),
        }
    }
    flush(&mut current, polarity, &mut out);
    out
}

/// Segments every record, numbering lines per trial from 0.
pub fn criterion_lines(records: &[TrialRecord]) -> Vec<CriterionLine> {
    records
        .iter()
        .flat_map(|r| {
            segment_criteria(&r.eligibility_text)
                .into_iter()
                .enumerate()
                .map(|(line_index, frag)| CriterionLine {
                    trial_id: r.trial_id.clone(),
                    line_index,
                    polarity: frag.polarity,
                    text: frag.text,
                })
        })
        .collect()
}

/// Renders fragments back to criteria text, one bulleted item per line, with a
/// header wherever the polarity changes.
pub fn render_fragments(fragments: &[CriterionFragment]) -> String {
    let mut out = String::new();
    let mut polarity = Polarity::Unknown;
    for frag in fragments {
        if frag.polarity != polarity {
            match frag.polarity {
                Polarity::Inclusion => out.push_str("Inclusion Criteria:\n"),
                Polarity::Exclusion => out.push_str("Exclusion Criteria:\n"),
                // Unknown items only ever precede the first header.
                Polarity::Unknown => {}
            }
            polarity = frag.polarity;
        }
        out.push_str("- ");
        out.push_str(&frag.text);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frag(polarity: Polarity, text: &str) -> CriterionFragment {
        CriterionFragment { polarity, text: text.into() }
    }

    #[test]
    fn empty_stream() {
        assert!(parse_corpus("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn one_record() {
        let input = r#"{"trial_id":"NCT00000001","title":"t","study_type":"interventional","eligibility_text":"Inclusion Criteria: - Age over 50"}"#;
        let records = parse_corpus(input.as_bytes()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].trial_id, "NCT00000001");
        assert_eq!(records[0].eligibility_text, "Inclusion Criteria: - Age over 50");
    }

    #[test]
    fn duplicate_trial_id() {
        let input = concat!(
            r#"{"trial_id":"NCT00000001","eligibility_text":""}"#,
            "\n",
            r#"{"trial_id":"NCT00000001","eligibility_text":"x"}"#
        );
        match parse_corpus(input.as_bytes()) {
            Err(CorpusError::DuplicateTrial { line, trial_id }) => {
                assert_eq!(line, 2);
                assert_eq!(trial_id, "NCT00000001");
            }
            other => panic!("expected duplicate error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_line_reports_number() {
        let input = "\n{\"trial_id\":\"A\",\"eligibility_text\":\"\"}\nnot json\n";
        match parse_corpus(input.as_bytes()) {
            Err(CorpusError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_trial_id_rejected() {
        let input = r#"{"trial_id":"  ","eligibility_text":""}"#;
        assert!(matches!(parse_corpus(input.as_bytes()), Err(CorpusError::Parse { line: 1, .. })));
    }

    #[test]
    fn segment_empty() {
        assert!(segment_criteria("").is_empty());
    }

    #[test]
    fn segment_headers() {
        let got = segment_criteria("Inclusion Criteria:\n- Age ≥ 50\nExclusion Criteria:\n- Epilepsy");
        assert_eq!(
            got,
            vec![frag(Polarity::Inclusion, "Age ≥ 50"), frag(Polarity::Exclusion, "Epilepsy")]
        );
    }

    #[test]
    fn segment_continuation() {
        let got = segment_criteria("- uses donepezil\n  daily");
        assert_eq!(got, vec![frag(Polarity::Unknown, "uses donepezil daily")]);
    }

    #[test]
    fn segment_ordinals_and_blank_lines() {
        let text = "  INCLUSION CRITERIA\r\n1. Age 50-85\n2) MMSE 20 to 26\n\ncaregiver available\nexclusion criteria -\n* 2.5 mg\n  dose";
        let got = segment_criteria(text);
        assert_eq!(
            got,
            vec![
                frag(Polarity::Inclusion, "Age 50-85"),
                frag(Polarity::Inclusion, "MMSE 20 to 26"),
                frag(Polarity::Inclusion, "caregiver available"),
                frag(Polarity::Exclusion, "2.5 mg dose"),
            ]
        );
    }

    #[test]
    fn decimal_is_not_ordinal() {
        let got = segment_criteria("- dose\n2.5 mg");
        assert_eq!(got, vec![frag(Polarity::Unknown, "dose 2.5 mg")]);
    }

    #[test]
    fn bare_marker_then_continuation() {
        let got = segment_criteria("-\nstroke\n-\n\n- ");
        assert_eq!(got, vec![frag(Polarity::Unknown, "stroke")]);
    }

    #[test]
    fn criterion_lines_are_contiguous() {
        let records = vec![
            TrialRecord {
                trial_id: "A".into(),
                title: String::new(),
                study_type: String::new(),
                eligibility_text: "- one\n- two".into(),
            },
            TrialRecord {
                trial_id: "B".into(),
                title: String::new(),
                study_type: String::new(),
                eligibility_text: "- three".into(),
            },
        ];
        let lines = criterion_lines(&records);
        let idx: Vec<_> = lines.iter().map(|l| (l.trial_id.as_str(), l.line_index)).collect();
        assert_eq!(idx, vec![("A", 0), ("A", 1), ("B", 0)]);
    }
}
