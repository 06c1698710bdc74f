use std::collections::BTreeMap;

use proptest::prelude::*;

use trialonto_core::corpus::{criterion_lines, parse_corpus, render_fragments, segment_criteria, Polarity, TrialRecord};

fn line_strategy() -> impl Strategy<Value = String> {
    let content = prop::sample::select(vec![
        "Age over 50",
        "epilepsy",
        "MMSE 20–26",
        "2.5 mg daily",
        "uses donepezil",
        "no history of stroke",
        "Alzheimer's disease (probable)",
        "β-amyloid positive",
        "criteria met",
    ]);
    let indent = prop::sample::select(vec!["", " ", "   ", "\t"]);
    let marker = prop::sample::select(vec!["", "", "- ", "* ", "• ", "1. ", "12) ", "3.", "-"]);
    let header = prop::sample::select(vec![
        "Inclusion Criteria:",
        "EXCLUSION CRITERIA",
        "  inclusion criteria - key",
        "Exclusion criteria:",
    ]);
    prop_oneof![
        6 => (indent, marker, content).prop_map(|(i, m, c)| format!("{i}{m}{c}")),
        2 => header.prop_map(String::from),
        1 => prop::sample::select(vec!["", "  "]).prop_map(String::from),
    ]
}

fn text_strategy() -> impl Strategy<Value = String> {
    prop::collection::vec(line_strategy(), 0..14).prop_map(|lines| lines.join("\n"))
}

// Independent reading of the rules: strip header lines and one leading
// marker per line, then keep the remaining non-space characters, grouped by
// the most recent header.
fn expected_chars(text: &str) -> BTreeMap<Polarity, String> {
    let mut out: BTreeMap<Polarity, String> = BTreeMap::new();
    let mut polarity = Polarity::Unknown;
    for raw in text.split('\n') {
        let t = raw.trim();
        let lower = t.to_lowercase();
        if lower.starts_with("inclusion criteria") {
            polarity = Polarity::Inclusion;
            continue;
        }
        if lower.starts_with("exclusion criteria") {
            polarity = Polarity::Exclusion;
            continue;
        }
        let mut body = t;
        if let Some(rest) = body.strip_prefix(['-', '*', '•']) {
            body = rest;
        } else {
            let digits = body.chars().take_while(char::is_ascii_digit).count();
            let rest = &body[digits..];
            if digits > 0 && (rest.starts_with('.') || rest.starts_with(')')) && !rest[1..].starts_with(|c: char| c.is_ascii_digit()) {
                body = &rest[1..];
            }
        }
        out.entry(polarity).or_default().extend(body.chars().filter(|c| !c.is_whitespace()));
    }
    out.retain(|_, s| !s.is_empty());
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn segmentation_is_idempotent_on_rendered_output(text in text_strategy()) {
        let first = segment_criteria(&text);
        let again = segment_criteria(&render_fragments(&first));
        prop_assert_eq!(again, first);
    }

    #[test]
    fn no_content_characters_are_lost(text in text_strategy()) {
        let mut got: BTreeMap<Polarity, String> = BTreeMap::new();
        for frag in segment_criteria(&text) {
            prop_assert!(!frag.text.trim().is_empty());
            got.entry(frag.polarity).or_default().extend(frag.text.chars().filter(|c| !c.is_whitespace()));
        }
        prop_assert_eq!(got, expected_chars(&text));
    }

    #[test]
    fn line_indices_are_contiguous(texts in prop::collection::vec(text_strategy(), 0..5)) {
        let records: Vec<TrialRecord> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| TrialRecord {
                trial_id: format!("NCT{i:08}"),
                title: String::new(),
                study_type: "interventional".into(),
                eligibility_text: t.clone(),
            })
            .collect();
        let lines = criterion_lines(&records);
        let mut next: BTreeMap<&str, usize> = BTreeMap::new();
        for l in &lines {
            let slot = next.entry(l.trial_id.as_str()).or_insert(0);
            prop_assert_eq!(l.line_index, *slot);
            *slot += 1;
        }
    }
}

#[test]
fn header_and_bullets() {
    let got = segment_criteria("Inclusion Criteria:\n- Age ≥ 50\nExclusion Criteria:\n- Epilepsy");
    let pairs: Vec<(Polarity, &str)> = got.iter().map(|f| (f.polarity, f.text.as_str())).collect();
    assert_eq!(pairs, vec![(Polarity::Inclusion, "Age ≥ 50"), (Polarity::Exclusion, "Epilepsy")]);
}

#[test]
fn continuation_without_header() {
    let got = segment_criteria("- uses donepezil\n  daily");
    assert_eq!(got.len(), 1);
    assert_eq!(got[0].polarity, Polarity::Unknown);
    assert_eq!(got[0].text, "uses donepezil daily");
    assert!(segment_criteria("").is_empty());
}

#[test]
fn corpus_round_trip_and_errors() {
    let text = "{\"trial_id\":\"NCT00000001\",\"eligibility_text\":\"Inclusion Criteria: - Age over 50\"}\n\n";
    let records = parse_corpus(text.as_bytes()).unwrap();
    assert_eq!(records.len(), 1);
    assert!(parse_corpus("".as_bytes()).unwrap().is_empty());
    let dup = format!("{}{}", text.trim_end(), format_args!("\n{}\n", text.trim_end()));
    let err = parse_corpus(dup.as_bytes()).unwrap_err().to_string();
    assert!(err.contains("line 2"), "{err}");
    assert!(parse_corpus("{not json}\n".as_bytes()).unwrap_err().to_string().contains("line 1"));
}
