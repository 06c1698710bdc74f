use std::collections::HashMap;

use proptest::prelude::*;

use trialonto_core::corpus::{CriterionLine, Polarity};
use trialonto_core::lexicon::{extract_mentions, load_lexicon, normalize_text, Lexicon};
use trialonto_testkit::generate;
use trialonto_testkit::match_oracle::brute_force_select;

fn line(text: &str) -> CriterionLine {
    CriterionLine {
        trial_id: "NCT0".into(),
        line_index: 0,
        polarity: Polarity::Inclusion,
        text: text.into(),
    }
}

fn surfaces(lex: &Lexicon) -> HashMap<String, String> {
    lex.entries()
        .iter()
        .map(|e| (e.surface_form.clone(), e.concept_id.clone()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn greedy_equals_brute_force(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let (lex, text) = generate::lexicon_and_line(&mut rng, 20);
        let got: Vec<(usize, usize, String)> = extract_mentions(&line(&text), &lex)
            .unwrap()
            .into_iter()
            .map(|m| (m.span.0, m.span.1, m.concept_id))
            .collect();
        let expected = brute_force_select(&normalize_text(&text), &surfaces(&lex));
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn spans_are_ordered_token_aligned_surfaces(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let (lex, text) = generate::lexicon_and_line(&mut rng, 20);
        let norm: Vec<char> = normalize_text(&text).chars().collect();
        let mut prev_end = 0;
        for m in extract_mentions(&line(&text), &lex).unwrap() {
            let (a, b) = m.span;
            prop_assert!(a >= prev_end && a < b && b <= norm.len());
            prop_assert!(a == 0 || norm[a - 1] == ' ');
            prop_assert!(b == norm.len() || norm[b] == ' ');
            let covered: String = norm[a..b].iter().collect();
            let entry = lex.get(&covered).expect("span text is a surface form");
            prop_assert_eq!(&entry.concept_id, &m.concept_id);
            prop_assert_eq!(entry.category, m.category);
            prev_end = b;
        }
    }

    #[test]
    fn extraction_ignores_prior_normalization(seed in any::<u64>()) {
        let mut rng = generate::rng(seed);
        let (lex, text) = generate::lexicon_and_line(&mut rng, 20);
        let raw = extract_mentions(&line(&text), &lex).unwrap();
        let pre = extract_mentions(&line(&normalize_text(&text)), &lex).unwrap();
        prop_assert_eq!(raw, pre);
    }

    #[test]
    fn normalization_is_idempotent(s in "\\PC{0,40}") {
        let once = normalize_text(&s);
        prop_assert_eq!(normalize_text(&once), once.clone());
        prop_assert!(!once.starts_with(' ') && !once.ends_with(' ') && !once.contains("  "));
    }

    #[test]
    fn normalization_is_idempotent_on_mixed_scripts(s in "[a-zA-ZÀ-ÿ0-9 ,.;:()'’\\-ﬁ①Ⅻ\u{3000}]{0,40}") {
        let once = normalize_text(&s);
        prop_assert_eq!(normalize_text(&once), once);
    }
}

#[test]
fn case_punctuation_and_width_fold() {
    assert_eq!(normalize_text("  Alzheimer's   Disease; (AD) "), "alzheimer's disease ad");
    assert_eq!(normalize_text("ＡＤＡＳ－Ｃｏｇ"), "adas-cog");
    assert_eq!(normalize_text("Type 2, diabetes."), "type 2 diabetes");
}

#[test]
fn longest_match_wins_over_prefix() {
    let lex = load_lexicon("diabetes\tDM\tDisease\ndiabetes mellitus\tDM2\tDisease\nmellitus\tX\tDisease\n".as_bytes())
        .unwrap();
    let got = extract_mentions(&line("Type 2 Diabetes Mellitus"), &lex).unwrap();
    assert_eq!(got.len(), 1);
    assert_eq!(got[0].concept_id, "DM2");
    assert_eq!(got[0].span, (7, 24));
}

#[test]
fn no_match_inside_a_token() {
    let lex = load_lexicon("ad\tAD\tDisease\n".as_bytes()).unwrap();
    assert!(extract_mentions(&line("headache, adverse"), &lex).unwrap().is_empty());
    assert_eq!(extract_mentions(&line("mild AD."), &lex).unwrap().len(), 1);
}
