//! Seeded random instances.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use trialonto_core::lexicon::{EntityMention, Lexicon, LexiconEntry};
use trialonto_core::ontology::{AnnotationSet, Ontology};
use trialonto_core::Category;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// 1..=max_len values, integers or reals.
pub fn values(rng: &mut TestRng, max_len: usize, integers: bool) -> Vec<f64> {
    let n = rng.gen_range(1..=max_len);
    (0..n)
        .map(|_| {
            if integers {
                rng.gen_range(-5..=20) as f64
            } else {
                rng.gen_range(-50.0..150.0)
            }
        })
        .collect()
}

/// A non-increasing gain vector with occasional repeats.
pub fn gains(rng: &mut TestRng, max_len: usize) -> Vec<f64> {
    let n = rng.gen_range(1..=max_len);
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.3) {
                rng.gen_range(1..=6) as f64 / 100.0
            } else {
                rng.gen_range(0.0001..0.3)
            }
        })
        .collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

const WORDS: [&str; 8] = ["ad", "mild", "epilepsy", "type", "2", "diabetes", "mellitus", "mri"];

/// A lexicon over a small vocabulary (so phrases overlap) and a line of at
/// most `max_tokens` tokens drawn from the same vocabulary.
pub fn lexicon_and_line(rng: &mut TestRng, max_tokens: usize) -> (Lexicon, String) {
    let mut lex = Lexicon::new();
    let entries = rng.gen_range(1..=10);
    let mut line_no = 0;
    for i in 0..entries {
        let len = rng.gen_range(1..=3);
        let surface: Vec<&str> = (0..len).map(|_| *WORDS.choose(rng).unwrap()).collect();
        line_no += 1;
        // duplicates are rejected; skip them
        let _ = lex.insert(
            LexiconEntry {
                surface_form: surface.join(" "),
                concept_id: format!("C{i}"),
                category: *Category::ALL.choose(rng).unwrap(),
            },
            line_no,
        );
    }
    let n = rng.gen_range(0..=max_tokens);
    let noise = ["", ",", ";", " (", ")", "."];
    let mut line = String::new();
    for _ in 0..n {
        let w = *WORDS.choose(rng).unwrap();
        if rng.gen_bool(0.2) {
            line.push_str(&w.to_uppercase());
        } else {
            line.push_str(w);
        }
        line.push_str(noise.choose(rng).unwrap());
        line.push(' ');
    }
    (lex, line)
}

/// Mentions over a closed set of concepts spread across categories.
pub fn mentions(rng: &mut TestRng, max_mentions: usize, max_concepts: usize) -> Vec<EntityMention> {
    let concepts = rng.gen_range(1..=max_concepts);
    let catalog: Vec<(String, Category)> = (0..concepts)
        .map(|i| (format!("K{i:03}"), *Category::ALL.choose(rng).unwrap()))
        .collect();
    // skewed draw so frequencies have a head and a tail
    let n = rng.gen_range(0..=max_mentions);
    (0..n)
        .map(|i| {
            let r: f64 = rng.gen();
            let idx = ((r * r * r) * concepts as f64) as usize;
            let (id, cat) = &catalog[idx.min(concepts - 1)];
            EntityMention {
                trial_id: format!("T{}", i % 17),
                line_index: i,
                span: (0, 1),
                concept_id: id.clone(),
                category: *cat,
            }
        })
        .collect()
}

fn label(rng: &mut TestRng) -> String {
    let pieces = ["Epilepsy", "mild \"AD\"", "back\\slash", "Ünïcödé", "β-amyloid", "a  b", "", "(x)", "#hash"];
    (0..rng.gen_range(1..=3)).map(|_| *pieces.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

fn digits(rng: &mut TestRng, n: usize) -> String {
    (0..n).map(|_| char::from(b'0' + rng.gen_range(0..10u8))).collect()
}

pub fn annotations(rng: &mut TestRng) -> AnnotationSet {
    let mut a = AnnotationSet::default();
    if rng.gen_bool(0.5) {
        a.has_umls = Some(format!("C{}", digits(rng, 7)));
    }
    if rng.gen_bool(0.4) {
        a.has_athena_id = Some(rng.gen_range(1..10_000_000));
    }
    for _ in 0..rng.gen_range(0..3) {
        a.has_brand_name.insert(label(rng).replace(' ', "_") + "x");
    }
    for _ in 0..rng.gen_range(0..2) {
        a.has_drugbank_category.insert(format!("Category {}", rng.gen_range(0..5)));
    }
    for _ in 0..rng.gen_range(0..3) {
        let code = if rng.gen_bool(0.5) {
            format!("{}-{}-{}", digits(rng, 5), digits(rng, 4), digits(rng, 2))
        } else {
            digits(rng, 10)
        };
        a.has_ndc.insert(code);
    }
    for _ in 0..rng.gen_range(0..3) {
        a.has_valuesets.insert(format!("2.16.840.1.{}.{}", rng.gen_range(1..999), rng.gen_range(1..99)));
    }
    a
}

/// Roots plus up to `max_added` random classes attached by valid additions.
pub fn ontology(rng: &mut TestRng, max_added: usize) -> Ontology {
    let mut root_labels = BTreeMap::new();
    for c in Category::ALL {
        if rng.gen_bool(0.3) {
            root_labels.insert(c, label(rng));
        }
    }
    let mut o = Ontology::with_roots(&root_labels);
    let n = rng.gen_range(0..=max_added);
    for i in 0..n {
        let category = *Category::ALL.choose(rng).unwrap();
        let candidates: Vec<String> = o
            .nodes()
            .filter(|node| node.category == category)
            .map(|node| node.concept_id.clone())
            .collect();
        let parent = candidates.choose(rng).cloned();
        let id = format!("{}_{i}", ["Epilepsy", "MMSE", "Donepezil", "MRI", "x.1", "9-a"].choose(rng).unwrap());
        o.add_concept(&id, &label(rng), category, parent.as_deref(), annotations(rng))
            .expect("generated additions are valid");
    }
    o
}
