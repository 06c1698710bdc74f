use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use trialonto_core::lexicon::load_lexicon;
use trialonto_core::normalize::{expand_valuesets, normalize_term, AssociationTable, NormalizeError, ValuesetStore};
use trialonto_core::ontology::{load_catalog, load_scaffold, Ontology};
use trialonto_core::Category;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn open(name: &str) -> BufReader<File> {
    BufReader::new(File::open(fixture(name)).unwrap())
}

// Scaffold plus every concept the associations and the checks below touch.
fn ontology() -> Ontology {
    let (config, mut o) = load_scaffold(File::open(fixture("scaffold.toml")).unwrap()).unwrap();
    let catalog = load_catalog(open("annotations.tsv")).unwrap();
    for (id, cat) in [
        ("AlzheimersDisease", Category::Disease),
        ("Epilepsy", Category::Disease),
        ("Donepezil", Category::Medication),
        ("MMSE", Category::RatingCriteria),
        ("CDR", Category::RatingCriteria),
    ] {
        o.add_concept(id, catalog.label(id), cat, Some(config.default_parent(cat)), catalog.annotations(id))
            .unwrap();
    }
    o
}

// Codes of an OID straight from the TSV, sorted by (system, code).
fn codes_from_file(oid: &str) -> Vec<(String, String)> {
    let text = std::fs::read_to_string(fixture("valuesets.tsv")).unwrap();
    let mut v: Vec<(String, String)> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split('\t').collect::<Vec<_>>())
        .filter(|c| c[0] == oid)
        .map(|c| (c[3].to_string(), c[2].to_string()))
        .collect();
    v.sort();
    v
}

#[test]
fn abbreviation_and_full_name_agree() {
    let o = ontology();
    let lexicon = load_lexicon(open("lexicon.tsv")).unwrap();
    let store = ValuesetStore::load(open("valuesets.tsv")).unwrap();
    store.check_ontology(&o).unwrap();
    let assoc = AssociationTable::load(open("associations.tsv"), &o).unwrap();

    let ad = normalize_term("AD", &o, &lexicon, &store, &assoc).unwrap();
    assert_eq!(ad.concept_id, "AlzheimersDisease");
    assert_eq!(ad.label, "Alzheimer's Disease");
    assert_eq!(ad.category, Category::Disease);
    assert_eq!(ad.annotations.has_umls.as_deref(), Some("C0002395"));
    let full = normalize_term("  alzheimer’s DISEASE ", &o, &lexicon, &store, &assoc);
    // the typographic apostrophe is kept, so it is a different surface form
    assert!(matches!(full, Err(NormalizeError::NotFound { .. })));
    let plain = normalize_term("Alzheimer's Disease", &o, &lexicon, &store, &assoc).unwrap();
    assert_eq!(plain.concept_id, ad.concept_id);
    assert_eq!(plain.valueset_codes, ad.valueset_codes);

    let related: Vec<(&str, &str)> =
        ad.related.iter().map(|r| (r.relation_tag.as_str(), r.concept_id.as_str())).collect();
    assert_eq!(related, vec![("assessed_by", "CDR"), ("assessed_by", "MMSE"), ("treated_by", "Donepezil")]);
}

#[test]
fn expansion_lists_every_code_in_order() {
    let o = ontology();
    let store = ValuesetStore::load(open("valuesets.tsv")).unwrap();
    for id in ["AlzheimersDisease", "Epilepsy"] {
        let node = o.get(id).unwrap();
        let codes = expand_valuesets(node, &store).unwrap();
        let mut expected = Vec::new();
        for oid in &node.annotations.has_valuesets {
            expected.extend(codes_from_file(oid).into_iter().map(|(s, c)| (oid.clone(), s, c)));
        }
        let got: Vec<(String, String, String)> =
            codes.into_iter().map(|c| (c.oid, c.code_system, c.code)).collect();
        assert_eq!(got, expected);
        assert!(!got.is_empty());
    }
}

#[test]
fn unknown_term_is_reported() {
    let o = ontology();
    let lexicon = load_lexicon(open("lexicon.tsv")).unwrap();
    let store = ValuesetStore::load(open("valuesets.tsv")).unwrap();
    let err = normalize_term("xyzzy", &o, &lexicon, &store, &AssociationTable::default()).unwrap_err();
    assert_eq!(
        err,
        NormalizeError::NotFound { term: "xyzzy".into(), normalized: "xyzzy".into() }
    );
}
