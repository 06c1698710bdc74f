//! Construction, evaluation and querying of lightweight eligibility-criteria
//! ontologies built from clinical-trial records.

pub mod category;
pub mod corpus;
pub mod coverage_opt;
pub mod jenks;
pub mod lexicon;
pub mod normalize;
pub mod ontology;

pub use category::Category;
