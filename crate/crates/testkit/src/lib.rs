//! Oracles and generators for tests. Nothing here is used by the library
//! itself; each oracle takes a deliberately different route from the code it
//! checks (exact rationals, exhaustive enumeration, character scanning).

pub mod generate;
pub mod jenks_oracle;
pub mod match_oracle;
pub mod recount;
