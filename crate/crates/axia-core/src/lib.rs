//! Meta-evaluation harness core.
//!
//! The crate is organised around one substrate: a [`table::ResultTable`] mapping
//! `(config, object, index, repetition) -> value` over a factorized
//! evaluation-condition space ([`ec::EcSpace`]). Six simulated tasks synthesize
//! such tables; two more (CPU timing, LLM scoring) are ingested from externally
//! measured CSV files. Eleven estimation methods ([`methods`]) consume a table,
//! a budget and a seed, and the meta layer ([`meta`]) scores each method by
//! confidence-interval coverage against full-enumeration ground truth.

pub mod ec;
pub mod meta;
pub mod methods;
pub mod plot;
pub mod rng;
pub mod special;
pub mod stats;
pub mod table;
pub mod tasks;
