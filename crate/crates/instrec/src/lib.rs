//! Institutional research-profile analysis and collaboration recommendation.
//!
//! The library turns tab-delimited bibliographic exports into normalized
//! keyword profiles, ranks institutional expertise, and recommends
//! collaboration partners per thematic area, with diversity metrics for
//! judging the recommendation sets. The [`pipeline`] module wires the parts
//! into a batch pipeline driven by a config file; `src/bin/pipeline.rs`
//! exposes it on the command line.

pub mod affiliation_network;
pub mod corpus_ingest;
pub mod embedding_store;
pub mod evaluation;
pub mod expertise_profile;
pub mod keyword_normalizer;
pub mod pipeline;
pub mod recommender;
pub mod thematic_matrices;
