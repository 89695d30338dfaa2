//! Argument recommendation engine for a Java subset.
//!
//! Given a partially completed method call, the engine enumerates every
//! syntax-valid, accessible, type-compatible argument expression, prunes the
//! set with heuristic rules and a count-based language model, and returns a
//! ranked list. The crate also ships the offline evaluation harness and a
//! corpus-statistics command used to study argument usage in the wild.
//!
//! Numeric code (language-model probabilities, feature scores, ranking,
//! metrics) is generic over the scalar type via [`scalar::Real`]; everything
//! else works on concrete syntax and types. Use the aliases below unless you
//! need a different precision.

pub mod bundle;
pub mod candgen;
pub mod corpus;
pub mod features;
pub mod interface;
pub mod lm;
pub mod pipeline;
pub mod scalar;
pub mod typesys;

/// Default scalar for probabilities and scores.
pub type Score = f64;

/// N-gram model at the default precision.
pub type Model = lm::NGramModel<Score>;

/// Recentness probability tables at the default precision.
pub type Tables = features::RecentnessTables<Score>;

/// Pipeline configuration at the default precision.
pub type Config = pipeline::PipelineConfig<Score>;

/// Ranked recommendation list at the default precision.
pub type Ranked = pipeline::RankedList<Score>;
