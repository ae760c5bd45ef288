//! Core matching algorithms for Arabic personal names.
//!
//! The centerpiece is a hybrid token-level edit distance
//! ([`hybrid::hybrid_similarity`]) that weighs each token edit by its
//! position in the name, the token's corpus frequency, and its
//! character-level closeness to the token it replaces. Around it sit the
//! pieces a matching pipeline needs:
//!
//! - [`normalize`]: standardization of raw name text into tokens
//! - [`char_metrics`]: character-level Levenshtein, Jaro, Jaro-Winkler
//! - [`frequency`]: token term-frequency tables and edit discounts
//! - [`baselines`]: Jaccard, TF-IDF cosine, Soft-TFIDF, Monge-Elkan,
//!   token-level Levenshtein
//!
//! The crate is `no_std`-compatible (with `alloc`); disable default
//! features and enable `libm` for the float routines. File loading,
//! dataset generation and the evaluation harness live in the companion
//! `ismatch` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod float;

pub mod baselines;
pub mod char_metrics;
pub mod frequency;
pub mod hybrid;
pub mod normalize;

pub use frequency::FrequencyTable;
pub use hybrid::{hybrid_distance, hybrid_similarity, HybridCost, MatchParams};
pub use normalize::{normalize_name, NormalizationRules, TokenizedName};
