//! Batch tooling around `ismatch-core`: name datasets, synthetic
//! error-injection test sets, and the top-1 success evaluation harness,
//! all surfaced through the `ismatch` command-line binary.
//!
//! - [`dataset`]: base name sets, the six distortion types, test-set
//!   generation and the file formats for both
//! - [`harness`]: success-match-percentage evaluation, parameter sweeps,
//!   algorithm comparisons, and a synthetic base-set generator
//! - [`report`]: machine-readable report rows and human-readable grids
//! - [`cli`]: the subcommand implementations

pub mod cli;
pub mod dataset;
pub mod files;
pub mod harness;
pub mod report;

pub use files::ToolError;
