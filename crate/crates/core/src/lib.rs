//! Detection and network analysis of unsafe-content promoters on a
//! video-sharing platform.
//!
//! The crate is organized as a pipeline:
//!
//! - [`corpus`]: data model and file formats for videos, users, comments and
//!   lexicons.
//! - [`lexical`]: whitespace tokenization, bad-word counting, similarity and
//!   mark counting, lexicon sentiment.
//! - [`features`]: the 34 named per-video features (video, user and comment
//!   level).
//! - [`learn`]: decision tree, random forest and k-nearest-neighbor
//!   classifiers with stratified splits and evaluation.
//! - [`detect`]: uploader scoring and grading, the unsafe-commenter rule, and
//!   ECDF characterization of safe vs. unsafe uploaders.
//! - [`netgraph`]: video, uploader, commenter and behavioral graphs with
//!   safe/unsafe transition counts and exports.
//! - [`community`]: exact modularity and Louvain community detection.
//! - [`synth`]: deterministic synthetic corpora and planted-partition graphs
//!   with ground truth.
//! - [`cli`]: the command-line driver.

pub mod cli;
pub mod community;
pub mod corpus;
pub mod detect;
pub mod error;
pub mod features;
pub mod learn;
pub mod lexical;
pub mod netgraph;
pub mod seed;
pub mod synth;

pub use error::{Error, Result};
