//! Probabilistic Random Indexing: representing words by sparse ±1 context
//! vectors whose nonzero count r is drawn from a discrete distribution,
//! with exact combinatorics for the probability that two such vectors are
//! orthogonal, temporal semantic-space construction, and a log-linear
//! semantic-shift algorithm that suggests words related to an event.
//!
//! The crate is organized around six pieces:
//!
//! - [`ri`] — context vectors, semantic vectors, the r-distribution, and
//!   angle computation;
//! - [`ortho`] — exact capacity and orthogonality-probability
//!   combinatorics in arbitrary precision, plus the minimal-dimension
//!   search;
//! - [`mc`] — Monte-Carlo orthogonality estimates over random subsets;
//! - [`corpus`] — text cleaning, tokenization, stopword removal, and
//!   time-sliced ingestion;
//! - [`space`] — per-slice semantic spaces with a shared word → vector
//!   assignment; [`format`] persists them;
//! - [`detect`] — ranked lists, suggestion coefficients, semantic shift,
//!   and the one-hot comparison metrics; [`pipeline`] ties build and
//!   detection together for timed runs.

pub mod corpus;
pub mod detect;
pub mod format;
pub mod mc;
pub mod ortho;
pub mod pipeline;
pub mod ri;
pub mod space;

pub use detect::{suggest, suggest_single_slice, DetectionParams, SuggestionRow};
pub use ri::{ContextVector, GenStrategy, RSpec, SemanticVector};
pub use space::{build_spaces, SemanticSpace, SpaceConfig};
