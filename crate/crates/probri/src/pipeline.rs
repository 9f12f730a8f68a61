//! End-to-end detection runs over an in-memory corpus, with per-phase
//! wall-clock timing. The benchmark subcommand and the scaling tests drive
//! this; file I/O stays outside so the timings cover algorithmic work only.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::corpus::TimeSlicedCorpus;
use crate::detect::{suggest, DetectError, DetectionParams, SuggestionRow};
use crate::space::{build_spaces, SpaceConfig, SpaceError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("slice {0:?} not found in the corpus")]
    MissingSlice(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Detect(#[from] DetectError),
}

/// Wall-clock split of one run.
#[derive(Debug, Clone, Copy, Default)]
pub struct PipelineTiming {
    /// Context-vector assignment plus semantic-vector accumulation.
    pub build: Duration,
    /// Ranking, scoring, and sorting.
    pub detect: Duration,
}

impl PipelineTiming {
    pub fn total(&self) -> Duration {
        self.build + self.detect
    }
}

#[derive(Debug)]
pub struct PipelineOutcome {
    pub rows: Vec<SuggestionRow>,
    pub vocab_pre: usize,
    pub vocab_post: usize,
    pub dim: usize,
    pub timing: PipelineTiming,
}

/// Build both slices and run the suggestion algorithm once.
pub fn run_detection(
    corpus: &TimeSlicedCorpus,
    pre_label: &str,
    post_label: &str,
    config: &SpaceConfig,
    params: &DetectionParams,
) -> Result<PipelineOutcome, PipelineError> {
    for label in [pre_label, post_label] {
        if corpus.slice(label).is_none() {
            return Err(PipelineError::MissingSlice(label.to_string()));
        }
    }

    let start = Instant::now();
    let spaces = build_spaces(corpus, config)?;
    let build = start.elapsed();

    let pre = spaces
        .iter()
        .find(|s| s.slice_label() == pre_label)
        .expect("checked above");
    let post = spaces
        .iter()
        .find(|s| s.slice_label() == post_label)
        .expect("checked above");

    let start = Instant::now();
    let rows = suggest(pre, post, params)?;
    let detect = start.elapsed();

    Ok(PipelineOutcome {
        rows,
        vocab_pre: pre.len(),
        vocab_post: post.len(),
        dim: pre.config().dim,
        timing: PipelineTiming { build, detect },
    })
}
