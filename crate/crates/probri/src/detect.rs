//! Semantic-shift event detection: rank every word by its angle to a query
//! word in two time slices, then score candidates by how much they moved
//! toward the query, how their rank changed, and how their normalized
//! frequency changed.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::space::{SemanticSpace, SpaceError};

#[derive(Debug, Error)]
pub enum DetectError {
    #[error("word {word:?} not found in slice {slice:?}")]
    UnknownWord { word: String, slice: String },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Parameters of the two-slice suggestion run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DetectionParams {
    /// The query word; must be present in both slices.
    pub query: String,
    /// Candidate pool size: only the κ post-slice words nearest the query
    /// are scored. Clamped (with a warning) when the vocabulary is smaller.
    pub kappa: usize,
    /// Number of suggestions reported.
    pub top: usize,
    /// Score with f_post/f_pre instead of f_pre/f_post. The default keeps
    /// the ratio orientation of the suggestion-coefficient definition; the
    /// flag matches the stated intent of up-weighting newly frequent words.
    pub invert_freq_ratio: bool,
}

impl DetectionParams {
    pub fn new(query: impl Into<String>, kappa: usize, top: usize) -> Result<Self, DetectError> {
        if top == 0 || kappa < top {
            return Err(DetectError::InvalidParameters(format!(
                "need kappa >= top >= 1, got kappa={kappa}, top={top}"
            )));
        }
        Ok(Self {
            query: query.into(),
            kappa,
            top,
            invert_freq_ratio: false,
        })
    }

    pub fn with_invert_freq_ratio(mut self, invert: bool) -> Self {
        self.invert_freq_ratio = invert;
        self
    }
}

/// One suggested word with every factor of its score, so the score is
/// recomputable from the stored fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuggestionRow {
    pub word: String,
    /// Suggestion coefficient S(w).
    pub score: f64,
    /// |theta_post - theta_pre|.
    pub delta: f64,
    pub rank_pre: usize,
    pub rank_post: usize,
    pub freq_pre: f64,
    pub freq_post: f64,
    pub theta_pre: f64,
    pub theta_post: f64,
}

/// All words of a space ranked by angle to a query word, ascending, ties
/// broken lexicographically. Ranks are 1-based; the query itself is
/// excluded.
#[derive(Debug, Clone)]
pub struct RankedList {
    entries: Vec<(String, f64)>,
}

impl RankedList {
    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 1-based rank of `word`, if ranked.
    pub fn rank_of(&self, word: &str) -> Option<usize> {
        self.entries
            .iter()
            .position(|(w, _)| w == word)
            .map(|i| i + 1)
    }

    pub fn angle_of(&self, word: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|(w, _)| w == word)
            .map(|&(_, theta)| theta)
    }
}

/// Rank every vocabulary word except the query by |angle to the query|.
pub fn ranked_list(space: &SemanticSpace, query: &str) -> Result<RankedList, DetectError> {
    if !space.contains(query) {
        return Err(DetectError::UnknownWord {
            word: query.to_string(),
            slice: space.slice_label().to_string(),
        });
    }
    let mut entries = Vec::with_capacity(space.len().saturating_sub(1));
    for w in space.words() {
        if w == query {
            continue;
        }
        entries.push((w.clone(), space.angle_between(w, query)?.abs()));
    }
    entries.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(RankedList { entries })
}

/// Suggest the top-P words related to an event around the query word.
///
/// The candidates are the κ post-slice words nearest the query. Each gets
///
/// ```text
/// S(w) = delta * rank_pre/rank_post * f_pre/f_post
/// ```
///
/// with delta = |theta_post - theta_pre|. A word absent from the pre slice
/// takes the maximal pre rank |V_pre|+1, the neutral angle π/2, and the
/// smoothing-floor frequency. Candidates that were already near the query
/// before the event (rank_pre <= κ) are dropped, and the survivors are
/// returned in descending score order.
pub fn suggest(
    pre: &SemanticSpace,
    post: &SemanticSpace,
    params: &DetectionParams,
) -> Result<Vec<SuggestionRow>, DetectError> {
    let query = params.query.as_str();
    for (space, name) in [(pre, "pre"), (post, "post")] {
        if !space.contains(query) {
            return Err(DetectError::UnknownWord {
                word: query.to_string(),
                slice: format!("{} ({name})", space.slice_label()),
            });
        }
    }
    let ranked_pre = ranked_list(pre, query)?;
    let ranked_post = ranked_list(post, query)?;

    let mut kappa = params.kappa;
    if kappa > ranked_post.len() {
        log::warn!(
            "kappa {} exceeds the {} ranked post-slice words; clamping",
            kappa,
            ranked_post.len()
        );
        kappa = ranked_post.len();
    }

    let pre_rank_of: HashMap<&str, (usize, f64)> = ranked_pre
        .entries()
        .iter()
        .enumerate()
        .map(|(i, (w, theta))| (w.as_str(), (i + 1, *theta)))
        .collect();
    let absent_rank = ranked_pre.len() + 1;
    let mut rows: Vec<SuggestionRow> = Vec::with_capacity(kappa);
    for (rank_post, (word, theta_post)) in ranked_post.entries()[..kappa].iter().enumerate() {
        let rank_post = rank_post + 1;
        let (rank_pre, theta_pre) = match pre_rank_of.get(word.as_str()) {
            Some(&(rank, theta)) => (rank, theta),
            None => (absent_rank, FRAC_PI_2),
        };
        let freq_pre = pre.norm_freq(word).to_f64().unwrap_or(0.0);
        let freq_post = post.norm_freq(word).to_f64().unwrap_or(0.0);
        let delta = (theta_post - theta_pre).abs();
        let freq_ratio = if params.invert_freq_ratio {
            freq_post / freq_pre
        } else {
            freq_pre / freq_post
        };
        let score = delta * (rank_pre as f64 / rank_post as f64) * freq_ratio;
        rows.push(SuggestionRow {
            word: word.clone(),
            score,
            delta,
            rank_pre,
            rank_post,
            freq_pre,
            freq_post,
            theta_pre,
            theta_post: *theta_post,
        });
    }

    rows.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.word.cmp(&b.word))
    });
    rows.retain(|row| row.rank_pre > kappa);
    rows.truncate(params.top);
    Ok(rows)
}

/// Single-slice suggestion for when no earlier slice exists: rank by
/// frequency-weighted closeness, score(w) = f(w) * (1 - theta/π).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleSliceRow {
    pub word: String,
    pub score: f64,
    pub freq: f64,
    pub theta: f64,
}

pub fn suggest_single_slice(
    space: &SemanticSpace,
    query: &str,
    top: usize,
) -> Result<Vec<SingleSliceRow>, DetectError> {
    let ranked = ranked_list(space, query)?;
    let mut rows: Vec<SingleSliceRow> = ranked
        .entries()
        .iter()
        .map(|(word, theta)| {
            let freq = space.norm_freq(word).to_f64().unwrap_or(0.0);
            SingleSliceRow {
                word: word.clone(),
                score: freq * (1.0 - theta / std::f64::consts::PI),
                freq,
                theta: *theta,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.word.cmp(&b.word))
    });
    rows.truncate(top);
    Ok(rows)
}

/// Absolute change of the angle between two words across slices.
pub fn semantic_shift(
    pre: &SemanticSpace,
    post: &SemanticSpace,
    w1: &str,
    w2: &str,
) -> Result<f64, DetectError> {
    let theta_pre = angle_checked(pre, w1, w2)?;
    let theta_post = angle_checked(post, w1, w2)?;
    Ok((theta_post - theta_pre).abs())
}

/// Agreement of a random-indexed space with the one-hot baseline on one
/// word pair: 1 - |shift_ri - shift_baseline|.
pub fn accuracy_vs_baseline(
    ri_pre: &SemanticSpace,
    ri_post: &SemanticSpace,
    bow_pre: &SemanticSpace,
    bow_post: &SemanticSpace,
    w1: &str,
    w2: &str,
) -> Result<f64, DetectError> {
    let shift_ri = semantic_shift(ri_pre, ri_post, w1, w2)?;
    let shift_bow = semantic_shift(bow_pre, bow_post, w1, w2)?;
    Ok(1.0 - (shift_ri - shift_bow).abs())
}

fn angle_checked(space: &SemanticSpace, w1: &str, w2: &str) -> Result<f64, DetectError> {
    for w in [w1, w2] {
        if !space.contains(w) {
            return Err(DetectError::UnknownWord {
                word: w.to_string(),
                slice: space.slice_label().to_string(),
            });
        }
    }
    Ok(space.angle_between(w1, w2)?)
}
