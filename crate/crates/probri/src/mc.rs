//! Monte-Carlo estimation of the orthogonality probability over a randomly
//! chosen subset of the indexing space.
//!
//! A subset of context vectors is drawn i.i.d. and the fraction of
//! orthogonal pairs is reported with a binomial standard error. By default
//! the fraction runs over unordered distinct-position pairs, which is the
//! unbiased estimator of the exact formula value under i.i.d. draws. With
//! `include_self_pairs` the denominator counts ordered pairs including
//! (i, i); feeding the entire space through that mode reproduces the exact
//! formula value, since the formula's probability space also lets the two
//! draws coincide.

use rand::Rng;

use crate::ri::{generate_context_vector, ContextVector, GenStrategy, RSpec, RiError};

/// When the caller gives no pair budget and the subset is larger than
/// this, pairs are sampled instead of enumerated.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 2000;
/// Pair sample size used when sampling is forced without an explicit
/// budget.
pub const DEFAULT_PAIR_SAMPLES: u64 = 100_000;

/// Point estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    /// Number of pairs behind the estimate.
    pub pairs: u64,
    /// Number of those pairs found orthogonal.
    pub orthogonal: u64,
}

fn finish(orthogonal: u64, pairs: u64) -> McEstimate {
    let p = if pairs == 0 {
        0.0
    } else {
        orthogonal as f64 / pairs as f64
    };
    let se = if pairs == 0 {
        0.0
    } else {
        (p * (1.0 - p) / pairs as f64).sqrt()
    };
    McEstimate {
        estimate: p,
        std_error: se,
        pairs,
        orthogonal,
    }
}

/// Exhaustive orthogonal-pair fraction over an explicit vector set.
pub fn pair_ortho_fraction(vectors: &[ContextVector], include_self_pairs: bool) -> McEstimate {
    let s = vectors.len() as u64;
    let mut orth = 0u64;
    for i in 0..vectors.len() {
        for j in (i + 1)..vectors.len() {
            if vectors[i].dot(&vectors[j]).expect("equal dims") == 0 {
                orth += 1;
            }
        }
    }
    if include_self_pairs {
        // Ordered pairs (i, j) including i = j; a nonzero ±1 vector is never
        // self-orthogonal, so only the denominator gains mass.
        finish(2 * orth, s * s)
    } else {
        finish(orth, s * (s - 1) / 2)
    }
}

/// One point of the running-estimate series: the estimate over all pairs
/// among the first `samples` vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McPoint {
    pub samples: u64,
    pub estimate: f64,
    pub std_error: f64,
}

/// Monte-Carlo estimate of the subset orthogonality probability.
///
/// Draws `subset_size` context vectors under `spec` (random placement).
/// With `pair_budget = None`, pairs are enumerated exhaustively up to
/// [`EXHAUSTIVE_PAIR_LIMIT`] vectors and sampled beyond that; an explicit
/// budget always samples that many pairs.
pub fn mc_subset_ortho<R: Rng + ?Sized>(
    n: usize,
    spec: &RSpec,
    subset_size: usize,
    pair_budget: Option<u64>,
    include_self_pairs: bool,
    rng: &mut R,
) -> Result<McEstimate, RiError> {
    if subset_size < 2 {
        return Err(RiError::InvalidParameters(
            "subset size must be at least 2".into(),
        ));
    }
    let vectors = draw_subset(n, spec, subset_size, rng)?;
    match pair_budget {
        None if subset_size <= EXHAUSTIVE_PAIR_LIMIT => {
            Ok(pair_ortho_fraction(&vectors, include_self_pairs))
        }
        budget => {
            let pairs = budget.unwrap_or(DEFAULT_PAIR_SAMPLES);
            Ok(sampled_pairs(&vectors, pairs, include_self_pairs, rng))
        }
    }
}

/// Running-estimate series for stabilization plots: one point per added
/// vector, each over all pairs seen so far. Exhaustive-mode subsets only.
pub fn mc_running_series<R: Rng + ?Sized>(
    n: usize,
    spec: &RSpec,
    subset_size: usize,
    include_self_pairs: bool,
    rng: &mut R,
) -> Result<Vec<McPoint>, RiError> {
    if subset_size < 2 {
        return Err(RiError::InvalidParameters(
            "subset size must be at least 2".into(),
        ));
    }
    if subset_size > EXHAUSTIVE_PAIR_LIMIT {
        return Err(RiError::InvalidParameters(format!(
            "running series is exhaustive; subset size is capped at {EXHAUSTIVE_PAIR_LIMIT}"
        )));
    }
    let vectors = draw_subset(n, spec, subset_size, rng)?;
    let mut series = Vec::with_capacity(subset_size - 1);
    let mut orth = 0u64;
    for k in 1..vectors.len() {
        for i in 0..k {
            if vectors[i].dot(&vectors[k]).expect("equal dims") == 0 {
                orth += 1;
            }
        }
        let s = (k + 1) as u64;
        let est = if include_self_pairs {
            finish(2 * orth, s * s)
        } else {
            finish(orth, s * (s - 1) / 2)
        };
        series.push(McPoint {
            samples: s,
            estimate: est.estimate,
            std_error: est.std_error,
        });
    }
    Ok(series)
}

fn draw_subset<R: Rng + ?Sized>(
    n: usize,
    spec: &RSpec,
    subset_size: usize,
    rng: &mut R,
) -> Result<Vec<ContextVector>, RiError> {
    let strategy = GenStrategy::RandomPlacement(spec.clone());
    (0..subset_size)
        .map(|_| generate_context_vector(n, &strategy, 0, rng))
        .collect()
}

fn sampled_pairs<R: Rng + ?Sized>(
    vectors: &[ContextVector],
    pairs: u64,
    include_self_pairs: bool,
    rng: &mut R,
) -> McEstimate {
    let s = vectors.len();
    let mut orth = 0u64;
    for _ in 0..pairs {
        let i = rng.gen_range(0..s);
        let j = if include_self_pairs {
            rng.gen_range(0..s)
        } else {
            // distinct positions
            let mut j = rng.gen_range(0..s - 1);
            if j >= i {
                j += 1;
            }
            j
        };
        if vectors[i].dot(&vectors[j]).expect("equal dims") == 0 {
            orth += 1;
        }
    }
    finish(orth, pairs)
}
