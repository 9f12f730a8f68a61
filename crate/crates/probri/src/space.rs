//! Semantic spaces: a bijective word → context-vector map per time slice,
//! semantic vectors accumulated over sliding windows, and angle queries.
//!
//! Context vectors assigned to a word are reused across slices so that
//! angles stay comparable through time; the builder therefore assigns over
//! the union vocabulary once and restricts per slice.

use std::collections::{HashMap, HashSet};
use std::f64::consts::FRAC_PI_2;

use num_bigint::BigUint;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::corpus::{CorpusSlice, TimeSlicedCorpus};
use crate::ortho;
use crate::ri::{
    self, generate_context_vector, ContextVector, GenStrategy, RiError, SemanticVector,
};

/// Attempts to resample a fresh distinct vector before giving up.
const MAX_ASSIGN_ATTEMPTS: usize = 1000;

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error(
        "capacity exceeded: n={n}, max r={max_r} admits {capacity} distinct context vectors \
         but the vocabulary has {vocab} words"
    )]
    CapacityExceeded {
        n: usize,
        max_r: u32,
        capacity: BigUint,
        vocab: usize,
    },
    #[error("unknown word {word:?}")]
    UnknownWord { word: String },
    #[error("internal consistency: token {token:?} has no context vector")]
    MissingToken { token: String },
    #[error("no distinct context vector found for {word:?} after {attempts} attempts")]
    AssignmentExhausted { word: String, attempts: usize },
    #[error(transparent)]
    Ri(#[from] RiError),
}

/// Build configuration for a semantic space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceConfig {
    /// Context-vector dimension n. Ignored on input for one-hot, where the
    /// builder sets it to the union vocabulary size.
    pub dim: usize,
    pub strategy: GenStrategy,
    /// Context radius m in words on either side.
    pub window: usize,
    pub seed: u64,
}

impl SpaceConfig {
    pub fn new(
        dim: usize,
        strategy: GenStrategy,
        window: usize,
        seed: u64,
    ) -> Result<Self, SpaceError> {
        if window == 0 {
            return Err(RiError::InvalidParameters("window must be at least 1".into()).into());
        }
        match &strategy {
            GenStrategy::OneHot => {}
            GenStrategy::RandomPlacement(spec) => {
                if dim == 0 {
                    return Err(RiError::InvalidParameters("dim must be positive".into()).into());
                }
                if spec.max_r() as usize > dim {
                    return Err(RiError::InvalidParameters(format!(
                        "max r {} exceeds dim {dim}",
                        spec.max_r()
                    ))
                    .into());
                }
            }
            GenStrategy::HalfSplit(spec) => {
                if dim == 0 {
                    return Err(RiError::InvalidParameters("dim must be positive".into()).into());
                }
                if let Some(odd) = spec.support().find(|r| r % 2 != 0) {
                    return Err(RiError::InvalidParameters(format!(
                        "half-split support must be even, found {odd}"
                    ))
                    .into());
                }
                if spec.max_r() as usize / 2 > dim / 2 {
                    return Err(RiError::InvalidParameters(format!(
                        "half-split max r {} does not fit dim {dim}",
                        spec.max_r()
                    ))
                    .into());
                }
            }
        }
        Ok(Self {
            dim,
            strategy,
            window,
            seed,
        })
    }

    /// Number of distinct context vectors this configuration can hand out,
    /// evaluated at the largest supported r.
    pub fn representation_capacity(&self, dim: usize) -> BigUint {
        strategy_capacity(dim, &self.strategy)
    }
}

/// Distinct context vectors a strategy can produce in dimension `dim`, at
/// the largest supported r.
pub fn strategy_capacity(dim: usize, strategy: &GenStrategy) -> BigUint {
    match strategy {
        GenStrategy::OneHot => BigUint::from(dim),
        GenStrategy::RandomPlacement(spec) => {
            ortho::capacity(dim as u64, u64::from(spec.max_r()), 2)
                .unwrap_or_else(|_| BigUint::from(0u32))
        }
        GenStrategy::HalfSplit(spec) => {
            let half = (spec.max_r() / 2) as u64;
            let lower = (dim / 2) as u64;
            let upper = (dim - dim / 2) as u64;
            ortho::binomial(lower, half) * ortho::binomial(upper, half)
        }
    }
}

/// One time slice's semantic space: the word → context vector map, the
/// accumulated semantic vectors, and per-word occurrence counts.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticSpace {
    config: SpaceConfig,
    slice_label: String,
    /// Words in vocabulary (first-occurrence) order.
    words: Vec<String>,
    index: HashMap<String, usize>,
    context: Vec<ContextVector>,
    semantic: Vec<SemanticVector>,
    frequency: Vec<u64>,
    total_tokens: u64,
}

impl SemanticSpace {
    pub(crate) fn from_parts(
        config: SpaceConfig,
        slice_label: String,
        words: Vec<String>,
        context: Vec<ContextVector>,
        semantic: Vec<SemanticVector>,
        frequency: Vec<u64>,
        total_tokens: u64,
    ) -> Result<Self, SpaceError> {
        if words.len() != context.len()
            || words.len() != semantic.len()
            || words.len() != frequency.len()
        {
            return Err(RiError::InvalidParameters("mismatched table lengths".into()).into());
        }
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(RiError::InvalidParameters(format!("duplicate word {w:?}")).into());
            }
        }
        let mut seen = HashSet::with_capacity(context.len());
        for (w, cv) in words.iter().zip(&context) {
            if cv.dim() != config.dim {
                return Err(RiError::DimensionMismatch {
                    left: config.dim,
                    right: cv.dim(),
                }
                .into());
            }
            if !seen.insert(cv.clone()) {
                return Err(RiError::InvalidParameters(format!(
                    "context map not injective at {w:?}"
                ))
                .into());
            }
        }
        for sv in &semantic {
            if sv.dim() != config.dim {
                return Err(RiError::DimensionMismatch {
                    left: config.dim,
                    right: sv.dim(),
                }
                .into());
            }
        }
        Ok(Self {
            config,
            slice_label,
            words,
            index,
            context,
            semantic,
            frequency,
            total_tokens,
        })
    }

    pub fn config(&self) -> &SpaceConfig {
        &self.config
    }

    pub fn slice_label(&self) -> &str {
        &self.slice_label
    }

    /// Vocabulary in first-occurrence order.
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn context_vector(&self, word: &str) -> Option<&ContextVector> {
        self.index.get(word).map(|&i| &self.context[i])
    }

    pub fn semantic_vector(&self, word: &str) -> Option<&SemanticVector> {
        self.index.get(word).map(|&i| &self.semantic[i])
    }

    /// Occurrence count of `word` in the slice.
    pub fn frequency(&self, word: &str) -> u64 {
        self.index
            .get(word)
            .map(|&i| self.frequency[i])
            .unwrap_or(0)
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Normalized frequency: occurrences over total slice tokens, exact.
    /// Absent words get the smoothing floor 1 / (total + 1).
    pub fn norm_freq(&self, word: &str) -> Ratio<u64> {
        match self.index.get(word) {
            Some(&i) => Ratio::new(self.frequency[i], self.total_tokens.max(1)),
            None => Ratio::new(1, self.total_tokens + 1),
        }
    }

    /// Angle between the semantic vectors of two words.
    ///
    /// Zero vectors take the neutral fallback π/2 rather than erroring, so
    /// isolated words rank as unrelated instead of aborting a run.
    pub fn angle_between(&self, word: &str, query: &str) -> Result<f64, SpaceError> {
        let wi = self.require(word)?;
        let qi = self.require(query)?;
        match ri::angle(&self.semantic[wi], &self.semantic[qi]) {
            Ok(theta) => Ok(theta),
            Err(RiError::UndefinedAngle) => Ok(FRAC_PI_2),
            Err(e) => Err(e.into()),
        }
    }

    fn require(&self, word: &str) -> Result<usize, SpaceError> {
        self.index
            .get(word)
            .copied()
            .ok_or_else(|| SpaceError::UnknownWord {
                word: word.to_string(),
            })
    }
}

/// Assign a distinct context vector to every word.
///
/// Words already present in `shared` keep their previous vector so that
/// cross-slice angles stay comparable; fresh words are drawn until distinct,
/// resampling on collision. One-hot hands out basis indices in vocabulary
/// order, skipping indices already used by `shared`.
pub fn assign_context_vectors(
    vocab: &[String],
    dim: usize,
    strategy: &GenStrategy,
    shared: Option<&HashMap<String, ContextVector>>,
    rng: &mut ChaCha12Rng,
) -> Result<HashMap<String, ContextVector>, SpaceError> {
    let cap = strategy_capacity(dim, strategy);
    if cap < BigUint::from(vocab.len()) {
        let max_r = strategy.rspec().map(|s| s.max_r()).unwrap_or(1);
        return Err(SpaceError::CapacityExceeded {
            n: dim,
            max_r,
            capacity: cap,
            vocab: vocab.len(),
        });
    }

    let mut map = HashMap::with_capacity(vocab.len());
    let mut used: HashSet<ContextVector> = HashSet::with_capacity(vocab.len());
    if let Some(shared) = shared {
        for cv in shared.values() {
            used.insert(cv.clone());
        }
    }

    match strategy {
        GenStrategy::OneHot => {
            let used_idx: HashSet<u32> = used
                .iter()
                .map(|cv| cv.entries().first().map(|&(i, _)| i).unwrap_or(0))
                .collect();
            let mut next = 0u32;
            for word in vocab {
                if let Some(cv) = shared.and_then(|s| s.get(word)) {
                    map.insert(word.clone(), cv.clone());
                    continue;
                }
                while used_idx.contains(&next) {
                    next += 1;
                }
                if next as usize >= dim {
                    return Err(SpaceError::CapacityExceeded {
                        n: dim,
                        max_r: 1,
                        capacity: BigUint::from(dim),
                        vocab: vocab.len(),
                    });
                }
                map.insert(word.clone(), ContextVector::one_hot(dim, next as usize)?);
                next += 1;
            }
        }
        _ => {
            for word in vocab {
                if let Some(cv) = shared.and_then(|s| s.get(word)) {
                    map.insert(word.clone(), cv.clone());
                    continue;
                }
                let mut assigned = false;
                for _ in 0..MAX_ASSIGN_ATTEMPTS {
                    let cv = generate_context_vector(dim, strategy, 0, rng)?;
                    if used.insert(cv.clone()) {
                        map.insert(word.clone(), cv);
                        assigned = true;
                        break;
                    }
                }
                if !assigned {
                    return Err(SpaceError::AssignmentExhausted {
                        word: word.clone(),
                        attempts: MAX_ASSIGN_ATTEMPTS,
                    });
                }
            }
        }
    }
    Ok(map)
}

/// Accumulate semantic vectors for one slice: for every occurrence of a
/// word, the context vectors of the tokens up to `window` positions away on
/// each side are summed in, clipped at document boundaries and never
/// crossing documents. The stored quantity is the plain sum; the cosine
/// angle downstream is scale-invariant, and integer sums keep accumulation
/// exact and order-independent.
pub fn build_semantic_vectors(
    slice: &CorpusSlice,
    context: &HashMap<String, ContextVector>,
    window: usize,
    dim: usize,
) -> Result<HashMap<String, SemanticVector>, SpaceError> {
    let words = slice.vocabulary();
    let mut local: HashMap<&str, usize> = HashMap::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        local.insert(w.as_str(), i);
    }
    let mut ctx_by_idx = Vec::with_capacity(words.len());
    for w in words {
        let cv = context
            .get(w)
            .ok_or_else(|| SpaceError::MissingToken { token: w.clone() })?;
        ctx_by_idx.push(cv.clone());
    }
    let semantic = accumulate(slice, &local, &ctx_by_idx, window, dim)?;
    Ok(words.iter().cloned().zip(semantic).collect())
}

fn accumulate(
    slice: &CorpusSlice,
    local: &HashMap<&str, usize>,
    ctx_by_idx: &[ContextVector],
    window: usize,
    dim: usize,
) -> Result<Vec<SemanticVector>, SpaceError> {
    let mut semantic = vec![SemanticVector::zeros(dim); ctx_by_idx.len()];
    let mut doc_idx: Vec<usize> = Vec::new();
    for doc in slice.documents() {
        doc_idx.clear();
        for t in &doc.tokens {
            let &i = local
                .get(t.as_str())
                .ok_or_else(|| SpaceError::MissingToken { token: t.clone() })?;
            doc_idx.push(i);
        }
        let len = doc_idx.len();
        for pos in 0..len {
            let lo = pos.saturating_sub(window);
            let hi = (pos + window).min(len.saturating_sub(1));
            for nb in lo..=hi {
                if nb != pos {
                    semantic[doc_idx[pos]].add_context(&ctx_by_idx[doc_idx[nb]])?;
                }
            }
        }
    }
    Ok(semantic)
}

/// Build one semantic space per slice, sharing a single context-vector
/// assignment over the union vocabulary. For one-hot, the dimension is the
/// union vocabulary size.
pub fn build_spaces(
    corpus: &TimeSlicedCorpus,
    config: &SpaceConfig,
) -> Result<Vec<SemanticSpace>, SpaceError> {
    let union = corpus.union_vocabulary();
    let dim = match config.strategy {
        GenStrategy::OneHot => union.len(),
        _ => config.dim,
    };
    if union.is_empty() {
        log::warn!("building from an empty vocabulary");
    }
    let resolved = SpaceConfig {
        dim,
        strategy: config.strategy.clone(),
        window: config.window,
        seed: config.seed,
    };
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let shared = if union.is_empty() {
        HashMap::new()
    } else {
        assign_context_vectors(&union, dim, &config.strategy, None, &mut rng)?
    };

    let mut spaces = Vec::with_capacity(corpus.slices().len());
    for slice in corpus.slices() {
        let words: Vec<String> = slice.vocabulary().to_vec();
        let mut local: HashMap<&str, usize> = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            local.insert(w.as_str(), i);
        }
        let mut context = Vec::with_capacity(words.len());
        for w in &words {
            context.push(
                shared
                    .get(w)
                    .cloned()
                    .ok_or_else(|| SpaceError::MissingToken { token: w.clone() })?,
            );
        }
        let semantic = accumulate(slice, &local, &context, config.window, dim)?;
        let frequency: Vec<u64> = words.iter().map(|w| slice.count(w)).collect();
        spaces.push(SemanticSpace::from_parts(
            resolved.clone(),
            slice.label().to_string(),
            words,
            context,
            semantic,
            frequency,
            slice.total_tokens(),
        )?);
    }
    Ok(spaces)
}
