//! Sparse signed context vectors, dense integer semantic vectors, and the
//! distribution on the number of nonzero entries.
//!
//! A context vector is an `n`-dimensional vector with `r` nonzero entries,
//! each +1 or -1, stored as a sorted sparse index set. Semantic vectors are
//! exact integer accumulators so that accumulation is associative and
//! order-independent.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive};
use rand::Rng;
use thiserror::Error;

/// Errors from vector construction and arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RiError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("angle undefined: operand is the zero vector")]
    UndefinedAngle,
}

/// Sparse context vector: `r` entries of ±1 at distinct indices of an
/// `n`-dimensional vector. Entries are kept in ascending index order, which
/// is also the canonical serialization order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContextVector {
    dim: usize,
    entries: Vec<(u32, i8)>,
}

impl ContextVector {
    /// Build from raw entries. Indices are sorted; duplicates, out-of-range
    /// indices, and signs other than ±1 are rejected.
    pub fn new(dim: usize, mut entries: Vec<(u32, i8)>) -> Result<Self, RiError> {
        if dim == 0 {
            return Err(RiError::InvalidParameters("dim must be positive".into()));
        }
        if entries.is_empty() || entries.len() > dim {
            return Err(RiError::InvalidParameters(format!(
                "entry count {} outside [1, {dim}]",
                entries.len()
            )));
        }
        entries.sort_unstable_by_key(|&(i, _)| i);
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(RiError::InvalidParameters(format!(
                    "duplicate index {}",
                    pair[0].0
                )));
            }
        }
        for &(i, s) in &entries {
            if i as usize >= dim {
                return Err(RiError::InvalidParameters(format!(
                    "index {i} out of range for dim {dim}"
                )));
            }
            if s != 1 && s != -1 {
                return Err(RiError::InvalidParameters(format!(
                    "sign {s} not in {{+1,-1}}"
                )));
            }
        }
        Ok(Self { dim, entries })
    }

    /// The standard basis vector with a single +1 at `index`.
    pub fn one_hot(dim: usize, index: usize) -> Result<Self, RiError> {
        if index >= dim {
            return Err(RiError::InvalidParameters(format!(
                "one-hot index {index} out of range for dim {dim}"
            )));
        }
        Ok(Self {
            dim,
            entries: vec![(index as u32, 1)],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero entries as (index, sign), ascending by index.
    pub fn entries(&self) -> &[(u32, i8)] {
        &self.entries
    }

    /// Number of nonzero entries (the vector's `r`).
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Same support, every sign flipped.
    pub fn negated(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&(i, s)| (i, -s)).collect(),
        }
    }

    /// Sparse dot product via merge walk over the sorted supports.
    pub fn dot(&self, other: &Self) -> Result<i64, RiError> {
        if self.dim != other.dim {
            return Err(RiError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        let mut acc: i64 = 0;
        while let (Some(&&(ia, sa)), Some(&&(ib, sb))) = (a.peek(), b.peek()) {
            match ia.cmp(&ib) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => {
                    acc += i64::from(sa) * i64::from(sb);
                    a.next();
                    b.next();
                }
            }
        }
        Ok(acc)
    }

    /// Dense expansion, mostly useful in tests and exports.
    pub fn to_dense(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.dim];
        for &(i, s) in &self.entries {
            v[i as usize] = i64::from(s);
        }
        v
    }
}

impl fmt::Display for ContextVector {
    /// Canonical text form `n;idx:sign,idx:sign,...` with ascending indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.dim)?;
        for (pos, &(i, s)) in self.entries.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}:{}", i, if s > 0 { "+1" } else { "-1" })?;
        }
        Ok(())
    }
}

impl FromStr for ContextVector {
    type Err = RiError;

    fn from_str(s: &str) -> Result<Self, RiError> {
        let bad = |m: &str| RiError::InvalidParameters(format!("bad context vector text: {m}"));
        let (dim_part, rest) = s.split_once(';').ok_or_else(|| bad("missing ';'"))?;
        let dim: usize = dim_part.trim().parse().map_err(|_| bad("dim"))?;
        let mut entries = Vec::new();
        for item in rest.split(',').filter(|t| !t.trim().is_empty()) {
            let (i, sg) = item.split_once(':').ok_or_else(|| bad("missing ':'"))?;
            let idx: u32 = i.trim().parse().map_err(|_| bad("index"))?;
            let sign = match sg.trim() {
                "+1" | "1" => 1i8,
                "-1" => -1i8,
                other => return Err(bad(&format!("sign {other:?}"))),
            };
            entries.push((idx, sign));
        }
        ContextVector::new(dim, entries)
    }
}

/// Discrete distribution on the number of nonzero entries `r`.
///
/// Weights are exact rationals so that downstream expectations stay exact; a
/// fixed `r` is the point-mass special case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RSpec {
    /// (r, weight) sorted ascending by r, weights summing to 1.
    entries: Vec<(u32, Ratio<u64>)>,
}

impl RSpec {
    /// Point mass at a fixed `r`.
    pub fn fixed(r: u32) -> Result<Self, RiError> {
        Self::weighted(vec![(r, Ratio::one())])
    }

    /// Uniform distribution over the given support.
    pub fn uniform<I: IntoIterator<Item = u32>>(support: I) -> Result<Self, RiError> {
        let vals: Vec<u32> = support.into_iter().collect();
        if vals.is_empty() {
            return Err(RiError::InvalidParameters("empty support".into()));
        }
        let w = Ratio::new(1u64, vals.len() as u64);
        Self::weighted(vals.into_iter().map(|r| (r, w)).collect())
    }

    /// Explicit weights; they must be nonnegative and sum to 1 within 1e-12.
    pub fn weighted(mut entries: Vec<(u32, Ratio<u64>)>) -> Result<Self, RiError> {
        if entries.is_empty() {
            return Err(RiError::InvalidParameters("empty support".into()));
        }
        entries.sort_unstable_by_key(|&(r, _)| r);
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(RiError::InvalidParameters(format!(
                    "duplicate support value {}",
                    pair[0].0
                )));
            }
        }
        if entries.iter().any(|&(r, _)| r == 0) {
            return Err(RiError::InvalidParameters(
                "support values must be positive".into(),
            ));
        }
        // Exact sum, then a float-tolerance gate for user-supplied weights.
        let sum: BigRational = entries
            .iter()
            .map(|(_, w)| BigRational::new(BigInt::from(*w.numer()), BigInt::from(*w.denom())))
            .sum();
        let err = (sum - BigRational::one()).abs();
        if err.to_f64().unwrap_or(f64::INFINITY) > 1e-12 {
            return Err(RiError::InvalidParameters(
                "weights must sum to 1 within 1e-12".into(),
            ));
        }
        Ok(Self { entries })
    }

    /// Support values, ascending.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|&(r, _)| r)
    }

    /// (r, weight) pairs, ascending by r.
    pub fn entries(&self) -> &[(u32, Ratio<u64>)] {
        &self.entries
    }

    pub fn max_r(&self) -> u32 {
        self.entries.last().map(|&(r, _)| r).unwrap_or(0)
    }

    pub fn is_point_mass(&self) -> bool {
        self.entries.len() == 1
    }

    /// Draw one `r`: a uniform variate mapped through the cumulative weights.
    pub fn sample_r<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.gen();
        let mut cum = 0.0;
        for &(r, w) in &self.entries {
            cum += w.to_f64().unwrap_or(0.0);
            if u < cum {
                return r;
            }
        }
        // Rounding slack in the cumulative sum lands on the last value.
        self.entries[self.entries.len() - 1].0
    }
}

impl fmt::Display for RSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point_mass() {
            return write!(f, "{}", self.entries[0].0);
        }
        let uniform = self
            .entries
            .iter()
            .all(|&(_, w)| w == Ratio::new(1, self.entries.len() as u64));
        if uniform {
            write!(f, "uniform{{")?;
            for (pos, &(r, _)) in self.entries.iter().enumerate() {
                if pos > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{r}")?;
            }
            write!(f, "}}")
        } else {
            write!(f, "weights{{")?;
            for (pos, &(r, w)) in self.entries.iter().enumerate() {
                if pos > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{r}={w}")?;
            }
            write!(f, "}}")
        }
    }
}

/// How context vectors are placed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenStrategy {
    /// Distinct standard basis vectors; forces r = 1, sign +1 and
    /// dim = vocabulary size.
    OneHot,
    /// Indices uniform without replacement, signs i.i.d. ±1.
    RandomPlacement(RSpec),
    /// r/2 entries of +1 in the lower index half, r/2 entries of -1 in the
    /// upper half; requires even r.
    HalfSplit(RSpec),
}

impl GenStrategy {
    pub fn rspec(&self) -> Option<&RSpec> {
        match self {
            GenStrategy::OneHot => None,
            GenStrategy::RandomPlacement(s) | GenStrategy::HalfSplit(s) => Some(s),
        }
    }
}

impl fmt::Display for GenStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenStrategy::OneHot => write!(f, "onehot"),
            GenStrategy::RandomPlacement(s) => write!(f, "random r={s}"),
            GenStrategy::HalfSplit(s) => write!(f, "halfsplit r={s}"),
        }
    }
}

/// Generate one context vector.
///
/// `word_index` selects the basis vector in one-hot mode and is ignored by
/// the random modes. The sampled r must not exceed `dim`; half-split
/// additionally requires r even with r/2 ≤ dim/2.
pub fn generate_context_vector<R: Rng + ?Sized>(
    dim: usize,
    strategy: &GenStrategy,
    word_index: usize,
    rng: &mut R,
) -> Result<ContextVector, RiError> {
    match strategy {
        GenStrategy::OneHot => ContextVector::one_hot(dim, word_index),
        GenStrategy::RandomPlacement(spec) => {
            let r = spec.sample_r(rng) as usize;
            if r > dim {
                return Err(RiError::InvalidParameters(format!(
                    "r={r} exceeds dim={dim}"
                )));
            }
            let mut idxs: Vec<u32> = sample_without_replacement(dim, r, rng);
            idxs.sort_unstable();
            // Signs are drawn in ascending index order so a given seed always
            // produces the same canonical vector.
            let entries = idxs
                .into_iter()
                .map(|i| (i, if rng.gen::<bool>() { 1i8 } else { -1i8 }))
                .collect();
            ContextVector::new(dim, entries)
        }
        GenStrategy::HalfSplit(spec) => {
            let r = spec.sample_r(rng) as usize;
            if r % 2 != 0 {
                return Err(RiError::InvalidParameters(format!(
                    "half-split requires even r, got {r}"
                )));
            }
            let half = dim / 2;
            if r / 2 > half {
                return Err(RiError::InvalidParameters(format!(
                    "half-split r={r} does not fit dim={dim}"
                )));
            }
            let mut lower = sample_without_replacement(half, r / 2, rng);
            lower.sort_unstable();
            let mut upper = sample_without_replacement(dim - half, r / 2, rng);
            upper.sort_unstable();
            let entries = lower
                .into_iter()
                .map(|i| (i, 1i8))
                .chain(upper.into_iter().map(|i| (i + half as u32, -1i8)))
                .collect();
            ContextVector::new(dim, entries)
        }
    }
}

/// k distinct values from [0, n), uniform, via partial Fisher-Yates.
fn sample_without_replacement<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<u32> {
    debug_assert!(k <= n);
    let mut pool: Vec<u32> = (0..n as u32).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

/// Dense integer semantic vector; the exact sum of contributed context
/// vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticVector {
    counts: Vec<i64>,
}

impl SemanticVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            counts: vec![0; dim],
        }
    }

    pub fn from_counts(counts: Vec<i64>) -> Self {
        Self { counts }
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Add one context vector into the accumulator.
    pub fn add_context(&mut self, cv: &ContextVector) -> Result<(), RiError> {
        if cv.dim() != self.counts.len() {
            return Err(RiError::DimensionMismatch {
                left: self.counts.len(),
                right: cv.dim(),
            });
        }
        for &(i, s) in cv.entries() {
            self.counts[i as usize] += i64::from(s);
        }
        Ok(())
    }

    /// Merge another accumulator (integer vector addition).
    pub fn merge(&mut self, other: &SemanticVector) -> Result<(), RiError> {
        if other.dim() != self.dim() {
            return Err(RiError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }

    pub fn dot(&self, other: &SemanticVector) -> Result<i128, RiError> {
        if other.dim() != self.dim() {
            return Err(RiError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(&a, &b)| i128::from(a) * i128::from(b))
            .sum())
    }

    pub fn norm_sq(&self) -> i128 {
        self.counts
            .iter()
            .map(|&c| i128::from(c) * i128::from(c))
            .sum()
    }
}

/// Angle between two nonzero semantic vectors, in [0, π].
///
/// The cosine is clamped to [-1, 1] before arccos to absorb float rounding.
/// A zero operand is an error; callers that want a neutral fallback apply
/// their own policy.
pub fn angle(a: &SemanticVector, b: &SemanticVector) -> Result<f64, RiError> {
    if a.dim() != b.dim() {
        return Err(RiError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    if a.is_zero() || b.is_zero() {
        return Err(RiError::UndefinedAngle);
    }
    let dot = a.dot(b)? as f64;
    // One square root over the norm product keeps the identity case exact:
    // cos(a, a) evaluates to exactly 1 whenever the integer products fit f64.
    let cos = dot / (a.norm_sq() as f64 * b.norm_sq() as f64).sqrt();
    Ok(cos.clamp(-1.0, 1.0).acos())
}
