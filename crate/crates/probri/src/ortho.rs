//! Exact combinatorics of the random-indexing space: representation
//! capacity, orthogonality probabilities, expectation under a distribution
//! on r, and minimal-dimension search.
//!
//! Everything is computed in arbitrary-precision integers; probabilities are
//! exact rationals rendered to floats only at the presentation boundary.
//! For two vectors of sparsities r1 and r2 in dimension n, the number of
//! r1-sparse vectors orthogonal to a fixed r2-sparse vector is
//!
//! ```text
//! eta(r1, r2, n) = sum_k  C(r2, 2k) * C(2k, k) * 2^(r1-2k) * C(n-r2, r1-2k)
//! ```
//!
//! summed over 0 <= k <= floor(r1/2): the two supports must overlap in an
//! even number 2k of places whose sign products cancel, and the remaining
//! r1-2k entries sit outside the fixed support with free signs.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::ri::RSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrthoError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// C(n, k), with C(n, k) = 0 for k > n.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

/// Representation capacity N(n, r, K) = C(n, r) * K^r: the number of
/// distinct context vectors of dimension n with r nonzero entries drawn
/// from a sign alphabet of size K.
pub fn capacity(n: u64, r: u64, k: u8) -> Result<BigUint, OrthoError> {
    if r == 0 || r > n {
        return Err(OrthoError::InvalidParameters(format!(
            "need 0 < r <= n, got r={r}, n={n}"
        )));
    }
    if k != 1 && k != 2 {
        return Err(OrthoError::InvalidParameters(format!(
            "K must be 1 or 2, got {k}"
        )));
    }
    Ok(binomial(n, r) * BigUint::from(k).pow(r as u32))
}

/// Number of sign-cancelling overlap patterns: C(r2, 2k) * C(2k, k) ways to
/// pick 2k shared positions out of r2 and cancel their sign products.
/// The overlap argument is the even count 2k itself.
pub fn phi(overlap: u64, r2: u64) -> Result<BigUint, OrthoError> {
    if overlap % 2 != 0 {
        return Err(OrthoError::InvalidParameters(format!(
            "overlap must be even, got {overlap}"
        )));
    }
    Ok(binomial(r2, overlap) * binomial(overlap, overlap / 2))
}

/// Count of r1-sparse ±1 vectors orthogonal to a fixed r2-sparse ±1 vector
/// in dimension n. Total over all overlap sizes; terms that do not fit
/// (overlap beyond r2, or remainder beyond n-r2) vanish through the
/// C(n, k>n) = 0 convention, which also covers n < r1 + r2.
pub fn eta(r1: u64, r2: u64, n: u64) -> BigUint {
    let avail = n.saturating_sub(r2);
    let mut total = BigUint::zero();
    for k in 0..=(r1 / 2) {
        let rem = r1 - 2 * k;
        let term = phi(2 * k, r2).expect("2k is even")
            * BigUint::from(2u32).pow(rem as u32)
            * binomial(avail, rem);
        total += term;
    }
    total
}

/// Exact orthogonality probability as a numerator/denominator pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoResult {
    numerator: BigUint,
    denominator: BigUint,
}

impl OrthoResult {
    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    /// The probability as an exact rational.
    pub fn probability(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerator.clone()),
            BigInt::from(self.denominator.clone()),
        )
    }

    /// Float rendering; differs from the exact rational by far less than
    /// 1e-12.
    pub fn as_f64(&self) -> f64 {
        self.probability().to_f64().unwrap_or(f64::NAN)
    }
}

/// Probability that two independently drawn ±1 context vectors of
/// sparsities r1 and r2 in dimension n are orthogonal: eta / N.
///
/// The pair is normalized to r1 <= r2 internally; the probability is
/// symmetric in (r1, r2), so this only fixes which capacity appears as the
/// denominator.
pub fn p_ortho(r1: u64, r2: u64, n: u64) -> Result<OrthoResult, OrthoError> {
    let (a, b) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    if a == 0 {
        return Err(OrthoError::InvalidParameters("r must be positive".into()));
    }
    if b > n {
        return Err(OrthoError::InvalidParameters(format!(
            "sparsity {b} exceeds dimension {n}"
        )));
    }
    Ok(OrthoResult {
        numerator: eta(a, b, n),
        denominator: capacity(n, a, 2)?,
    })
}

/// K = 1 case: all nonzero entries are +1, so orthogonality is exactly
/// support disjointness and the probability is C(n-r, r) / C(n, r).
/// When 2r > n no disjoint pair exists and the numerator is zero.
pub fn p_ortho_k1(r: u64, n: u64) -> Result<OrthoResult, OrthoError> {
    if r == 0 || r > n {
        return Err(OrthoError::InvalidParameters(format!(
            "need 0 < r <= n, got r={r}, n={n}"
        )));
    }
    Ok(OrthoResult {
        numerator: binomial(n.saturating_sub(r), r),
        denominator: binomial(n, r),
    })
}

/// Expected orthogonality probability when both sparsities are drawn
/// independently from `spec`:
///
/// ```text
/// E = sum_{ri, rj} P(ri) * P(rj) * p_ortho(ri, rj | n)
/// ```
///
/// A point mass at α returns exactly p_ortho(α, α, n).
pub fn expected_p_ortho(spec: &RSpec, n: u64) -> Result<BigRational, OrthoError> {
    if u64::from(spec.max_r()) > n {
        return Err(OrthoError::InvalidParameters(format!(
            "support value {} exceeds dimension {n}",
            spec.max_r()
        )));
    }
    let weights: Vec<(u64, BigRational)> = spec
        .entries()
        .iter()
        .map(|&(r, w)| {
            (
                u64::from(r),
                BigRational::new(BigInt::from(*w.numer()), BigInt::from(*w.denom())),
            )
        })
        .collect();
    let mut total = BigRational::zero();
    for (ri, wi) in &weights {
        for (rj, wj) in &weights {
            total += wi * wj * p_ortho(*ri, *rj, n)?.probability();
        }
    }
    Ok(total)
}

/// Result of the minimal-dimension search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cutoff {
    /// Smallest n achieving the target probability.
    pub n: u64,
    /// Word capacity N(n, r, 2) at that n.
    pub capacity: BigUint,
}

/// Smallest n in [r, n_max] with p_ortho(r, r, n) >= p_min, by ascending
/// scan (the probability is nondecreasing in n, a tested property rather
/// than an assumption here). Returns None when no n within the bound
/// reaches the target.
pub fn cutoff_n(r: u64, p_min: &BigRational, n_max: u64) -> Result<Option<Cutoff>, OrthoError> {
    if p_min <= &BigRational::zero() || p_min >= &BigRational::one() {
        return Err(OrthoError::InvalidParameters(
            "p_min must lie strictly between 0 and 1".into(),
        ));
    }
    if r == 0 {
        return Err(OrthoError::InvalidParameters("r must be positive".into()));
    }
    for n in r..=n_max {
        if &p_ortho(r, r, n)?.probability() >= p_min {
            return Ok(Some(Cutoff {
                n,
                capacity: capacity(n, r, 2)?,
            }));
        }
    }
    Ok(None)
}

/// Parse a decimal string such as "0.95" into an exact rational.
/// Cutoff targets stay exact this way instead of passing through a float.
pub fn parse_decimal_rational(s: &str) -> Result<BigRational, OrthoError> {
    let bad = || OrthoError::InvalidParameters(format!("not a decimal number: {s:?}"));
    let t = s.trim();
    let (sign, t) = match t.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, t),
    };
    let (int_part, frac_part) = match t.split_once('.') {
        Some((i, f)) => (i, f),
        None => (t, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(num * sign, den))
}
