//! Shared test support: independent oracles (exhaustive enumeration, the
//! closed-form special cases, a dense co-occurrence reimplementation of the
//! suggestion algorithm), synthetic corpora, and small least-squares fits.
//!
//! Everything here is deliberately written against plain data structures,
//! not the library's internals, so the two routes stay independent.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

pub fn big_ratio(n: u128, d: u128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

// ---------------------------------------------------------------------
// enumeration oracle

/// C(n, k) in u128; plenty for the enumeration and closed-form ranges.
pub fn binom_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Every dense ±1 vector of dimension n with exactly r nonzero entries.
pub fn all_sign_vectors(n: usize, r: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut support = Vec::new();
    enumerate_supports(n, r, 0, &mut support, &mut out);
    out
}

fn enumerate_supports(
    n: usize,
    r: usize,
    start: usize,
    support: &mut Vec<usize>,
    out: &mut Vec<Vec<i64>>,
) {
    if support.len() == r {
        for mask in 0u32..(1 << r) {
            let mut v = vec![0i64; n];
            for (bit, &idx) in support.iter().enumerate() {
                v[idx] = if mask & (1 << bit) != 0 { 1 } else { -1 };
            }
            out.push(v);
        }
        return;
    }
    for i in start..n {
        support.push(i);
        enumerate_supports(n, r, i + 1, support, out);
        support.pop();
    }
}

fn dense_dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Exhaustive orthogonality probability over all ordered (v1, v2) pairs
/// with the given sparsities.
pub fn brute_force_p_ortho(r1: usize, r2: usize, n: usize) -> BigRational {
    let v1s = all_sign_vectors(n, r1);
    let v2s = all_sign_vectors(n, r2);
    let mut orth: u128 = 0;
    for a in &v1s {
        for b in &v2s {
            if dense_dot(a, b) == 0 {
                orth += 1;
            }
        }
    }
    big_ratio(orth, (v1s.len() * v2s.len()) as u128)
}

/// Exhaustive K=1 orthogonality probability (all nonzero entries +1).
pub fn brute_force_p_ortho_k1(r: usize, n: usize) -> BigRational {
    let supports: Vec<Vec<usize>> = {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == r {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(n, r, i + 1, cur, out);
                cur.pop();
            }
        }
        rec(n, r, 0, &mut cur, &mut out);
        out
    };
    let mut orth: u128 = 0;
    for a in &supports {
        for b in &supports {
            if a.iter().all(|i| !b.contains(i)) {
                orth += 1;
            }
        }
    }
    big_ratio(orth, (supports.len() * supports.len()) as u128)
}

/// The closed-form orthogonality probabilities for r = 2..6 with K = 2,
/// written out term by term as a second route independent of the general
/// overlap sum.
pub fn closed_form_p(r: u64, n: u64) -> Option<BigRational> {
    let c = binom_u128;
    let numerator: u128 = match r {
        2 => c(n - 2, 2) * 4 + 2,
        3 => c(n - 3, 3) * 8 + c(3, 2) * c(n - 3, 1) * 2 * 2,
        4 => c(n - 4, 4) * 16 + c(4, 2) * c(n - 4, 2) * 4 * 2 + 6,
        5 => c(n - 5, 5) * 32 + c(5, 2) * c(n - 5, 3) * 8 * 2 + c(5, 4) * c(n - 5, 1) * 2 * 6,
        6 => c(n - 6, 6) * 64 + c(6, 2) * c(n - 6, 4) * 16 * 2 + c(6, 4) * c(n - 6, 2) * 4 * 6 + 20,
        _ => return None,
    };
    let denominator = c(n, r) * (1u128 << r);
    Some(big_ratio(numerator, denominator))
}

// ---------------------------------------------------------------------
// dense co-occurrence oracle for the one-hot pipeline

/// Token documents for one slice.
pub type Docs = Vec<Vec<String>>;

struct DenseSlice {
    vocab: Vec<String>,
    index: HashMap<String, usize>,
    /// Co-occurrence counts within the window, dim = union vocabulary.
    rows: Vec<Vec<i64>>,
    counts: Vec<u64>,
    total_tokens: u64,
}

fn union_vocab(pre: &Docs, post: &Docs) -> Vec<String> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for doc in pre.iter().chain(post) {
        for t in doc {
            if !seen.contains_key(t) {
                seen.insert(t.clone(), out.len());
                out.push(t.clone());
            }
        }
    }
    out
}

fn dense_slice(docs: &Docs, union: &[String], window: usize) -> DenseSlice {
    let union_index: HashMap<&str, usize> = union
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    // slice vocabulary in first-occurrence order
    let mut vocab = Vec::new();
    let mut index = HashMap::new();
    let mut counts = Vec::new();
    let mut total = 0u64;
    for doc in docs {
        for t in doc {
            if !index.contains_key(t) {
                index.insert(t.clone(), vocab.len());
                vocab.push(t.clone());
                counts.push(0);
            }
            counts[index[t]] += 1;
            total += 1;
        }
    }
    let mut rows = vec![vec![0i64; union.len()]; vocab.len()];
    for doc in docs {
        let positions: Vec<usize> = doc.iter().map(|t| index[t]).collect();
        for (pos, &w) in positions.iter().enumerate() {
            let lo = pos.saturating_sub(window);
            let hi = (pos + window).min(doc.len().saturating_sub(1));
            for nb in lo..=hi {
                if nb != pos {
                    rows[w][union_index[doc[nb].as_str()]] += 1;
                }
            }
        }
    }
    DenseSlice {
        vocab,
        index,
        rows,
        counts,
        total_tokens: total,
    }
}

impl DenseSlice {
    fn angle(&self, a: usize, b: usize) -> f64 {
        let ra = &self.rows[a];
        let rb = &self.rows[b];
        if ra.iter().all(|&x| x == 0) || rb.iter().all(|&x| x == 0) {
            return std::f64::consts::FRAC_PI_2;
        }
        let dot: i128 = ra
            .iter()
            .zip(rb)
            .map(|(&x, &y)| i128::from(x) * i128::from(y))
            .sum();
        let na: i128 = ra.iter().map(|&x| i128::from(x) * i128::from(x)).sum();
        let nb: i128 = rb.iter().map(|&x| i128::from(x) * i128::from(x)).sum();
        let cos = dot as f64 / (na as f64 * nb as f64).sqrt();
        cos.clamp(-1.0, 1.0).acos()
    }

    fn freq(&self, word: &str) -> f64 {
        match self.index.get(word) {
            Some(&i) => Ratio::new(self.counts[i], self.total_tokens.max(1))
                .to_f64()
                .unwrap(),
            None => Ratio::new(1u64, self.total_tokens + 1).to_f64().unwrap(),
        }
    }

    /// (word, angle-to-query) ascending, ties lexicographic, query removed.
    fn ranked(&self, query: &str) -> Vec<(String, f64)> {
        let q = self.index[query];
        let mut entries: Vec<(String, f64)> = self
            .vocab
            .iter()
            .enumerate()
            .filter(|(_, w)| w.as_str() != query)
            .map(|(i, w)| (w.clone(), self.angle(i, q).abs()))
            .collect();
        entries.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        entries
    }
}

/// Full reimplementation of the two-slice suggestion algorithm on dense
/// co-occurrence matrices. Returns the suggested words in order.
pub fn oracle_suggest(
    pre: &Docs,
    post: &Docs,
    query: &str,
    kappa: usize,
    top: usize,
    window: usize,
) -> Vec<String> {
    let union = union_vocab(pre, post);
    let pre = dense_slice(pre, &union, window);
    let post = dense_slice(post, &union, window);
    let ranked_pre = pre.ranked(query);
    let ranked_post = post.ranked(query);
    let kappa = kappa.min(ranked_post.len());

    let rank_pre_of: HashMap<&str, usize> = ranked_pre
        .iter()
        .enumerate()
        .map(|(i, (w, _))| (w.as_str(), i + 1))
        .collect();
    let theta_pre_of: HashMap<&str, f64> =
        ranked_pre.iter().map(|(w, t)| (w.as_str(), *t)).collect();
    let absent_rank = ranked_pre.len() + 1;

    let mut scored: Vec<(String, f64, usize)> = Vec::new();
    for (i, (word, theta_post)) in ranked_post.iter().take(kappa).enumerate() {
        let rank_post = i + 1;
        let rank_pre = rank_pre_of
            .get(word.as_str())
            .copied()
            .unwrap_or(absent_rank);
        let theta_pre = theta_pre_of
            .get(word.as_str())
            .copied()
            .unwrap_or(std::f64::consts::FRAC_PI_2);
        let delta = (theta_post - theta_pre).abs();
        let s = delta * (rank_pre as f64 / rank_post as f64) * (pre.freq(word) / post.freq(word));
        scored.push((word.clone(), s, rank_pre));
    }
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored.retain(|&(_, _, rank_pre)| rank_pre > kappa);
    scored.truncate(top);
    scored.into_iter().map(|(w, _, _)| w).collect()
}

/// Dense-oracle semantic shift of a word pair between two slices.
pub fn oracle_shift(pre: &Docs, post: &Docs, w1: &str, w2: &str, window: usize) -> f64 {
    let union = union_vocab(pre, post);
    let pre = dense_slice(pre, &union, window);
    let post = dense_slice(post, &union, window);
    let t_pre = pre.angle(pre.index[w1], pre.index[w2]);
    let t_post = post.angle(post.index[w1], post.index[w2]);
    (t_post - t_pre).abs()
}

// ---------------------------------------------------------------------
// synthetic corpora

pub fn toks(words: &[&str]) -> Vec<String> {
    words.iter().map(|w| w.to_string()).collect()
}

/// Random two-slice corpus with |W| <= 30 and the query guaranteed in both
/// slices.
pub fn random_corpus(rng: &mut ChaCha12Rng, query: &str) -> (Docs, Docs) {
    let vocab_size = rng.gen_range(5..=30);
    let vocab: Vec<String> = (0..vocab_size).map(|i| format!("w{i}")).collect();
    let make_docs = |rng: &mut ChaCha12Rng| -> Docs {
        let n_docs = rng.gen_range(3..=10);
        let mut docs: Docs = Vec::with_capacity(n_docs);
        for _ in 0..n_docs {
            let len = rng.gen_range(2..=25);
            docs.push(
                (0..len)
                    .map(|_| vocab[rng.gen_range(0..vocab.len())].clone())
                    .collect(),
            );
        }
        docs[0].push(query.to_string());
        docs
    };
    (make_docs(rng), make_docs(rng))
}

/// Planted event with the target word absent before the event: "corona"
/// enters the contexts of "virus" only in the post slice; the background
/// is identical across slices.
pub fn planted_absent_corpus() -> (Docs, Docs) {
    let mut pre = Vec::new();
    let mut post = Vec::new();
    for _ in 0..6 {
        for docs in [&mut pre, &mut post] {
            docs.push(toks(&["virus", "infection"]));
            docs.push(toks(&["virus", "hospital"]));
            docs.push(toks(&["flu", "infection"]));
            docs.push(toks(&["alpha", "beta"]));
            docs.push(toks(&["gamma", "delta"]));
        }
    }
    for _ in 0..8 {
        post.push(toks(&["corona", "infection"]));
        post.push(toks(&["corona", "hospital"]));
    }
    (pre, post)
}

/// Planted shift with both words present in both slices: "iphone" and "x"
/// live in disjoint contexts before the event and in identical contexts
/// after it, so the baseline shift is exactly pi/2.
pub fn planted_shift_corpus() -> (Docs, Docs) {
    let mut pre = Vec::new();
    let mut post = Vec::new();
    for _ in 0..4 {
        pre.push(toks(&["iphone", "b1", "b2", "b3"]));
        pre.push(toks(&["iphone", "b4", "b5", "b6"]));
        pre.push(toks(&["x", "k1", "k2", "k3"]));
        pre.push(toks(&["x", "k4", "k5", "k6"]));
        pre.push(toks(&["f1", "f2"]));

        post.push(toks(&["iphone", "s1", "s2", "s3"]));
        post.push(toks(&["iphone", "s4", "s5", "s6"]));
        post.push(toks(&["x", "s1", "s2", "s3"]));
        post.push(toks(&["x", "s4", "s5", "s6"]));
        post.push(toks(&["f1", "f2"]));
    }
    (pre, post)
}

/// Synthetic slice pair where every one of `vocab_size` words appears
/// about `reps` times, shuffled into 20-token documents.
pub fn scaling_corpus(vocab_size: usize, reps: usize, rng: &mut ChaCha12Rng) -> (Docs, Docs) {
    let vocab: Vec<String> = (0..vocab_size).map(|i| format!("w{i}")).collect();
    let make = |rng: &mut ChaCha12Rng| -> Docs {
        let mut stream: Vec<String> = Vec::with_capacity(vocab_size * reps);
        for _ in 0..reps {
            stream.extend(vocab.iter().cloned());
        }
        stream.shuffle(rng);
        stream.chunks(20).map(|c| c.to_vec()).collect()
    };
    (make(rng), make(rng))
}

// ---------------------------------------------------------------------
// least-squares fits

/// Fit y = a * x*log2(x) + b; returns (a, b, r_squared).
pub fn fit_nlogn(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let us: Vec<f64> = xs.iter().map(|&x| x * x.log2()).collect();
    let n = xs.len() as f64;
    let u_mean = us.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let cov: f64 = us
        .iter()
        .zip(ys)
        .map(|(&u, &y)| (u - u_mean) * (y - y_mean))
        .sum();
    let var: f64 = us.iter().map(|&u| (u - u_mean).powi(2)).sum();
    let a = cov / var;
    let b = y_mean - a * u_mean;
    let ss_res: f64 = us
        .iter()
        .zip(ys)
        .map(|(&u, &y)| (y - (a * u + b)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|&y| (y - y_mean).powi(2)).sum();
    (a, b, 1.0 - ss_res / ss_tot)
}

/// Least-squares cubic fit; returns coefficients [c0, c1, c2, c3].
pub fn fit_cubic(xs: &[f64], ys: &[f64]) -> [f64; 4] {
    // normal equations for the monomial basis
    let mut ata = [[0.0f64; 4]; 4];
    let mut atb = [0.0f64; 4];
    for (&x, &y) in xs.iter().zip(ys) {
        let powers = [1.0, x, x * x, x * x * x];
        for i in 0..4 {
            atb[i] += powers[i] * y;
            for j in 0..4 {
                ata[i][j] += powers[i] * powers[j];
            }
        }
    }
    // Gaussian elimination with partial pivoting
    let mut m = [[0.0f64; 5]; 4];
    for i in 0..4 {
        m[i][..4].copy_from_slice(&ata[i]);
        m[i][4] = atb[i];
    }
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        for row in (col + 1)..4 {
            let f = m[row][col] / m[col][col];
            for k in col..5 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut c = [0.0f64; 4];
    for i in (0..4).rev() {
        let mut acc = m[i][4];
        for j in (i + 1)..4 {
            acc -= m[i][j] * c[j];
        }
        c[i] = acc / m[i][i];
    }
    c
}

pub fn eval_cubic(c: &[f64; 4], x: f64) -> f64 {
    c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x
}
