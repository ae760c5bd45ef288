//! Token-level comparison baselines: Jaccard, TF-IDF cosine, Soft-TFIDF,
//! Monge-Elkan, and plain token-level Levenshtein.
//!
//! These are the classical measures the hybrid metric is evaluated
//! against. They all operate on [`TokenizedName`]s; the corpus-dependent
//! ones take a [`TfidfWeights`] built once over the base name set.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::float;
use crate::normalize::TokenizedName;

/// Jaccard similarity of the two token sets: intersection over union.
/// Two empty names are identical (1).
pub fn jaccard(a: &TokenizedName, b: &TokenizedName) -> f64 {
    let sa: BTreeSet<&str> = a.tokens().iter().map(String::as_str).collect();
    let sb: BTreeSet<&str> = b.tokens().iter().map(String::as_str).collect();
    let union = sa.union(&sb).count();
    if union == 0 {
        return 1.0;
    }
    let inter = sa.intersection(&sb).count();
    inter as f64 / union as f64
}

/// Corpus statistics for TF-IDF weighting: per-token document frequency
/// over the collection the names are matched against.
#[derive(Debug, Clone, PartialEq)]
pub struct TfidfWeights {
    df: BTreeMap<String, usize>,
    docs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusError {
    EmptyCorpus,
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::EmptyCorpus => write!(f, "TF-IDF statistics need a non-empty corpus"),
        }
    }
}

impl core::error::Error for CorpusError {}

/// An L2-normalized TF-IDF weight vector for one name (or the zero
/// vector when no token carries weight).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TfidfVector {
    weights: BTreeMap<String, f64>,
}

impl TfidfVector {
    pub fn get(&self, token: &str) -> f64 {
        self.weights.get(token).copied().unwrap_or(0.0)
    }

    /// Inner product; with unit vectors this is the cosine similarity.
    pub fn dot(&self, other: &Self) -> f64 {
        let (small, large) = if self.weights.len() <= other.weights.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.weights.iter().map(|(t, w)| w * large.get(t)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }
}

impl TfidfWeights {
    /// Counts document frequencies over a corpus of normalized names.
    pub fn build<'a, I>(corpus: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = &'a TokenizedName>,
    {
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        let mut docs = 0usize;
        for name in corpus {
            docs += 1;
            let distinct: BTreeSet<&String> = name.tokens().iter().collect();
            for token in distinct {
                *df.entry(token.clone()).or_insert(0) += 1;
            }
        }
        if docs == 0 {
            return Err(CorpusError::EmptyCorpus);
        }
        Ok(Self { df, docs })
    }

    /// `ln(N / df)`, with unseen tokens clamped to df = 1 so queries
    /// from outside the corpus still get a finite weight.
    pub fn idf(&self, token: &str) -> f64 {
        let df = self.df.get(token).copied().unwrap_or(0).max(1);
        float::ln(self.docs as f64 / df as f64)
    }

    /// The L2-normalized weight vector of one name: token count times
    /// idf, scaled to unit length (zero vector if nothing has weight).
    pub fn vector(&self, name: &TokenizedName) -> TfidfVector {
        let mut counts: BTreeMap<&String, usize> = BTreeMap::new();
        for token in name.tokens() {
            *counts.entry(token).or_insert(0) += 1;
        }
        let mut weights: BTreeMap<String, f64> = BTreeMap::new();
        let mut norm_sq = 0.0;
        for (token, count) in counts {
            let w = count as f64 * self.idf(token);
            if w > 0.0 {
                norm_sq += w * w;
                weights.insert(token.clone(), w);
            }
        }
        if norm_sq > 0.0 {
            let norm = float::sqrt(norm_sq);
            for w in weights.values_mut() {
                *w /= norm;
            }
        }
        TfidfVector { weights }
    }
}

/// TF-IDF cosine similarity: the inner product of the two names' unit
/// weight vectors, i.e. the weights of shared tokens.
pub fn tfidf_cosine(a: &TokenizedName, b: &TokenizedName, weights: &TfidfWeights) -> f64 {
    weights.vector(a).dot(&weights.vector(b))
}

/// Soft-TFIDF: TF-IDF cosine extended to credit near-matching tokens.
///
/// For every token `w` of `a` whose best `inner` similarity against the
/// tokens of `b` reaches `theta`, the product
/// `V(w,a) * V(w*,b) * D(w,b)` is accumulated, where `w*` is the
/// best-matching token and `D` its similarity. This is the original
/// formulation: several tokens of `a` may claim the same `w*`, so the
/// result is not capped at 1.
pub fn soft_tfidf<F>(
    a: &TokenizedName,
    b: &TokenizedName,
    weights: &TfidfWeights,
    theta: f64,
    inner: F,
) -> f64
where
    F: Fn(&str, &str) -> f64,
{
    let va = weights.vector(a);
    let vb = weights.vector(b);
    soft_tfidf_precomputed(a, &va, b, &vb, theta, inner)
}

/// [`soft_tfidf`] with the weight vectors supplied by the caller, for
/// scans that compare one query against many candidates.
pub fn soft_tfidf_precomputed<F>(
    a: &TokenizedName,
    va: &TfidfVector,
    b: &TokenizedName,
    vb: &TfidfVector,
    theta: f64,
    inner: F,
) -> f64
where
    F: Fn(&str, &str) -> f64,
{
    let b_tokens: Vec<&str> = b.tokens().iter().map(String::as_str).collect();
    let distinct_a: BTreeSet<&str> = a.tokens().iter().map(String::as_str).collect();
    let mut score = 0.0;
    for w in distinct_a {
        let mut best: Option<(&str, f64)> = None;
        for v in &b_tokens {
            let s = inner(w, v);
            if best.is_none_or(|(_, bs)| s > bs) {
                best = Some((v, s));
            }
        }
        let Some((w_star, d)) = best else { continue };
        if d >= theta {
            score += va.get(w) * vb.get(w_star) * d;
        }
    }
    score
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MongeElkanError {
    EmptyQuery,
}

impl fmt::Display for MongeElkanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MongeElkanError::EmptyQuery => {
                write!(f, "Monge-Elkan needs at least one token on the left side")
            }
        }
    }
}

impl core::error::Error for MongeElkanError {}

/// Monge-Elkan similarity: the mean, over the tokens of `a`, of the
/// best `inner` similarity against the tokens of `b`. Asymmetric.
pub fn monge_elkan<F>(
    a: &TokenizedName,
    b: &TokenizedName,
    inner: F,
) -> Result<f64, MongeElkanError>
where
    F: Fn(&str, &str) -> f64,
{
    let at = a.tokens();
    if at.is_empty() {
        return Err(MongeElkanError::EmptyQuery);
    }
    let sum: f64 = at
        .iter()
        .map(|w| {
            b.tokens()
                .iter()
                .map(|v| inner(w, v))
                .fold(0.0f64, f64::max)
        })
        .sum();
    Ok(sum / at.len() as f64)
}

/// Unit-cost edit distance over whole tokens, matching on exact
/// equality. This is the degenerate form of the hybrid distance.
pub fn token_levenshtein(a: &TokenizedName, b: &TokenizedName) -> usize {
    let at = a.tokens();
    let bt = b.tokens();
    if at.is_empty() {
        return bt.len();
    }
    if bt.is_empty() {
        return at.len();
    }
    let mut prev: Vec<usize> = (0..=bt.len()).collect();
    let mut cur: Vec<usize> = vec![0; bt.len() + 1];
    for (i, ta) in at.iter().enumerate() {
        cur[0] = i + 1;
        for (j, tb) in bt.iter().enumerate() {
            let sub = prev[j] + usize::from(ta != tb);
            let del = prev[j + 1] + 1;
            let ins = cur[j] + 1;
            cur[j + 1] = sub.min(del).min(ins);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[bt.len()]
}
