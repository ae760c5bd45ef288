//! Top-1 success evaluation.
//!
//! Every distorted test name is scored against the whole base set; the
//! highest-scoring base record (first one wins ties) is the candidate
//! match, and the run succeeds on that row when the candidate is the
//! row's true source. Success percentage = true matches / test size.
//!
//! Rows are scored independently, so evaluation parallelizes across
//! test rows without changing any result: the per-row scan keeps the
//! sequential running-maximum semantics.

use std::fmt;
use std::str::FromStr;

use ismatch_core::baselines::{
    jaccard, monge_elkan, soft_tfidf_precomputed, token_levenshtein, TfidfVector, TfidfWeights,
};
use ismatch_core::char_metrics::{jaro_winkler, levenshtein_similarity, DEFAULT_PREFIX_SCALE};
use ismatch_core::hybrid::hybrid_similarity;
use ismatch_core::{
    normalize_name, FrequencyTable, MatchParams, NormalizationRules, TokenizedName,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dataset::{BaseSet, NameRecord, TestSet};
use crate::files::ToolError;

/// The scoring algorithms the harness can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Hybrid,
    BasicLevenshtein,
    TokenLevenshtein,
    Jaccard,
    Tfidf,
    SoftTfidf,
    JaroWinkler,
    MongeElkan,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Hybrid,
        Algorithm::BasicLevenshtein,
        Algorithm::TokenLevenshtein,
        Algorithm::Jaccard,
        Algorithm::Tfidf,
        Algorithm::SoftTfidf,
        Algorithm::JaroWinkler,
        Algorithm::MongeElkan,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Hybrid => "hybrid",
            Algorithm::BasicLevenshtein => "basic-levenshtein",
            Algorithm::TokenLevenshtein => "token-levenshtein",
            Algorithm::Jaccard => "jaccard",
            Algorithm::Tfidf => "tfidf",
            Algorithm::SoftTfidf => "soft-tfidf",
            Algorithm::JaroWinkler => "jaro-winkler",
            Algorithm::MongeElkan => "monge-elkan",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = ToolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| {
                ToolError::param(format!(
                    "unknown algorithm {s:?}; expected one of: {}",
                    Algorithm::ALL.map(|a| a.as_str()).join(", ")
                ))
            })
    }
}

/// An algorithm plus its settings; the unit of comparison runs.
#[derive(Debug, Clone, PartialEq)]
pub struct MatcherSpec {
    pub algorithm: Algorithm,
    /// Hybrid parameters (ignored by the baselines).
    pub params: MatchParams,
    /// Soft-TFIDF CLOSE threshold.
    pub soft_theta: f64,
    /// Jaro-Winkler prefix scale (also the inner metric of Soft-TFIDF
    /// and Monge-Elkan).
    pub prefix_scale: f64,
}

impl MatcherSpec {
    pub fn hybrid(params: MatchParams) -> Self {
        Self {
            algorithm: Algorithm::Hybrid,
            params,
            soft_theta: 0.9,
            prefix_scale: DEFAULT_PREFIX_SCALE,
        }
    }

    pub fn baseline(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            params: MatchParams::default(),
            soft_theta: 0.9,
            prefix_scale: DEFAULT_PREFIX_SCALE,
        }
    }

    /// The standard head-to-head suite: the hybrid metric at its
    /// recommended operating point against the four classical baselines.
    pub fn comparison_suite() -> Vec<MatcherSpec> {
        vec![
            MatcherSpec::hybrid(MatchParams::default()),
            MatcherSpec::baseline(Algorithm::BasicLevenshtein),
            MatcherSpec::baseline(Algorithm::MongeElkan),
            MatcherSpec::baseline(Algorithm::JaroWinkler),
            MatcherSpec::baseline(Algorithm::SoftTfidf),
        ]
    }

    pub fn validate(&self) -> Result<(), ToolError> {
        if !(0.0..=1.0).contains(&self.soft_theta) {
            return Err(ToolError::param(format!(
                "soft-theta {} outside [0, 1]",
                self.soft_theta
            )));
        }
        if !(0.0..=0.25).contains(&self.prefix_scale) {
            return Err(ToolError::param(format!(
                "prefix scale {} outside [0, 0.25]",
                self.prefix_scale
            )));
        }
        Ok(())
    }

    /// Parameter columns for report rows: the hybrid knobs, or the
    /// Soft-TFIDF threshold in the theta column.
    pub fn param_columns(&self) -> (Option<f64>, Option<f64>, Option<f64>) {
        match self.algorithm {
            Algorithm::Hybrid => (
                Some(self.params.alpha()),
                Some(self.params.beta()),
                Some(self.params.theta()),
            ),
            Algorithm::SoftTfidf => (None, None, Some(self.soft_theta)),
            _ => (None, None, None),
        }
    }
}

/// One evaluated (algorithm, test set) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub algorithm: String,
    pub error_type: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub theta: Option<f64>,
    pub n: usize,
    pub true_matches: usize,
}

impl Evaluation {
    pub fn success(&self) -> f64 {
        self.true_matches as f64 / self.n as f64
    }
}

/// A query prepared once and scored against many base records.
pub struct PreparedQuery {
    name: TokenizedName,
    joined: String,
    vector: Option<TfidfVector>,
}

/// A matcher bound to a base set, with whatever per-base precomputation
/// its algorithm needs (joined strings, TF-IDF statistics and vectors).
pub struct Evaluator<'a> {
    spec: MatcherSpec,
    base: &'a BaseSet,
    table: &'a FrequencyTable,
    base_joined: Vec<String>,
    tfidf: Option<TfidfWeights>,
    base_vectors: Vec<TfidfVector>,
}

impl<'a> Evaluator<'a> {
    pub fn new(
        spec: MatcherSpec,
        base: &'a BaseSet,
        table: &'a FrequencyTable,
    ) -> Result<Self, ToolError> {
        spec.validate()?;
        if base.is_empty() {
            return Err(ToolError::data("base set is empty"));
        }
        let needs_joined = matches!(
            spec.algorithm,
            Algorithm::BasicLevenshtein | Algorithm::JaroWinkler
        );
        let needs_tfidf = matches!(spec.algorithm, Algorithm::Tfidf | Algorithm::SoftTfidf);
        let base_joined = if needs_joined {
            base.normalized()
                .iter()
                .map(TokenizedName::joined)
                .collect()
        } else {
            Vec::new()
        };
        let (tfidf, base_vectors) = if needs_tfidf {
            let weights = TfidfWeights::build(base.normalized())
                .map_err(|e| ToolError::data(e.to_string()))?;
            let vectors = base
                .normalized()
                .iter()
                .map(|n| weights.vector(n))
                .collect();
            (Some(weights), vectors)
        } else {
            (None, Vec::new())
        };
        Ok(Self {
            spec,
            base,
            table,
            base_joined,
            tfidf,
            base_vectors,
        })
    }

    pub fn prepare_query(&self, name: TokenizedName) -> Result<PreparedQuery, ToolError> {
        if name.is_empty() {
            return Err(ToolError::data("query name has no tokens"));
        }
        let joined = name.joined();
        let vector = self.tfidf.as_ref().map(|w| w.vector(&name));
        Ok(PreparedQuery {
            name,
            joined,
            vector,
        })
    }

    /// Similarity of the query against base record `idx`.
    pub fn score(&self, query: &PreparedQuery, idx: usize) -> f64 {
        let base_name = &self.base.normalized()[idx];
        match self.spec.algorithm {
            Algorithm::Hybrid => {
                hybrid_similarity(&query.name, base_name, &self.spec.params, self.table)
                    .expect("both names validated non-empty")
            }
            Algorithm::BasicLevenshtein => {
                levenshtein_similarity(&query.joined, &self.base_joined[idx])
            }
            Algorithm::TokenLevenshtein => {
                let d = token_levenshtein(&query.name, base_name);
                1.0 - d as f64 / query.name.token_count().max(base_name.token_count()) as f64
            }
            Algorithm::Jaccard => jaccard(&query.name, base_name),
            Algorithm::Tfidf => query
                .vector
                .as_ref()
                .expect("vector prepared for tfidf")
                .dot(&self.base_vectors[idx]),
            Algorithm::SoftTfidf => {
                let scale = self.spec.prefix_scale;
                soft_tfidf_precomputed(
                    &query.name,
                    query
                        .vector
                        .as_ref()
                        .expect("vector prepared for soft-tfidf"),
                    base_name,
                    &self.base_vectors[idx],
                    self.spec.soft_theta,
                    |a, b| jaro_winkler(a, b, scale).expect("scale validated"),
                )
            }
            Algorithm::JaroWinkler => jaro_winkler(
                &query.joined,
                &self.base_joined[idx],
                self.spec.prefix_scale,
            )
            .expect("scale validated"),
            Algorithm::MongeElkan => {
                let scale = self.spec.prefix_scale;
                monge_elkan(&query.name, base_name, |a, b| {
                    jaro_winkler(a, b, scale).expect("scale validated")
                })
                .expect("query validated non-empty")
            }
        }
    }

    /// The sequential scan: keep the running maximum, update only on a
    /// strictly greater score so the earliest base record wins ties.
    /// Returns the winning index and score, or `None` when every score
    /// is zero (no candidate at all).
    pub fn best_match(&self, query: &PreparedQuery) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for idx in 0..self.base.len() {
            let sim = self.score(query, idx);
            if sim > best.map_or(0.0, |(_, s)| s) {
                best = Some((idx, sim));
            }
        }
        best
    }

    /// All base indices ranked by score, ties broken by base position.
    pub fn rank(&self, query: &PreparedQuery) -> Vec<(usize, f64)> {
        let mut scored: Vec<(usize, f64)> = (0..self.base.len())
            .map(|idx| (idx, self.score(query, idx)))
            .collect();
        // Stable sort keeps base order among equal scores.
        scored.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("scores are finite"));
        scored
    }
}

fn with_pool<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R, ToolError> {
    if workers == 0 {
        Ok(f())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| ToolError::param(format!("cannot build worker pool: {e}")))?;
        Ok(pool.install(f))
    }
}

fn validate_test_against_base(test: &TestSet, base: &BaseSet) -> Result<(), ToolError> {
    if test.rows.is_empty() {
        return Err(ToolError::data("test set has no rows"));
    }
    if let Some(expected) = &test.base_checksum {
        let actual = base.checksum();
        if *expected != actual {
            return Err(ToolError::data(format!(
                "test set was generated from a different base set \
                 (checksum {expected}, base has {actual})"
            )));
        }
    }
    for row in &test.rows {
        if base.index_of(&row.ref_b_id).is_none() {
            return Err(ToolError::data(format!(
                "test row {} references unknown base id {:?}",
                row.t_id, row.ref_b_id
            )));
        }
    }
    Ok(())
}

/// Runs the full scan for one test set under one matcher and reports
/// the top-1 success. `workers` = 0 uses the default thread pool.
pub fn success_match_percentage(
    test: &TestSet,
    base: &BaseSet,
    spec: &MatcherSpec,
    table: &FrequencyTable,
    workers: usize,
) -> Result<Evaluation, ToolError> {
    validate_test_against_base(test, base)?;
    let evaluator = Evaluator::new(spec.clone(), base, table)?;
    let queries: Vec<PreparedQuery> = test
        .rows
        .iter()
        .map(|row| {
            evaluator
                .prepare_query(TokenizedName::parse(&row.distorted))
                .map_err(|_| {
                    ToolError::data(format!("test row {}: empty distorted name", row.t_id))
                })
        })
        .collect::<Result<_, _>>()?;

    let true_matches: usize = with_pool(workers, || {
        queries
            .par_iter()
            .zip(test.rows.par_iter())
            .map(|(query, row)| {
                let matched = evaluator
                    .best_match(query)
                    .is_some_and(|(idx, _)| base.records()[idx].id == row.ref_b_id);
                usize::from(matched)
            })
            .sum()
    })?;

    let (alpha, beta, theta) = spec.param_columns();
    Ok(Evaluation {
        algorithm: spec.algorithm.to_string(),
        error_type: test.error_label().to_string(),
        alpha,
        beta,
        theta,
        n: test.rows.len(),
        true_matches,
    })
}

/// Success of the hybrid matcher over a (theta x beta) grid at a fixed
/// alpha; `cells[t][b]` corresponds to `theta_grid[t]`, `beta_grid[b]`.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub alpha: f64,
    pub beta_grid: Vec<f64>,
    pub theta_grid: Vec<f64>,
    pub cells: Vec<Vec<Evaluation>>,
}

pub fn parameter_sweep(
    test: &TestSet,
    base: &BaseSet,
    alpha: f64,
    beta_grid: &[f64],
    theta_grid: &[f64],
    table: &FrequencyTable,
    workers: usize,
) -> Result<SweepGrid, ToolError> {
    if beta_grid.is_empty() || theta_grid.is_empty() {
        return Err(ToolError::param("sweep grids must be non-empty"));
    }
    for &v in beta_grid.iter().chain(theta_grid) {
        if !(0.0..=1.0).contains(&v) {
            return Err(ToolError::param(format!("grid value {v} outside [0, 1]")));
        }
    }
    validate_test_against_base(test, base)?;
    let mut cells = Vec::with_capacity(theta_grid.len());
    for &theta in theta_grid {
        let mut row = Vec::with_capacity(beta_grid.len());
        for &beta in beta_grid {
            let params = MatchParams::new(alpha, beta, theta)
                .map_err(|e| ToolError::param(e.to_string()))?;
            let spec = MatcherSpec::hybrid(params);
            row.push(success_match_percentage(test, base, &spec, table, workers)?);
        }
        cells.push(row);
    }
    Ok(SweepGrid {
        alpha,
        beta_grid: beta_grid.to_vec(),
        theta_grid: theta_grid.to_vec(),
        cells,
    })
}

/// Success of several matchers across several test sets;
/// `grid[s][t]` corresponds to `specs[s]`, `tests[t]`.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub algorithms: Vec<String>,
    pub error_types: Vec<String>,
    pub grid: Vec<Vec<Evaluation>>,
}

impl Comparison {
    /// Lower and upper success bounds of one matcher across the tests.
    pub fn bounds(&self, spec_idx: usize) -> (f64, f64) {
        let row = &self.grid[spec_idx];
        let min = row
            .iter()
            .map(Evaluation::success)
            .fold(f64::INFINITY, f64::min);
        let max = row.iter().map(Evaluation::success).fold(0.0, f64::max);
        (min, max)
    }
}

pub fn compare_algorithms(
    tests: &[TestSet],
    base: &BaseSet,
    specs: &[MatcherSpec],
    table: &FrequencyTable,
    workers: usize,
) -> Result<Comparison, ToolError> {
    if tests.is_empty() {
        return Err(ToolError::param("no test sets given"));
    }
    if specs.is_empty() {
        return Err(ToolError::param("no matcher specs given"));
    }
    let mut grid = Vec::with_capacity(specs.len());
    for spec in specs {
        let mut row = Vec::with_capacity(tests.len());
        for test in tests {
            row.push(success_match_percentage(test, base, spec, table, workers)?);
        }
        grid.push(row);
    }
    Ok(Comparison {
        algorithms: specs.iter().map(|s| s.algorithm.to_string()).collect(),
        error_types: tests.iter().map(|t| t.error_label().to_string()).collect(),
        grid,
    })
}

/// Letters used for synthetic rare tokens. Deliberately a small set of
/// common Arabic letters so that random tokens land close together in
/// edit distance, mirroring the tight typographic structure of real
/// Arabic names.
const SYNTH_ALPHABET: [char; 14] = [
    'ا', 'ب', 'ح', 'د', 'ر', 'س', 'ع', 'ف', 'ل', 'م', 'ن', 'ه', 'و', 'ى',
];

/// Applies `edits` random single-character edits (substitute, insert or
/// delete) to a token.
fn mutate_token(token: &str, edits: usize, rng: &mut ChaCha8Rng) -> String {
    let mut chars: Vec<char> = token.chars().collect();
    for _ in 0..edits {
        let pick = SYNTH_ALPHABET[rng.random_range(0..SYNTH_ALPHABET.len())];
        match rng.random_range(0..3u8) {
            0 if !chars.is_empty() => {
                let i = rng.random_range(0..chars.len());
                chars[i] = pick;
            }
            1 if chars.len() > 3 => {
                let i = rng.random_range(0..chars.len());
                chars.remove(i);
            }
            _ => {
                let i = rng.random_range(0..=chars.len());
                chars.insert(i, pick);
            }
        }
    }
    chars.into_iter().collect()
}

/// Generates a deterministic synthetic base set: `n` unique names of 4-6
/// tokens. Middle positions draw from the common-token table with a
/// probability matching its total mass; first and last positions are
/// biased toward rare pool tokens. Every name survives standardization
/// unchanged, so written files reload identically.
pub fn generate_synthetic_base(
    n: usize,
    token_pool_size: usize,
    table: &FrequencyTable,
    seed: u64,
) -> Result<BaseSet, ToolError> {
    if n == 0 {
        return Err(ToolError::param("base size must be at least 1"));
    }
    if token_pool_size < 20 {
        return Err(ToolError::param("token pool must hold at least 20 tokens"));
    }
    let rules = NormalizationRules::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let random_token = |rng: &mut ChaCha8Rng, len: usize| -> String {
        (0..len)
            .map(|_| SYNTH_ALPHABET[rng.random_range(0..SYNTH_ALPHABET.len())])
            .collect()
    };

    // Rare-token pool, organized as mutation families: a handful of
    // stems, each spawning variants one or two character edits away.
    // Real name corpora have this tight typographic structure (many
    // distinct names a single edit apart), and it is what separates
    // token-aware matching from whole-string matching.
    let stem_count = (token_pool_size / 8).max(1);
    let mut stems: Vec<String> = Vec::with_capacity(stem_count);
    let mut pool: Vec<String> = Vec::with_capacity(token_pool_size);
    let mut attempts = 0usize;
    while pool.len() < token_pool_size {
        attempts += 1;
        if attempts > token_pool_size * 200 {
            return Err(ToolError::data(
                "could not fill the rare-token pool; alphabet too small".to_string(),
            ));
        }
        let token = if stems.len() < stem_count {
            let len = rng.random_range(3..=4);
            random_token(&mut rng, len)
        } else {
            let stem = &stems[rng.random_range(0..stems.len())];
            mutate_token(stem, rng.random_range(1..=2), &mut rng)
        };
        let len = token.chars().count();
        if !(3..=5).contains(&len) {
            continue;
        }
        if table.proportion(&token) > 0.0 || pool.contains(&token) {
            continue;
        }
        if normalize_name(&token, &rules).joined() != token {
            continue;
        }
        if stems.len() < stem_count {
            stems.push(token.clone());
        }
        pool.push(token);
    }

    // Common tokens sorted for a deterministic cumulative draw.
    let common: Vec<(String, f64)> = table.iter().map(|(t, p)| (t.to_string(), p)).collect();
    let common_mass: f64 = common.iter().map(|(_, p)| p).sum::<f64>().min(0.9);
    // People write their first and family names carefully and
    // distinctively, so edges draw common tokens rarely; middles absorb
    // most of the common mass. The split keeps the overall token mix
    // close to the table (names average five tokens: two edges, three
    // middles).
    let p_edge = common_mass / 6.0;
    let p_mid = (common_mass * 1.75).min(1.0);

    let draw_common = |rng: &mut ChaCha8Rng| -> &str {
        let total: f64 = common.iter().map(|(_, p)| p).sum();
        let mut u = rng.random_range(0.0..total);
        for (token, p) in &common {
            if u < *p {
                return token;
            }
            u -= p;
        }
        &common.last().expect("non-empty common table").0
    };

    let mut records: Vec<NameRecord> = Vec::with_capacity(n);
    let mut seen: std::collections::HashSet<String> = std::collections::HashSet::new();
    let mut attempts = 0usize;
    while records.len() < n {
        attempts += 1;
        if attempts > n * 200 {
            return Err(ToolError::data(format!(
                "could not generate {n} unique names from a pool of {token_pool_size}"
            )));
        }
        let len = rng.random_range(4..=6);
        let mut tokens: Vec<String> = Vec::with_capacity(len);
        for pos in 0..len {
            let edge = pos == 0 || pos == len - 1;
            let p_common = if edge { p_edge } else { p_mid };
            let token = if !common.is_empty() && rng.random::<f64>() < p_common {
                draw_common(&mut rng).to_string()
            } else {
                pool[rng.random_range(0..pool.len())].clone()
            };
            tokens.push(token);
        }
        let raw = tokens.join(" ");
        // Reject names that standardization would reshape (e.g. a
        // common token that doubles as a title landing in front).
        let normalized = normalize_name(&raw, &rules);
        if normalized.tokens() != tokens.as_slice() {
            continue;
        }
        if !seen.insert(raw.clone()) {
            continue;
        }
        records.push(NameRecord {
            id: (records.len() + 1).to_string(),
            raw,
        });
    }
    BaseSet::from_records(records, &rules)
}
