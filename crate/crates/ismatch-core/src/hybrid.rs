//! Token-level weighted edit distance for full names.
//!
//! The matcher runs a Levenshtein-style dynamic program over whole
//! tokens instead of characters, and replaces the fixed unit cost of an
//! edit with a weighted cost built from three signals:
//!
//! - **token cost**: the normalized character-level distance of the two
//!   tokens, clipped to a full edit (1) when it exceeds the threshold
//!   `theta`, so near-misspellings count as partial matches and
//!   genuinely different tokens count in full;
//! - **position weight**: edits of the first or last token always cost
//!   1, edits of middle tokens cost `beta`, reflecting that people write
//!   their first and family names carefully but drop middle names;
//! - **frequency weight**: edits of a common token are discounted by
//!   `1 - alpha * tf/mtf`, since common tokens carry little identity.
//!
//! The similarity of two names is `1 - H / max(K, L)` where `H` is the
//! accumulated weighted cost and `K`, `L` the token counts.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::char_metrics::char_levenshtein;
use crate::frequency::FrequencyTable;
use crate::normalize::TokenizedName;

/// Tuning knobs of the hybrid metric. All three main parameters live in
/// [0, 1]; construct through [`MatchParams::new`] to keep them there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchParams {
    alpha: f64,
    beta: f64,
    theta: f64,
    freq_floor: f64,
    strict_borders: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamError {
    OutOfRange { name: &'static str, value: f64 },
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::OutOfRange { name, value } => {
                write!(f, "parameter {name} = {value} outside its valid range")
            }
        }
    }
}

impl core::error::Error for ParamError {}

impl MatchParams {
    /// alpha: frequency weighting, beta: middle-position weight, theta:
    /// token-cost clipping threshold; each in [0, 1].
    pub fn new(alpha: f64, beta: f64, theta: f64) -> Result<Self, ParamError> {
        let check = |name: &'static str, value: f64| -> Result<f64, ParamError> {
            if (0.0..=1.0).contains(&value) {
                Ok(value)
            } else {
                Err(ParamError::OutOfRange { name, value })
            }
        };
        Ok(Self {
            alpha: check("alpha", alpha)?,
            beta: check("beta", beta)?,
            theta: check("theta", theta)?,
            freq_floor: 0.0,
            strict_borders: false,
        })
    }

    /// Lower bound for frequency weights, in [0, 1). The default of 0
    /// lets an edit of the most common token become free.
    pub fn with_freq_floor(mut self, floor: f64) -> Result<Self, ParamError> {
        if !(0.0..1.0).contains(&floor) {
            return Err(ParamError::OutOfRange {
                name: "freq_floor",
                value: floor,
            });
        }
        self.freq_floor = floor;
        Ok(self)
    }

    /// When set, border cells of the dynamic program accumulate position
    /// weights only, ignoring frequency weights. The default applies the
    /// full cost on borders too.
    pub fn with_strict_borders(mut self, strict: bool) -> Self {
        self.strict_borders = strict;
        self
    }

    /// The degenerate configuration (beta = 1, alpha = 0, theta = 0)
    /// under which the hybrid distance collapses to plain unit-cost
    /// token-level Levenshtein.
    pub fn unit_cost() -> Self {
        Self::new(0.0, 1.0, 0.0).expect("constants in range")
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn freq_floor(&self) -> f64 {
        self.freq_floor
    }

    pub fn strict_borders(&self) -> bool {
        self.strict_borders
    }
}

impl Default for MatchParams {
    /// The recommended operating point: alpha = 1, beta = 0.7,
    /// theta = 0.1.
    fn default() -> Self {
        Self::new(1.0, 0.7, 0.1).expect("constants in range")
    }
}

/// Accumulated weighted edit cost between two names.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridCost {
    /// Final cell of the dynamic program, in [0, max(len_a, len_b)].
    pub cost: f64,
    pub len_a: usize,
    pub len_b: usize,
}

impl HybridCost {
    /// `1 - cost / max(len_a, len_b)`, in [0, 1]; 1 means identical.
    pub fn similarity(&self) -> f64 {
        1.0 - self.cost / self.len_a.max(self.len_b) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HybridError {
    /// Similarity is undefined for a name with no tokens.
    EmptyName,
}

impl fmt::Display for HybridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HybridError::EmptyName => write!(f, "cannot match a name with no tokens"),
        }
    }
}

impl core::error::Error for HybridError {}

/// Character-level cost of substituting one token for another: the
/// normalized edit distance when it is within `theta`, else a full edit
/// cost of 1. Identical tokens always cost 0.
pub fn token_cost(a: &str, b: &str, theta: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    // The length difference is a lower bound on the distance; when even
    // that bound exceeds theta the pair clips without running the DP.
    let la = a.chars().count();
    let lb = b.chars().count();
    let longest = la.max(lb);
    if longest == 0 {
        return 0.0;
    }
    if la.abs_diff(lb) as f64 / longest as f64 > theta {
        return 1.0;
    }
    let d = char_levenshtein(a, b) as f64 / longest as f64;
    if d <= theta {
        d
    } else {
        1.0
    }
}

/// Position weight for matching token `k` of `len_a` against token `l`
/// of `len_b` (1-based): 1 when both are first or both are last tokens,
/// `beta` otherwise.
pub fn position_weight(k: usize, l: usize, len_a: usize, len_b: usize, beta: f64) -> f64 {
    if (k == 1 && l == 1) || (k == len_a && l == len_b) {
        1.0
    } else {
        beta
    }
}

/// Full weighted cost of one edit at cell (k, l): position weight times
/// the frequency weight of the edited token (the token of `a` for a
/// deletion or substitution, the token of `b` for an insertion).
pub fn edit_cost(
    k: usize,
    l: usize,
    len_a: usize,
    len_b: usize,
    edited_token: &str,
    params: &MatchParams,
    table: &FrequencyTable,
) -> f64 {
    position_weight(k, l, len_a, len_b, params.beta)
        * table.weight(edited_token, params.alpha, params.freq_floor)
}

/// Position weight used on the border of the dynamic program, where
/// only one of the two names has a running index: deleting (or
/// inserting) the first or last token of that name costs 1, middle
/// tokens cost `beta`.
fn border_position_weight(idx: usize, len: usize, beta: f64) -> f64 {
    if idx == 1 || idx == len {
        1.0
    } else {
        beta
    }
}

/// The token-level weighted edit distance between two non-empty names.
///
/// `H[k][l]` is the cheapest way to transform the first `k` tokens of
/// `a` into the first `l` tokens of `b`, taking the minimum of a
/// deletion, an insertion and a (partial) substitution, each weighted by
/// [`edit_cost`]. The min is evaluated in that fixed order, so ties
/// resolve deterministically.
pub fn hybrid_distance(
    a: &TokenizedName,
    b: &TokenizedName,
    params: &MatchParams,
    table: &FrequencyTable,
) -> Result<HybridCost, HybridError> {
    let at = a.tokens();
    let bt = b.tokens();
    let (len_a, len_b) = (at.len(), bt.len());
    if len_a == 0 || len_b == 0 {
        return Err(HybridError::EmptyName);
    }

    // Frequency weights per token, reused across the whole table.
    let border = |w: f64| if params.strict_borders { 1.0 } else { w };
    let fa: Vec<f64> = at
        .iter()
        .map(|t| table.weight(t, params.alpha, params.freq_floor))
        .collect();
    let fb: Vec<f64> = bt
        .iter()
        .map(|t| table.weight(t, params.alpha, params.freq_floor))
        .collect();

    // Top border: insert b_1..b_l.
    let mut prev: Vec<f64> = Vec::with_capacity(len_b + 1);
    prev.push(0.0);
    for l in 1..=len_b {
        let cost = border_position_weight(l, len_b, params.beta) * border(fb[l - 1]);
        prev.push(prev[l - 1] + cost);
    }

    let mut cur: Vec<f64> = vec![0.0; len_b + 1];
    for k in 1..=len_a {
        // Left border: delete a_1..a_k.
        cur[0] = prev[0] + border_position_weight(k, len_a, params.beta) * border(fa[k - 1]);
        for l in 1..=len_b {
            let p = position_weight(k, l, len_a, len_b, params.beta);
            let del = prev[l] + p * fa[k - 1];
            let ins = cur[l - 1] + p * fb[l - 1];
            let sub =
                prev[l - 1] + token_cost(&at[k - 1], &bt[l - 1], params.theta) * p * fa[k - 1];
            cur[l] = del.min(ins).min(sub);
        }
        core::mem::swap(&mut prev, &mut cur);
    }

    Ok(HybridCost {
        cost: prev[len_b],
        len_a,
        len_b,
    })
}

/// Final similarity in [0, 1]: `1 - H / max(K, L)`.
pub fn hybrid_similarity(
    a: &TokenizedName,
    b: &TokenizedName,
    params: &MatchParams,
    table: &FrequencyTable,
) -> Result<f64, HybridError> {
    hybrid_distance(a, b, params, table).map(|c| c.similarity())
}
