//! Token term-frequency statistics.
//!
//! Common name tokens (محمد, احمد, ...) are weak evidence: people omit
//! them freely, so the hybrid metric discounts edits that touch them.
//! The discount is driven by a [`FrequencyTable`] mapping each token to
//! its share of all name tokens, with the maximum share (MTF) cached for
//! scaling.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::normalize::TokenizedName;

/// Built-in table of common Arabic name-token frequencies, in the file
/// format parsed by [`FrequencyTable::parse`].
pub const COMMON_ARABIC_NAMES: &str = include_str!("../data/common_names_ar.csv");

/// Immutable token → term-frequency table with its cached maximum.
///
/// Every stored proportion lies in (0, 1]; lookups of absent tokens
/// return 0. An empty table is the degenerate case with MTF defined as
/// 1, which makes every frequency weight come out as 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    tf: BTreeMap<String, f64>,
    mtf: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyError {
    /// No tokens to derive statistics from.
    EmptyBase,
    /// A proportion outside (0, 1].
    InvalidProportion { token: String, value: f64 },
    /// The same token appeared twice.
    DuplicateToken(String),
}

impl fmt::Display for FrequencyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrequencyError::EmptyBase => {
                write!(f, "cannot build a frequency table from an empty base")
            }
            FrequencyError::InvalidProportion { token, value } => {
                write!(f, "proportion {value} for token {token:?} outside (0, 1]")
            }
            FrequencyError::DuplicateToken(t) => write!(f, "duplicate token {t:?}"),
        }
    }
}

impl core::error::Error for FrequencyError {}

/// Error from parsing a frequency file, naming the offending row.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for FrequencyParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "frequency file line {}: {}", self.line, self.message)
    }
}

impl core::error::Error for FrequencyParseError {}

impl FrequencyTable {
    /// The degenerate empty table: every lookup is 0, MTF is 1, every
    /// weight is 1. Useful when frequency weighting is disabled.
    pub fn empty() -> Self {
        Self {
            tf: BTreeMap::new(),
            mtf: 1.0,
        }
    }

    /// Builds the table by counting token occurrences across a set of
    /// normalized names: `tf[w]` = occurrences of `w` / total tokens.
    pub fn from_names<'a, I>(names: I) -> Result<Self, FrequencyError>
    where
        I: IntoIterator<Item = &'a TokenizedName>,
    {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        let mut total: u64 = 0;
        for name in names {
            for token in name.tokens() {
                *counts.entry(token.clone()).or_insert(0) += 1;
                total += 1;
            }
        }
        if total == 0 {
            return Err(FrequencyError::EmptyBase);
        }
        let tf: BTreeMap<String, f64> = counts
            .into_iter()
            .map(|(token, n)| (token, n as f64 / total as f64))
            .collect();
        Self::from_proportions(tf)
    }

    /// Builds the table from explicit (token, proportion) pairs.
    pub fn from_entries<I, S>(entries: I) -> Result<Self, FrequencyError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut tf = BTreeMap::new();
        for (token, p) in entries {
            let token: String = token.into();
            if !(p > 0.0 && p <= 1.0) {
                return Err(FrequencyError::InvalidProportion { token, value: p });
            }
            if tf.insert(token.clone(), p).is_some() {
                return Err(FrequencyError::DuplicateToken(token));
            }
        }
        Self::from_proportions(tf)
    }

    fn from_proportions(tf: BTreeMap<String, f64>) -> Result<Self, FrequencyError> {
        if tf.is_empty() {
            return Err(FrequencyError::EmptyBase);
        }
        for (token, p) in &tf {
            if !(*p > 0.0 && *p <= 1.0) {
                return Err(FrequencyError::InvalidProportion {
                    token: token.clone(),
                    value: *p,
                });
            }
        }
        let mtf = tf.values().fold(0.0f64, |acc, p| acc.max(*p));
        Ok(Self { tf, mtf })
    }

    /// Parses `token,proportion` rows. `#` lines are comments, a literal
    /// `token,proportion` header is skipped, and a trailing `%` marks a
    /// percentage.
    pub fn parse(text: &str) -> Result<Self, FrequencyParseError> {
        let mut entries: Vec<(String, f64)> = Vec::new();
        let mut seen_data = false;
        for (idx, raw_line) in text.lines().enumerate() {
            let line = raw_line.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !seen_data && line.eq_ignore_ascii_case("token,proportion") {
                seen_data = true;
                continue;
            }
            seen_data = true;
            let Some((token, value)) = line.split_once(',') else {
                return Err(FrequencyParseError {
                    line: lineno,
                    message: "expected `token,proportion`".to_string(),
                });
            };
            let token = token.trim();
            let value = value.trim();
            if token.is_empty() || token.chars().any(char::is_whitespace) {
                return Err(FrequencyParseError {
                    line: lineno,
                    message: alloc::format!("invalid token {token:?}"),
                });
            }
            let (number, percent) = match value.strip_suffix('%') {
                Some(v) => (v.trim(), true),
                None => (value, false),
            };
            let parsed: f64 = number.parse().map_err(|_| FrequencyParseError {
                line: lineno,
                message: alloc::format!("invalid proportion {value:?}"),
            })?;
            let p = if percent { parsed / 100.0 } else { parsed };
            if !(p > 0.0 && p <= 1.0) {
                return Err(FrequencyParseError {
                    line: lineno,
                    message: alloc::format!("proportion {value} outside (0, 1]"),
                });
            }
            if entries.iter().any(|(t, _)| t == token) {
                return Err(FrequencyParseError {
                    line: lineno,
                    message: alloc::format!("duplicate token {token:?}"),
                });
            }
            entries.push((token.to_string(), p));
        }
        Self::from_entries(entries).map_err(|e| FrequencyParseError {
            line: 0,
            message: alloc::format!("{e}"),
        })
    }

    /// The shipped default: the nine most common Arabic name tokens.
    pub fn common_arabic_names() -> Self {
        Self::parse(COMMON_ARABIC_NAMES).expect("embedded frequency table parses")
    }

    /// Term frequency of `token`, or 0 when absent.
    pub fn proportion(&self, token: &str) -> f64 {
        self.tf.get(token).copied().unwrap_or(0.0)
    }

    /// Maximum term frequency across the table (1 for the empty table).
    pub fn max_term_frequency(&self) -> f64 {
        self.mtf
    }

    /// The frequency cost multiplier for editing `token`:
    /// `max(floor, 1 - alpha * tf(token) / mtf)`.
    ///
    /// `alpha` = 0 disables the machinery (weight 1 everywhere); a token
    /// at the maximum frequency with `alpha` = 1 costs `floor` (0 by
    /// default, making its edits free).
    pub fn weight(&self, token: &str, alpha: f64, floor: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&alpha));
        debug_assert!((0.0..1.0).contains(&floor));
        let f = 1.0 - alpha * self.proportion(token) / self.mtf;
        if f < floor {
            floor
        } else {
            f
        }
    }

    pub fn len(&self) -> usize {
        self.tf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tf.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.tf.iter().map(|(t, p)| (t.as_str(), *p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn name(s: &str) -> TokenizedName {
        TokenizedName::parse(s)
    }

    #[test]
    fn build_counts_per_occurrence() {
        let names = vec![name("محمد على"), name("محمد حسن")];
        let table = FrequencyTable::from_names(&names).unwrap();
        assert!((table.proportion("محمد") - 0.5).abs() < 1e-12);
        assert!((table.proportion("على") - 0.25).abs() < 1e-12);
        assert!((table.proportion("حسن") - 0.25).abs() < 1e-12);
        assert!((table.max_term_frequency() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn build_uniform_pair() {
        let names = vec![name("x y")];
        let table = FrequencyTable::from_names(&names).unwrap();
        assert!((table.proportion("x") - 0.5).abs() < 1e-12);
        assert!((table.proportion("y") - 0.5).abs() < 1e-12);
    }

    #[test]
    fn build_degenerate_single_token() {
        let names = vec![name("x x"), name("x")];
        let table = FrequencyTable::from_names(&names).unwrap();
        assert_eq!(table.proportion("x"), 1.0);
        assert_eq!(table.max_term_frequency(), 1.0);
    }

    #[test]
    fn build_rejects_empty_base() {
        let names: Vec<TokenizedName> = vec![];
        assert_eq!(
            FrequencyTable::from_names(&names),
            Err(FrequencyError::EmptyBase)
        );
    }

    #[test]
    fn build_proportions_sum_to_one() {
        let names = vec![name("محمد على حسن"), name("محمد محمود"), name("سمير")];
        let table = FrequencyTable::from_names(&names).unwrap();
        let sum: f64 = table.iter().map(|(_, p)| p).sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn default_table_matches_published_frequencies() {
        let table = FrequencyTable::common_arabic_names();
        assert_eq!(table.len(), 9);
        assert!((table.proportion("محمد") - 0.1138).abs() < 1e-12);
        assert!((table.proportion("احمد") - 0.0598).abs() < 1e-12);
        assert!((table.proportion("محمود") - 0.0239).abs() < 1e-12);
        assert!((table.proportion("حسين") - 0.0087).abs() < 1e-12);
        assert!((table.max_term_frequency() - 0.1138).abs() < 1e-12);
    }

    #[test]
    fn absent_token_is_zero() {
        let table = FrequencyTable::common_arabic_names();
        assert_eq!(table.proportion("زرياب"), 0.0);
    }

    #[test]
    fn weight_of_most_common_token_is_zero() {
        let table = FrequencyTable::common_arabic_names();
        assert_eq!(table.weight("محمد", 1.0, 0.0), 0.0);
    }

    #[test]
    fn weight_of_rare_token_is_one() {
        let table = FrequencyTable::common_arabic_names();
        assert_eq!(table.weight("زرياب", 1.0, 0.0), 1.0);
    }

    #[test]
    fn weight_second_most_common() {
        let table = FrequencyTable::common_arabic_names();
        let expected = 1.0 - 0.0598 / 0.1138;
        assert!((table.weight("احمد", 1.0, 0.0) - expected).abs() < 1e-9);
        assert!((table.weight("احمد", 1.0, 0.0) - 0.4745).abs() < 1e-4);
    }

    #[test]
    fn weight_disabled_by_zero_alpha() {
        let table = FrequencyTable::common_arabic_names();
        for token in ["محمد", "احمد", "زرياب"] {
            assert_eq!(table.weight(token, 0.0, 0.0), 1.0);
        }
    }

    #[test]
    fn weight_respects_floor() {
        let table = FrequencyTable::common_arabic_names();
        assert_eq!(table.weight("محمد", 1.0, 0.2), 0.2);
    }

    #[test]
    fn weight_monotone_in_alpha_and_floor() {
        let table = FrequencyTable::common_arabic_names();
        let alphas = [0.0, 0.3, 0.7, 1.0];
        for token in ["محمد", "حسين", "زرياب"] {
            for pair in alphas.windows(2) {
                assert!(table.weight(token, pair[1], 0.0) <= table.weight(token, pair[0], 0.0));
            }
            assert!(table.weight(token, 1.0, 0.3) >= table.weight(token, 1.0, 0.0));
        }
    }

    #[test]
    fn empty_table_is_all_ones() {
        let table = FrequencyTable::empty();
        assert_eq!(table.weight("محمد", 1.0, 0.0), 1.0);
        assert_eq!(table.max_term_frequency(), 1.0);
    }

    #[test]
    fn parse_rejects_bad_rows() {
        let err = FrequencyTable::parse("محمد;0.5\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = FrequencyTable::parse("محمد,1.5\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = FrequencyTable::parse("محمد,0\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = FrequencyTable::parse("محمد,0.2\nمحمد,0.1\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = FrequencyTable::parse("محمد,abc\n").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn parse_accepts_percent_and_plain() {
        let table = FrequencyTable::parse("a,25%\nb,0.5\n").unwrap();
        assert!((table.proportion("a") - 0.25).abs() < 1e-12);
        assert!((table.proportion("b") - 0.5).abs() < 1e-12);
        assert!((table.max_term_frequency() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn from_entries_validates() {
        assert!(matches!(
            FrequencyTable::from_entries([("a", 0.0)]),
            Err(FrequencyError::InvalidProportion { .. })
        ));
        assert!(matches!(
            FrequencyTable::from_entries([("a", 0.1), ("a", 0.2)]),
            Err(FrequencyError::DuplicateToken(_))
        ));
    }
}
