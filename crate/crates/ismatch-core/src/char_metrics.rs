//! Character-level string metrics: Levenshtein edit distance with its
//! length-normalized form, plus Jaro and Jaro-Winkler.
//!
//! All metrics operate on Unicode scalar values, not bytes, so Arabic
//! text measures the same on every platform.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Conventional Jaro-Winkler prefix scale.
pub const DEFAULT_PREFIX_SCALE: f64 = 0.1;

/// Longest common prefix credited by Jaro-Winkler.
const WINKLER_PREFIX_CAP: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum MetricError {
    /// Jaro-Winkler prefix scale outside [0, 0.25].
    InvalidPrefixScale(f64),
}

impl fmt::Display for MetricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricError::InvalidPrefixScale(s) => {
                write!(f, "prefix scale {s} outside [0, 0.25]")
            }
        }
    }
}

impl core::error::Error for MetricError {}

/// Minimum number of single-character insertions, deletions and
/// substitutions transforming `a` into `b`.
pub fn char_levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }

    // Two-row DP over the shorter string to keep scratch space small.
    let (short, long) = if a.len() <= b.len() {
        (&a, &b)
    } else {
        (&b, &a)
    };
    let mut prev: Vec<usize> = (0..=short.len()).collect();
    let mut cur: Vec<usize> = vec![0; short.len() + 1];
    for (i, lc) in long.iter().enumerate() {
        cur[0] = i + 1;
        for (j, sc) in short.iter().enumerate() {
            let sub = prev[j] + usize::from(lc != sc);
            let del = prev[j + 1] + 1;
            let ins = cur[j] + 1;
            cur[j + 1] = sub.min(del).min(ins);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len()]
}

/// Edit distance divided by the longer length: 0 for identical strings,
/// 1 for a complete mismatch. The empty-empty pair is defined as 0.
pub fn normalized_char_distance(a: &str, b: &str) -> f64 {
    let la = a.chars().count();
    let lb = b.chars().count();
    let longest = la.max(lb);
    if longest == 0 {
        return 0.0;
    }
    char_levenshtein(a, b) as f64 / longest as f64
}

/// Standard Jaro similarity in [0, 1].
pub fn jaro(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    if a == b {
        return 1.0;
    }

    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut a_matched = vec![false; a.len()];
    let mut b_matched = vec![false; b.len()];
    let mut matches = 0usize;
    for (i, ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_matched[j] && b[j] == *ca {
                a_matched[i] = true;
                b_matched[j] = true;
                matches += 1;
                break;
            }
        }
    }
    if matches == 0 {
        return 0.0;
    }

    let mut transposed = 0usize;
    let mut j = 0usize;
    for (i, ca) in a.iter().enumerate() {
        if !a_matched[i] {
            continue;
        }
        while !b_matched[j] {
            j += 1;
        }
        if *ca != b[j] {
            transposed += 1;
        }
        j += 1;
    }

    let m = matches as f64;
    let t = (transposed / 2) as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

/// Jaro similarity boosted by the length of the common prefix (capped at
/// four characters): `jaro + prefix_len * prefix_scale * (1 - jaro)`.
pub fn jaro_winkler(a: &str, b: &str, prefix_scale: f64) -> Result<f64, MetricError> {
    if !(0.0..=0.25).contains(&prefix_scale) {
        return Err(MetricError::InvalidPrefixScale(prefix_scale));
    }
    let j = jaro(a, b);
    let prefix = a
        .chars()
        .zip(b.chars())
        .take(WINKLER_PREFIX_CAP)
        .take_while(|(x, y)| x == y)
        .count();
    Ok(j + prefix as f64 * prefix_scale * (1.0 - j))
}

/// Whole-string similarity used as the "plain Levenshtein" baseline:
/// one minus the normalized distance of the space-joined names.
pub fn levenshtein_similarity(a: &str, b: &str) -> f64 {
    1.0 - normalized_char_distance(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levenshtein_insertion() {
        assert_eq!(char_levenshtein("محمد", "محمود"), 1);
    }

    #[test]
    fn levenshtein_substitution() {
        assert_eq!(char_levenshtein("محمد", "احمد"), 1);
    }

    #[test]
    fn levenshtein_identical() {
        assert_eq!(char_levenshtein("x", "x"), 0);
        assert_eq!(char_levenshtein("", ""), 0);
    }

    #[test]
    fn levenshtein_to_empty() {
        assert_eq!(char_levenshtein("ع", ""), 1);
        assert_eq!(char_levenshtein("", "abc"), 3);
    }

    #[test]
    fn normalized_distance_examples() {
        assert!((normalized_char_distance("محمد", "محمود") - 0.2).abs() < 1e-9);
        assert_eq!(normalized_char_distance("a", "a"), 0.0);
        assert_eq!(normalized_char_distance("ab", "xy"), 1.0);
        // Both empty is defined as identical even though the ratio is 0/0.
        assert_eq!(normalized_char_distance("", ""), 0.0);
    }

    #[test]
    fn jaro_classic_example() {
        assert!((jaro("MARTHA", "MARHTA") - 0.944_444_444_4).abs() < 1e-9);
        assert_eq!(jaro("x", "x"), 1.0);
        assert_eq!(jaro("abc", "xyz"), 0.0);
        assert_eq!(jaro("", ""), 1.0);
        assert_eq!(jaro("a", ""), 0.0);
    }

    #[test]
    fn jaro_winkler_classic_example() {
        let jw = jaro_winkler("MARTHA", "MARHTA", DEFAULT_PREFIX_SCALE).unwrap();
        assert!((jw - 0.961_111_111_1).abs() < 1e-9);
        assert_eq!(jaro_winkler("x", "x", 0.1).unwrap(), 1.0);
        assert_eq!(jaro_winkler("abc", "xyz", 0.1).unwrap(), 0.0);
    }

    #[test]
    fn jaro_winkler_rejects_bad_scale() {
        assert!(jaro_winkler("a", "b", 0.3).is_err());
        assert!(jaro_winkler("a", "b", -0.1).is_err());
        assert!(jaro_winkler("a", "b", 0.25).is_ok());
    }

    #[test]
    fn levenshtein_similarity_is_complement() {
        assert_eq!(levenshtein_similarity("محمد", "محمد"), 1.0);
        assert!((levenshtein_similarity("محمد", "محمود") - 0.8).abs() < 1e-9);
    }
}
