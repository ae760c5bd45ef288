//! Base name sets and synthetic single-error test sets.
//!
//! A base set is the reference corpus (`B_ID,BName` rows, standardized
//! on load). A test set is 300-odd names sampled from it, each distorted
//! by exactly one of six error types, written as `T_ID,DName,Ref_B_ID`
//! rows with a provenance header. Generation is a pure function of
//! (base, error type, n, seed).

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use ismatch_core::{normalize_name, NormalizationRules, TokenizedName};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::files::{fnv1a64, read_utf8, write_utf8, ToolError};

/// Identifier of the seeded generator, recorded in test-set headers so
/// a run can be reproduced byte for byte.
pub const RNG_ID: &str = "chacha8";

/// One row of the base corpus: an identifier and the raw name text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameRecord {
    pub id: String,
    pub raw: String,
}

/// The reference corpus, with every name standardized. Row order is
/// stable and defines the scan order of the evaluation.
#[derive(Debug, Clone)]
pub struct BaseSet {
    records: Vec<NameRecord>,
    normalized: Vec<TokenizedName>,
    by_id: HashMap<String, usize>,
}

impl BaseSet {
    /// Normalizes and indexes records. Duplicate identifiers and names
    /// that standardize to nothing are rejected with their row number.
    pub fn from_records(
        records: Vec<NameRecord>,
        rules: &NormalizationRules,
    ) -> Result<Self, ToolError> {
        let mut normalized = Vec::with_capacity(records.len());
        let mut by_id = HashMap::with_capacity(records.len());
        for (i, rec) in records.iter().enumerate() {
            let row = i + 1;
            if by_id.insert(rec.id.clone(), i).is_some() {
                return Err(ToolError::data(format!(
                    "row {row}: duplicate identifier {:?}",
                    rec.id
                )));
            }
            let name = normalize_name(&rec.raw, rules);
            if name.is_empty() {
                return Err(ToolError::data(format!(
                    "row {row}: name {:?} standardizes to no tokens",
                    rec.raw
                )));
            }
            normalized.push(name);
        }
        Ok(Self {
            records,
            normalized,
            by_id,
        })
    }

    /// Reads `B_ID,BName` rows. `#` lines are comments and a literal
    /// `B_ID,BName` header is skipped.
    pub fn load(path: &Path, rules: &NormalizationRules) -> Result<Self, ToolError> {
        let text = read_utf8(path)?;
        let mut records = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') || line == "B_ID,BName" {
                continue;
            }
            let Some((id, name)) = line.split_once(',') else {
                return Err(ToolError::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    message: "expected `B_ID,BName`".into(),
                });
            };
            let id = id.trim();
            if id.is_empty() {
                return Err(ToolError::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    message: "empty identifier".into(),
                });
            }
            records.push(NameRecord {
                id: id.to_string(),
                raw: name.trim().to_string(),
            });
        }
        Self::from_records(records, rules).map_err(|e| match e {
            ToolError::Data(msg) => ToolError::Data(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for rec in &self.records {
            out.push_str(&rec.id);
            out.push(',');
            out.push_str(&rec.raw);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), ToolError> {
        write_utf8(path, &self.to_file_string())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[NameRecord] {
        &self.records
    }

    pub fn normalized(&self) -> &[TokenizedName] {
        &self.normalized
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    /// Digest over the canonical rows, recorded in derived files.
    pub fn checksum(&self) -> String {
        format!("fnv1a64:{:016x}", fnv1a64(self.to_file_string().as_bytes()))
    }
}

/// The six single-error distortions applied to test names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorType {
    /// Delete one random character.
    OneChar,
    /// Delete two random characters.
    TwoChar,
    OmitFirst,
    OmitSecond,
    OmitThird,
    /// Omit both the second and the third token.
    OmitSecondThird,
}

impl ErrorType {
    pub const ALL: [ErrorType; 6] = [
        ErrorType::OneChar,
        ErrorType::TwoChar,
        ErrorType::OmitFirst,
        ErrorType::OmitSecond,
        ErrorType::OmitThird,
        ErrorType::OmitSecondThird,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorType::OneChar => "one-char",
            ErrorType::TwoChar => "two-char",
            ErrorType::OmitFirst => "omit-first",
            ErrorType::OmitSecond => "omit-second",
            ErrorType::OmitThird => "omit-third",
            ErrorType::OmitSecondThird => "omit-second-and-third",
        }
    }
}

impl fmt::Display for ErrorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ErrorType {
    type Err = ToolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ErrorType::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| {
                ToolError::param(format!(
                    "unknown error type {s:?}; expected one of: {}",
                    ErrorType::ALL.map(|e| e.as_str()).join(", ")
                ))
            })
    }
}

/// A name that cannot exhibit the requested error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("name {name:?} ineligible for {error_type}: {reason}")]
pub struct Ineligible {
    pub error_type: ErrorType,
    pub name: String,
    pub reason: String,
}

impl From<Ineligible> for ToolError {
    fn from(e: Ineligible) -> Self {
        ToolError::Data(e.to_string())
    }
}

/// Characters that can be deleted without emptying a token: every
/// character of every token that has at least two.
fn deletable_chars(name: &TokenizedName) -> usize {
    name.tokens()
        .iter()
        .map(|t| {
            let n = t.chars().count();
            if n >= 2 {
                n
            } else {
                0
            }
        })
        .sum()
}

/// Whether a name satisfies the preconditions of an error type:
/// token omissions need at least four tokens, character deletions need
/// enough characters to delete without emptying a token.
pub fn is_eligible(name: &TokenizedName, error_type: ErrorType) -> bool {
    match error_type {
        ErrorType::OneChar => deletable_chars(name) >= 1,
        // The first deletion shrinks some token by one, so capacity for
        // a second deletion needs one spare beyond the minimum.
        ErrorType::TwoChar => {
            name.tokens()
                .iter()
                .map(|t| t.chars().count().saturating_sub(1))
                .sum::<usize>()
                >= 2
        }
        ErrorType::OmitFirst
        | ErrorType::OmitSecond
        | ErrorType::OmitThird
        | ErrorType::OmitSecondThird => name.token_count() >= 4,
    }
}

fn delete_one_char(
    name: &TokenizedName,
    error_type: ErrorType,
    rng: &mut ChaCha8Rng,
) -> Result<TokenizedName, Ineligible> {
    // Uniform over all deletable character positions; a position inside
    // a one-character token would turn a character error into a token
    // omission, so those are excluded.
    let mut positions: Vec<(usize, usize)> = Vec::new();
    for (ti, token) in name.tokens().iter().enumerate() {
        let n = token.chars().count();
        if n >= 2 {
            positions.extend((0..n).map(|ci| (ti, ci)));
        }
    }
    if positions.is_empty() {
        return Err(Ineligible {
            error_type,
            name: name.joined(),
            reason: "no token has two or more characters".into(),
        });
    }
    let (ti, ci) = positions[rng.random_range(0..positions.len())];
    let tokens: Vec<String> = name
        .tokens()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if i == ti {
                t.chars()
                    .enumerate()
                    .filter(|(c, _)| *c != ci)
                    .map(|(_, ch)| ch)
                    .collect()
            } else {
                t.clone()
            }
        })
        .collect();
    Ok(TokenizedName::new(tokens).expect("deletion keeps tokens non-empty"))
}

fn omit_tokens(
    name: &TokenizedName,
    drop: &[usize],
    error_type: ErrorType,
) -> Result<TokenizedName, Ineligible> {
    if name.token_count() < 4 {
        return Err(Ineligible {
            error_type,
            name: name.joined(),
            reason: format!("{} tokens, need at least 4", name.token_count()),
        });
    }
    let tokens: Vec<String> = name
        .tokens()
        .iter()
        .enumerate()
        .filter(|(i, _)| !drop.contains(i))
        .map(|(_, t)| t.clone())
        .collect();
    Ok(TokenizedName::new(tokens).expect("remaining tokens valid"))
}

/// Applies one error type to a standardized name. The caller is
/// expected to pre-filter with [`is_eligible`] and treat [`Ineligible`]
/// as a signal to resample.
pub fn inject_error(
    name: &TokenizedName,
    error_type: ErrorType,
    rng: &mut ChaCha8Rng,
) -> Result<TokenizedName, Ineligible> {
    match error_type {
        ErrorType::OneChar => delete_one_char(name, error_type, rng),
        ErrorType::TwoChar => {
            let once = delete_one_char(name, error_type, rng)?;
            delete_one_char(&once, error_type, rng)
        }
        ErrorType::OmitFirst => omit_tokens(name, &[0], error_type),
        ErrorType::OmitSecond => omit_tokens(name, &[1], error_type),
        ErrorType::OmitThird => omit_tokens(name, &[2], error_type),
        ErrorType::OmitSecondThird => omit_tokens(name, &[1, 2], error_type),
    }
}

/// One distorted test row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestRow {
    pub t_id: String,
    /// The distorted name, already in standardized token form.
    pub distorted: String,
    pub ref_b_id: String,
}

/// A set of distorted names with known true matches.
#[derive(Debug, Clone, PartialEq)]
pub struct TestSet {
    /// The single error type every row carries; `None` for hand-made
    /// sets (e.g. identity sets) loaded from file.
    pub error_type: Option<ErrorType>,
    pub seed: u64,
    /// Checksum of the base set the rows were drawn from, when known.
    pub base_checksum: Option<String>,
    pub rows: Vec<TestRow>,
}

impl TestSet {
    pub fn error_label(&self) -> &str {
        self.error_type.map_or("none", ErrorType::as_str)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# error_type={}\n", self.error_label()));
        out.push_str(&format!("# seed={}\n", self.seed));
        out.push_str(&format!("# n={}\n", self.rows.len()));
        if let Some(sum) = &self.base_checksum {
            out.push_str(&format!("# base_checksum={sum}\n"));
        }
        out.push_str(&format!("# rng={RNG_ID}\n"));
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                row.t_id, row.distorted, row.ref_b_id
            ));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), ToolError> {
        write_utf8(path, &self.to_file_string())
    }

    /// Reads `T_ID,DName,Ref_B_ID` rows with optional `# key=value`
    /// provenance headers.
    pub fn load(path: &Path) -> Result<Self, ToolError> {
        let text = read_utf8(path)?;
        let mut error_type = None;
        let mut seed = 0u64;
        let mut base_checksum = None;
        let mut rows = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw_line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.trim().split_once('=') {
                    match key.trim() {
                        "error_type" if value.trim() != "none" => {
                            error_type = Some(ErrorType::from_str(value.trim()).map_err(|_| {
                                ToolError::Parse {
                                    path: path.to_path_buf(),
                                    line: lineno,
                                    message: format!("unknown error_type {value:?}"),
                                }
                            })?);
                        }
                        "seed" => {
                            seed = value.trim().parse().map_err(|_| ToolError::Parse {
                                path: path.to_path_buf(),
                                line: lineno,
                                message: format!("invalid seed {value:?}"),
                            })?;
                        }
                        "base_checksum" => base_checksum = Some(value.trim().to_string()),
                        _ => {}
                    }
                }
                continue;
            }
            if line == "T_ID,DName,Ref_B_ID" {
                continue;
            }
            let parse_err = |message: String| ToolError::Parse {
                path: path.to_path_buf(),
                line: lineno,
                message,
            };
            let Some((t_id, rest)) = line.split_once(',') else {
                return Err(parse_err("expected `T_ID,DName,Ref_B_ID`".into()));
            };
            let Some((dname, ref_id)) = rest.rsplit_once(',') else {
                return Err(parse_err("expected `T_ID,DName,Ref_B_ID`".into()));
            };
            let dname = dname.trim();
            if dname.is_empty() {
                return Err(parse_err("empty distorted name".into()));
            }
            rows.push(TestRow {
                t_id: t_id.trim().to_string(),
                distorted: dname.to_string(),
                ref_b_id: ref_id.trim().to_string(),
            });
        }
        Ok(Self {
            error_type,
            seed,
            base_checksum,
            rows,
        })
    }
}

/// Samples `n` distinct eligible names from the base set (without
/// replacement, seeded) and distorts each by `error_type`. Deterministic
/// for a given (base, error type, n, seed).
pub fn generate_test_set(
    base: &BaseSet,
    error_type: ErrorType,
    n: usize,
    seed: u64,
) -> Result<TestSet, ToolError> {
    if n == 0 {
        return Err(ToolError::param("test-set size must be at least 1"));
    }
    let eligible: Vec<usize> = (0..base.len())
        .filter(|&i| is_eligible(&base.normalized()[i], error_type))
        .collect();
    if eligible.len() < n {
        return Err(ToolError::data(format!(
            "only {} of {} base names are eligible for {error_type}, need {n}",
            eligible.len(),
            base.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = rand::seq::index::sample(&mut rng, eligible.len(), n);
    let mut rows = Vec::with_capacity(n);
    for (row_idx, pick) in picked.iter().enumerate() {
        let base_idx = eligible[pick];
        let distorted = inject_error(&base.normalized()[base_idx], error_type, &mut rng)?;
        rows.push(TestRow {
            t_id: (row_idx + 1).to_string(),
            distorted: distorted.joined(),
            ref_b_id: base.records()[base_idx].id.clone(),
        });
    }
    Ok(TestSet {
        error_type: Some(error_type),
        seed,
        base_checksum: Some(base.checksum()),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules() -> NormalizationRules {
        NormalizationRules::default()
    }

    fn base_from(names: &[(&str, &str)]) -> BaseSet {
        let records = names
            .iter()
            .map(|(id, raw)| NameRecord {
                id: id.to_string(),
                raw: raw.to_string(),
            })
            .collect();
        BaseSet::from_records(records, &rules()).unwrap()
    }

    #[test]
    fn base_set_loads_and_normalizes() {
        let base = base_from(&[("1", "د. أحمد  عبد الرحمن"), ("2", "محمد على")]);
        assert_eq!(base.len(), 2);
        assert_eq!(base.normalized()[0].joined(), "احمد عبدالرحمن");
        assert_eq!(base.index_of("2"), Some(1));
    }

    #[test]
    fn duplicate_id_is_rejected() {
        let records = vec![
            NameRecord {
                id: "7".into(),
                raw: "محمد على".into(),
            },
            NameRecord {
                id: "7".into(),
                raw: "حسن كامل".into(),
            },
        ];
        let err = BaseSet::from_records(records, &rules()).unwrap_err();
        assert!(err.to_string().contains('7'), "{err}");
    }

    #[test]
    fn empty_normalization_is_rejected_with_row() {
        let records = vec![
            NameRecord {
                id: "1".into(),
                raw: "محمد".into(),
            },
            NameRecord {
                id: "2".into(),
                raw: "  . ".into(),
            },
        ];
        let err = BaseSet::from_records(records, &rules()).unwrap_err();
        assert!(err.to_string().contains("row 2"), "{err}");
    }

    #[test]
    fn error_type_round_trips_through_strings() {
        for e in ErrorType::ALL {
            assert_eq!(ErrorType::from_str(e.as_str()).unwrap(), e);
        }
        assert!(ErrorType::from_str("omit-fourth").is_err());
    }

    #[test]
    fn omit_second_removes_positionally() {
        let name = TokenizedName::parse("A B C D");
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = inject_error(&name, ErrorType::OmitSecond, &mut rng).unwrap();
        assert_eq!(out.joined(), "A C D");
    }

    #[test]
    fn omit_second_and_third_removes_both() {
        let name = TokenizedName::parse("A B C D");
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = inject_error(&name, ErrorType::OmitSecondThird, &mut rng).unwrap();
        assert_eq!(out.joined(), "A D");
    }

    #[test]
    fn short_names_are_ineligible_for_omission() {
        let name = TokenizedName::parse("A B C");
        assert!(!is_eligible(&name, ErrorType::OmitFirst));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(inject_error(&name, ErrorType::OmitFirst, &mut rng).is_err());
    }

    #[test]
    fn char_deletion_keeps_token_count_and_drops_one_char() {
        let name = TokenizedName::parse("محمود حسن");
        let chars_of =
            |n: &TokenizedName| -> usize { n.tokens().iter().map(|t| t.chars().count()).sum() };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let out = inject_error(&name, ErrorType::OneChar, &mut rng).unwrap();
            assert_eq!(out.token_count(), name.token_count());
            assert_eq!(chars_of(&out), chars_of(&name) - 1);
        }
        for _ in 0..50 {
            let out = inject_error(&name, ErrorType::TwoChar, &mut rng).unwrap();
            assert_eq!(out.token_count(), name.token_count());
            assert_eq!(chars_of(&out), chars_of(&name) - 2);
            assert!(out.tokens().iter().all(|t| !t.is_empty()));
        }
    }

    #[test]
    fn char_deletion_can_turn_one_name_into_another() {
        // Dropping the right character relates the two real names.
        let name = TokenizedName::parse("محمود");
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..200 {
            seen.insert(
                inject_error(&name, ErrorType::OneChar, &mut rng)
                    .unwrap()
                    .joined(),
            );
        }
        assert!(seen.contains("محمد"), "got {seen:?}");
    }

    #[test]
    fn single_char_tokens_are_protected() {
        let name = TokenizedName::parse("م حسن");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let out = inject_error(&name, ErrorType::OneChar, &mut rng).unwrap();
            assert_eq!(out.tokens()[0], "م", "one-char token must survive");
        }
        // A name of only one-char tokens cannot take a character error.
        let tiny = TokenizedName::parse("م ح");
        assert!(!is_eligible(&tiny, ErrorType::OneChar));
    }

    #[test]
    fn two_char_eligibility_needs_spare_capacity() {
        // One two-char token alone cannot lose two characters.
        let name = TokenizedName::parse("اب");
        assert!(is_eligible(&name, ErrorType::OneChar));
        assert!(!is_eligible(&name, ErrorType::TwoChar));
        let wider = TokenizedName::parse("اب جد");
        assert!(is_eligible(&wider, ErrorType::TwoChar));
    }

    #[test]
    fn generation_is_deterministic_and_refs_are_distinct() {
        let base = base_from(&[
            ("1", "سالم راشد نادر حمدان"),
            ("2", "كامل فوزى عادل حسن"),
            ("3", "زرياب سامر فاضل عامر"),
            ("4", "نادر حسن كامل سعيد"),
            ("5", "طارق عماد صابر جلال"),
        ]);
        let a = generate_test_set(&base, ErrorType::OmitSecond, 3, 42).unwrap();
        let b = generate_test_set(&base, ErrorType::OmitSecond, 3, 42).unwrap();
        assert_eq!(a.to_file_string(), b.to_file_string());
        let c = generate_test_set(&base, ErrorType::OmitSecond, 3, 43).unwrap();
        assert_ne!(a.to_file_string(), c.to_file_string());
        let mut refs: Vec<&str> = a.rows.iter().map(|r| r.ref_b_id.as_str()).collect();
        refs.sort_unstable();
        refs.dedup();
        assert_eq!(refs.len(), 3);
        // T_IDs are sequential.
        assert_eq!(
            a.rows.iter().map(|r| r.t_id.as_str()).collect::<Vec<_>>(),
            ["1", "2", "3"]
        );
    }

    #[test]
    fn generation_rejects_insufficient_eligible() {
        let base = base_from(&[("1", "سالم راشد نادر حمدان"), ("2", "قصير")]);
        let err = generate_test_set(&base, ErrorType::OmitFirst, 2, 1).unwrap_err();
        assert!(err.to_string().contains("only 1"), "{err}");
    }

    #[test]
    fn omission_rows_are_order_preserving_subsequences() {
        let base = base_from(&[
            ("1", "سالم راشد نادر حمدان"),
            ("2", "كامل فوزى عادل حسن منصور"),
        ]);
        for e in [
            ErrorType::OmitFirst,
            ErrorType::OmitSecond,
            ErrorType::OmitThird,
            ErrorType::OmitSecondThird,
        ] {
            let set = generate_test_set(&base, e, 2, 5).unwrap();
            let drop_count = if e == ErrorType::OmitSecondThird {
                2
            } else {
                1
            };
            for row in &set.rows {
                let src_idx = base.index_of(&row.ref_b_id).unwrap();
                let source = &base.normalized()[src_idx];
                let distorted = TokenizedName::parse(&row.distorted);
                assert_eq!(distorted.token_count(), source.token_count() - drop_count);
                // Subsequence check, order preserved.
                let mut it = source.tokens().iter();
                for t in distorted.tokens() {
                    assert!(it.any(|s| s == t), "{} not a subsequence", row.distorted);
                }
            }
        }
    }

    #[test]
    fn test_set_file_round_trip() {
        let base = base_from(&[
            ("1", "سالم راشد نادر حمدان"),
            ("2", "كامل فوزى عادل حسن"),
            ("3", "زرياب سامر فاضل عامر"),
            ("4", "نادر حسن كامل سعيد"),
        ]);
        let set = generate_test_set(&base, ErrorType::TwoChar, 2, 7).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("test.csv");
        set.write(&path).unwrap();
        let loaded = TestSet::load(&path).unwrap();
        assert_eq!(loaded, set);
    }
}
