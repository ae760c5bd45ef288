//! Standardization of Arabic personal names.
//!
//! Raw name text arrives with honorific titles, inconsistent hamza
//! spellings, stray punctuation and uneven spacing. This module turns it
//! into a canonical list of tokens so that every metric in the crate
//! compares like with like:
//!
//! - unify character variants (`أ`/`إ`/`آ` to `ا`, word-final `ي` to `ى`)
//! - drop punctuation and collapse whitespace
//! - strip leading titles (`دكتور`, `د.`, ...)
//! - join composite name particles (`عبد` + `الرحمن` = `عبدالرحمن`)
//!
//! All rules are data, not code: see [`NormalizationRules`] and the
//! shipped [`DEFAULT_RULES`].

use alloc::borrow::ToOwned;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use unicode_normalization::UnicodeNormalization;

/// The default rule set, in the rules-file format parsed by
/// [`NormalizationRules::parse`].
pub const DEFAULT_RULES: &str = include_str!("../data/rules_default.txt");

/// Punctuation removed outright during unification (ASCII and Arabic
/// comma, period, slash, hyphen). Removal glues the surrounding
/// characters together, which is what makes `أ.د.` collapse to a single
/// strippable title token.
const STRIPPED_PUNCTUATION: &[char] = &['.', ',', '/', '-', '\u{060C}'];

/// Character-map rewrites are reapplied until the word stops changing,
/// bounded by this many passes so that a cyclic user-supplied rule set
/// still terminates.
const MAX_CHAR_MAP_PASSES: usize = 8;

/// A name as a sequence of standardized tokens, in written order.
///
/// Tokens are never empty and never contain whitespace. Order is
/// significant: Arabic names are written in a restricted order, and the
/// matching metrics rely on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TokenizedName {
    tokens: Vec<String>,
}

/// Violation of the [`TokenizedName`] token invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenError {
    EmptyToken,
    WhitespaceInToken(String),
}

impl fmt::Display for TokenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenError::EmptyToken => write!(f, "name token is empty"),
            TokenError::WhitespaceInToken(t) => {
                write!(f, "name token {t:?} contains whitespace")
            }
        }
    }
}

impl core::error::Error for TokenError {}

impl TokenizedName {
    /// Builds a name from pre-split tokens, validating the invariants.
    pub fn new<I, S>(tokens: I) -> Result<Self, TokenError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        for t in &tokens {
            if t.is_empty() {
                return Err(TokenError::EmptyToken);
            }
            if t.chars().any(char::is_whitespace) {
                return Err(TokenError::WhitespaceInToken(t.clone()));
            }
        }
        Ok(Self { tokens })
    }

    /// Splits already-standardized text on whitespace. No character
    /// unification is performed; use [`normalize_name`] for raw input.
    pub fn parse(text: &str) -> Self {
        Self {
            tokens: text.split_whitespace().map(str::to_string).collect(),
        }
    }

    pub(crate) fn from_validated(tokens: Vec<String>) -> Self {
        Self { tokens }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The tokens rejoined with single spaces.
    pub fn joined(&self) -> String {
        self.tokens.join(" ")
    }
}

impl fmt::Display for TokenizedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(t)?;
        }
        Ok(())
    }
}

/// One character-map rewrite: replace `from` with `to`, either anywhere
/// in a word or only at its end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharRule {
    pub from: String,
    pub to: String,
    pub word_final: bool,
}

/// The configurable pieces of the standardization pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationRules {
    title_prefixes: Vec<String>,
    prefix_particles: Vec<String>,
    suffix_particles: Vec<String>,
    character_map: Vec<CharRule>,
    // Lookup forms include the unified spelling of each entry so that
    // rules written with hamza or punctuation still match text that has
    // already passed through unify_characters.
    title_lookup: Vec<String>,
    prefix_lookup: Vec<String>,
    suffix_lookup: Vec<String>,
}

/// Error from parsing a rules file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RulesError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for RulesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rules line {}: {}", self.line, self.message)
    }
}

impl core::error::Error for RulesError {}

impl NormalizationRules {
    pub fn new(
        title_prefixes: Vec<String>,
        prefix_particles: Vec<String>,
        suffix_particles: Vec<String>,
        character_map: Vec<CharRule>,
    ) -> Self {
        let mut rules = Self {
            title_prefixes,
            prefix_particles,
            suffix_particles,
            character_map,
            title_lookup: Vec::new(),
            prefix_lookup: Vec::new(),
            suffix_lookup: Vec::new(),
        };
        rules.rebuild_lookups();
        rules
    }

    /// Parses the sectioned rules-file format (see [`DEFAULT_RULES`] for
    /// a commented example).
    pub fn parse(text: &str) -> Result<Self, RulesError> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Titles,
            Prefixes,
            Suffixes,
            CharMap,
        }
        let mut section = Section::None;
        let mut titles = Vec::new();
        let mut prefixes = Vec::new();
        let mut suffixes = Vec::new();
        let mut char_map = Vec::new();

        for (idx, raw_line) in text.lines().enumerate() {
            let line = raw_line.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = match name {
                    "title_prefixes" => Section::Titles,
                    "prefix_particles" => Section::Prefixes,
                    "suffix_particles" => Section::Suffixes,
                    "character_map" => Section::CharMap,
                    other => {
                        return Err(RulesError {
                            line: lineno,
                            message: alloc::format!("unknown section [{other}]"),
                        })
                    }
                };
                continue;
            }
            match section {
                Section::None => {
                    return Err(RulesError {
                        line: lineno,
                        message: "entry before any [section] header".to_owned(),
                    })
                }
                Section::Titles => titles.push(line.to_owned()),
                Section::Prefixes => prefixes.push(line.to_owned()),
                Section::Suffixes => suffixes.push(line.to_owned()),
                Section::CharMap => {
                    let mut parts = line.split_whitespace();
                    let (Some(from), Some(to), None) = (parts.next(), parts.next(), parts.next())
                    else {
                        return Err(RulesError {
                            line: lineno,
                            message: "character_map entries are `FROM TO`".to_owned(),
                        });
                    };
                    let (from, word_final) = match from.strip_suffix('$') {
                        Some(stripped) => (stripped, true),
                        None => (from, false),
                    };
                    if from.is_empty() {
                        return Err(RulesError {
                            line: lineno,
                            message: "character_map FROM side is empty".to_owned(),
                        });
                    }
                    char_map.push(CharRule {
                        from: from.to_owned(),
                        to: to.to_owned(),
                        word_final,
                    });
                }
            }
        }
        Ok(Self::new(titles, prefixes, suffixes, char_map))
    }

    pub fn title_prefixes(&self) -> &[String] {
        &self.title_prefixes
    }

    pub fn prefix_particles(&self) -> &[String] {
        &self.prefix_particles
    }

    pub fn suffix_particles(&self) -> &[String] {
        &self.suffix_particles
    }

    pub fn character_map(&self) -> &[CharRule] {
        &self.character_map
    }

    fn rebuild_lookups(&mut self) {
        let titles = self.lookup_forms(&self.title_prefixes);
        let prefixes = self.lookup_forms(&self.prefix_particles);
        let suffixes = self.lookup_forms(&self.suffix_particles);
        self.title_lookup = titles;
        self.prefix_lookup = prefixes;
        self.suffix_lookup = suffixes;
    }

    fn lookup_forms(&self, entries: &[String]) -> Vec<String> {
        let mut lookup: Vec<String> = Vec::new();
        for e in entries {
            for form in [e.clone(), unify_characters(e, self)] {
                if !form.is_empty() && !lookup.contains(&form) {
                    lookup.push(form);
                }
            }
        }
        lookup
    }

    fn is_title(&self, token: &str) -> bool {
        self.title_lookup.iter().any(|t| t == token)
    }

    fn is_prefix_particle(&self, token: &str) -> bool {
        self.prefix_lookup.iter().any(|t| t == token)
    }

    fn is_suffix_particle(&self, token: &str) -> bool {
        self.suffix_lookup.iter().any(|t| t == token)
    }
}

impl Default for NormalizationRules {
    fn default() -> Self {
        Self::parse(DEFAULT_RULES).expect("embedded default rules parse")
    }
}

fn apply_char_map_once(word: &str, rules: &[CharRule]) -> String {
    let mut out = word.to_owned();
    for rule in rules {
        if rule.word_final {
            if let Some(stem) = out.strip_suffix(rule.from.as_str()) {
                let mut replaced = String::with_capacity(out.len());
                replaced.push_str(stem);
                replaced.push_str(&rule.to);
                out = replaced;
            }
        } else if out.contains(rule.from.as_str()) {
            out = out.replace(rule.from.as_str(), &rule.to);
        }
    }
    out
}

fn apply_char_map(word: &str, rules: &[CharRule]) -> String {
    let mut current = word.to_owned();
    for _ in 0..MAX_CHAR_MAP_PASSES {
        let next = apply_char_map_once(&current, rules);
        if next == current {
            break;
        }
        current = next;
    }
    current
}

/// Rewrites character variants to their canonical spelling, removes
/// punctuation, and collapses whitespace. Total: any input maps to some
/// (possibly empty) output.
///
/// The text is brought to Unicode canonical composition (NFC) first, so
/// decomposed hamza sequences behave like their precomposed forms.
pub fn unify_characters(text: &str, rules: &NormalizationRules) -> String {
    let composed: String = text
        .nfc()
        .filter(|c| !STRIPPED_PUNCTUATION.contains(c))
        .collect();
    let mut out = String::with_capacity(composed.len());
    for word in composed.split_whitespace() {
        let mapped = apply_char_map(word, &rules.character_map);
        if mapped.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&mapped);
    }
    out
}

/// Removes leading title tokens, repeatedly, until the first token is
/// not a configured title. Titles match in both their written and their
/// unified spelling, so this works on raw and on unified text.
pub fn strip_titles(text: &str, rules: &NormalizationRules) -> String {
    let mut rest = text.trim_start();
    while let Some(first) = rest.split_whitespace().next() {
        if !rules.is_title(first) {
            break;
        }
        rest = rest[first.len()..].trim_start();
    }
    rest.to_owned()
}

/// Merges composite-name particles with their neighbor in one
/// left-to-right pass: a prefix particle (`عبد`) joins the token after
/// it, a suffix particle (`الدين`) joins the token before it. A particle
/// with no neighbor on the required side is left as-is.
pub fn join_composites(name: &TokenizedName, rules: &NormalizationRules) -> TokenizedName {
    let tokens = name.tokens();
    let mut out: Vec<String> = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        if rules.is_prefix_particle(t) && i + 1 < tokens.len() {
            let mut merged = t.clone();
            merged.push_str(&tokens[i + 1]);
            out.push(merged);
            i += 2;
        } else if rules.is_suffix_particle(t) && !out.is_empty() {
            let mut merged = out.pop().expect("checked non-empty");
            merged.push_str(t);
            out.push(merged);
            i += 1;
        } else {
            out.push(t.clone());
            i += 1;
        }
    }
    TokenizedName::from_validated(out)
}

/// The full standardization pipeline: unify characters, strip titles,
/// split on whitespace, join composite particles.
///
/// Whitespace-only input yields an empty token list.
pub fn normalize_name(raw: &str, rules: &NormalizationRules) -> TokenizedName {
    let unified = unify_characters(raw, rules);
    let untitled = strip_titles(&unified, rules);
    let tokens: Vec<String> = untitled.split_whitespace().map(str::to_string).collect();
    join_composites(&TokenizedName::from_validated(tokens), rules)
}
