//! Canonical token form and noun-postfix stripping.
//!
//! Every lookup in the crate is done on a [`NormalizedToken`]: surrounding
//! whitespace trimmed, Arabic orthographic variants folded onto their
//! Persian counterparts, and internal whitespace turned into a single
//! zero-width non-joiner (ZWNJ, U+200C).

use std::borrow::Borrow;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use thiserror::Error;

use crate::io::{read_text_lines, TextError};

/// Zero-width non-joiner.
pub const ZWNJ: char = '\u{200C}';

/// Codepoint substitutions applied during normalization, source to target.
pub const UNIFIED_CODEPOINTS: &[(char, char)] = &[
    ('\u{064A}', '\u{06CC}'), // arabic yeh -> farsi yeh
    ('\u{0643}', '\u{06A9}'), // arabic kaf -> keheh
    ('\u{0629}', '\u{0647}'), // teh marbuta -> heh
    ('\u{0660}', '\u{06F0}'),
    ('\u{0661}', '\u{06F1}'),
    ('\u{0662}', '\u{06F2}'),
    ('\u{0663}', '\u{06F3}'),
    ('\u{0664}', '\u{06F4}'),
    ('\u{0665}', '\u{06F5}'),
    ('\u{0666}', '\u{06F6}'),
    ('\u{0667}', '\u{06F7}'),
    ('\u{0668}', '\u{06F8}'),
    ('\u{0669}', '\u{06F9}'),
];

/// Codepoints dropped during normalization: harakat and tatweel.
pub const REMOVED_CODEPOINTS: &[char] = &[
    '\u{064B}', '\u{064C}', '\u{064D}', '\u{064E}', '\u{064F}', '\u{0650}', '\u{0651}', '\u{0652}',
    '\u{0640}',
];

enum Class {
    Keep(char),
    Drop,
    Separator,
}

fn classify(c: char) -> Class {
    if c == ZWNJ || c.is_whitespace() {
        return Class::Separator;
    }
    if REMOVED_CODEPOINTS.contains(&c) {
        return Class::Drop;
    }
    match c {
        '\u{064A}' => Class::Keep('\u{06CC}'),
        '\u{0643}' => Class::Keep('\u{06A9}'),
        '\u{0629}' => Class::Keep('\u{0647}'),
        '\u{0660}'..='\u{0669}' => {
            // Arabic-Indic and Extended Arabic-Indic digit blocks are parallel.
            Class::Keep(char::from_u32(c as u32 - 0x0660 + 0x06F0).unwrap_or(c))
        }
        _ => Class::Keep(c),
    }
}

/// A single token in canonical form.
///
/// Holds no whitespace, no unified-away codepoints, and no leading,
/// trailing or doubled ZWNJ. The only way to build one is through
/// [`normalize`] (or [`NormalizedToken::new`]), so the invariants hold for
/// every value of this type.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalizedToken(String);

impl NormalizedToken {
    pub fn new(raw: &str) -> Self {
        normalize(raw)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Length in Unicode scalar values. ZWNJ counts as one position.
    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }

    /// Leading `n` scalar values; `None` if `n` exceeds the token length.
    pub fn leading(&self, n: usize) -> Option<&str> {
        if n == 0 {
            return Some("");
        }
        match self.0.char_indices().nth(n) {
            Some((end, _)) => Some(&self.0[..end]),
            None if self.char_len() == n => Some(&self.0),
            None => None,
        }
    }

    // Caller guarantees `s` is already canonical.
    pub(crate) fn from_canonical(s: &str) -> Self {
        debug_assert_eq!(normalize(s).as_str(), s);
        NormalizedToken(s.to_owned())
    }
}

impl fmt::Debug for NormalizedToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for NormalizedToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for NormalizedToken {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for NormalizedToken {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for NormalizedToken {
    fn from(raw: &str) -> Self {
        normalize(raw)
    }
}

/// Canonicalizes a raw token.
///
/// Trims surrounding whitespace, applies [`UNIFIED_CODEPOINTS`] and
/// [`REMOVED_CODEPOINTS`], and replaces every internal run of whitespace
/// and/or ZWNJ with exactly one ZWNJ. An input that is empty after this
/// yields an empty token.
pub fn normalize(raw: &str) -> NormalizedToken {
    let mut out = String::with_capacity(raw.len());
    let mut pending_separator = false;
    for c in raw.chars() {
        match classify(c) {
            Class::Separator => pending_separator = true,
            Class::Drop => {}
            Class::Keep(c) => {
                if pending_separator && !out.is_empty() {
                    out.push(ZWNJ);
                }
                pending_separator = false;
                out.push(c);
            }
        }
    }
    NormalizedToken(out)
}

#[derive(Debug, Error, PartialEq)]
pub enum SuffixRuleError {
    #[error("suffix rule has an empty suffix")]
    EmptySuffix,
    #[error("suffix {0:?} is not in canonical form")]
    NotCanonical(String),
    #[error("duplicate suffix rule {0:?}")]
    Duplicate(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Text(#[from] TextError),
}

/// A noun postfix the stemmer may remove.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SuffixRule {
    suffix: String,
    strip_preceding_zwnj: bool,
}

impl SuffixRule {
    pub fn new(suffix: &str, strip_preceding_zwnj: bool) -> Result<Self, SuffixRuleError> {
        let canonical = normalize(suffix);
        if canonical.is_empty() {
            return Err(SuffixRuleError::EmptySuffix);
        }
        if canonical.as_str() != suffix {
            return Err(SuffixRuleError::NotCanonical(suffix.to_owned()));
        }
        Ok(SuffixRule {
            suffix: canonical.into_string(),
            strip_preceding_zwnj,
        })
    }

    pub fn suffix(&self) -> &str {
        &self.suffix
    }

    pub fn strip_preceding_zwnj(&self) -> bool {
        self.strip_preceding_zwnj
    }

    fn char_len(&self) -> usize {
        self.suffix.chars().count()
    }

    /// Residue left after applying this rule to `word`, if the rule applies.
    ///
    /// A rule with `strip_preceding_zwnj` matches both the attached and the
    /// ZWNJ-separated spelling. Without it, only the attached spelling
    /// matches, since removing the suffix alone would leave a dangling ZWNJ.
    fn residue<'a>(&self, word: &'a str) -> Option<&'a str> {
        let rest = word.strip_suffix(self.suffix.as_str())?;
        match rest.strip_suffix(ZWNJ) {
            Some(before) if self.strip_preceding_zwnj => Some(before),
            Some(_) => None,
            None => Some(rest),
        }
    }
}

/// Ordered set of suffix rules, tried longest suffix first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixRules {
    rules: Vec<SuffixRule>,
}

/// Stems shorter than this many scalar values are never produced.
pub const MIN_STEM_LEN: usize = 2;

impl SuffixRules {
    pub fn new(rules: impl IntoIterator<Item = SuffixRule>) -> Result<Self, SuffixRuleError> {
        let mut rules: Vec<SuffixRule> = rules.into_iter().collect();
        rules.sort_by(|a, b| {
            b.char_len()
                .cmp(&a.char_len())
                .then_with(|| a.suffix.cmp(&b.suffix))
        });
        for pair in rules.windows(2) {
            if pair[0].suffix == pair[1].suffix {
                return Err(SuffixRuleError::Duplicate(pair[0].suffix.clone()));
            }
        }
        Ok(SuffixRules { rules })
    }

    /// No rules at all; stemming becomes the identity.
    pub fn empty() -> Self {
        SuffixRules { rules: Vec::new() }
    }

    /// Parses the rule file format: `suffix<TAB>zwnj` per line with
    /// `zwnj` in `{0,1}`; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, SuffixRuleError> {
        let mut rules = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.trim_end_matches('\r');
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let suffix = fields.next().unwrap_or_default().trim();
            let flag = fields.next().map(str::trim);
            if fields.next().is_some() {
                return Err(SuffixRuleError::Parse {
                    line: line_no,
                    reason: "expected two tab-separated fields".into(),
                });
            }
            let strip = match flag {
                Some("1") => true,
                Some("0") => false,
                Some(other) => {
                    return Err(SuffixRuleError::Parse {
                        line: line_no,
                        reason: format!("zwnj flag must be 0 or 1, got {other:?}"),
                    })
                }
                None => {
                    return Err(SuffixRuleError::Parse {
                        line: line_no,
                        reason: "missing zwnj flag".into(),
                    })
                }
            };
            let rule = SuffixRule::new(suffix, strip).map_err(|e| SuffixRuleError::Parse {
                line: line_no,
                reason: e.to_string(),
            })?;
            rules.push(rule);
        }
        SuffixRules::new(rules)
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Self, SuffixRuleError> {
        let text = read_text_lines(reader)?.join("\n");
        SuffixRules::parse(&text)
    }

    /// Serializes back into the rule file format.
    pub fn to_file_format(&self) -> String {
        self.rules
            .iter()
            .map(|r| format!("{}\t{}\n", r.suffix, u8::from(r.strip_preceding_zwnj)))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SuffixRule> {
        self.rules.iter()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// Strips noun postfixes from `token`.
///
/// At each step the longest rule whose removal keeps at least
/// [`MIN_STEM_LEN`] scalar values is applied; stops when no rule can be
/// applied.
pub fn stem(token: &NormalizedToken, rules: &SuffixRules) -> NormalizedToken {
    let mut current = token.as_str();
    'outer: loop {
        for rule in &rules.rules {
            if let Some(residue) = rule.residue(current) {
                if residue.chars().nth(MIN_STEM_LEN - 1).is_some() {
                    current = residue;
                    continue 'outer;
                }
            }
        }
        break;
    }
    NormalizedToken::from_canonical(current)
}

impl FromStr for SuffixRules {
    type Err = SuffixRuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuffixRules::parse(s)
    }
}
