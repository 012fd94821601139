//! The negative-word decision procedure.
//!
//! A raw token is normalized and stemmed, then checked in a fixed order:
//!
//! 1. some leading substring is in the polarity lexicon: negative;
//! 2. the whole token is in the exceptions list: not negative;
//! 3. a negative prefix leads the token: negative;
//! 4. otherwise: not negative.
//!
//! Stage 1 runs before stage 2, so a lexicon entry that leads a word wins
//! over that word's own exceptions-list entry.

use std::fmt;
use std::io::BufRead;

use thiserror::Error;

use crate::io::{TextError, TextLines};
use crate::lexicon::{ExceptionList, PolarityLexicon, PrefixTable};
use crate::textnorm::{normalize, stem, NormalizedToken, SuffixRules};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DetectError {
    #[error("input {0:?} is empty after preprocessing")]
    Degenerate(String),
}

/// Why a verdict came out the way it did.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rationale {
    /// The first `matched_length` scalar values form a lexicon entry.
    PolarityMatch {
        matched_length: usize,
    },
    ExceptionHit,
    PrefixHit {
        prefix: String,
    },
    NoMatch,
}

impl Rationale {
    pub fn is_negative(&self) -> bool {
        matches!(
            self,
            Rationale::PolarityMatch { .. } | Rationale::PrefixHit { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Rationale::PolarityMatch { .. } => "PolarityMatch",
            Rationale::ExceptionHit => "ExceptionHit",
            Rationale::PrefixHit { .. } => "PrefixHit",
            Rationale::NoMatch => "NoMatch",
        }
    }

    /// Matched length or prefix; empty for the other rationales.
    pub fn detail(&self) -> String {
        match self {
            Rationale::PolarityMatch { matched_length } => matched_length.to_string(),
            Rationale::PrefixHit { prefix } => prefix.clone(),
            Rationale::ExceptionHit | Rationale::NoMatch => String::new(),
        }
    }
}

impl fmt::Display for Rationale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rationale::PolarityMatch { matched_length } => {
                write!(f, "PolarityMatch({matched_length})")
            }
            Rationale::PrefixHit { prefix } => write!(f, "PrefixHit({prefix})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionVerdict {
    pub input_surface: String,
    pub input_canonical: NormalizedToken,
    pub rationale: Rationale,
}

impl DetectionVerdict {
    pub fn is_negative(&self) -> bool {
        self.rationale.is_negative()
    }

    /// `surface<TAB>canonical<TAB>negative<TAB>rationale<TAB>detail`
    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.input_surface,
            self.input_canonical,
            u8::from(self.is_negative()),
            self.rationale.name(),
            self.rationale.detail()
        )
    }
}

/// Normalizes then stems.
pub fn preprocess(raw: &str, rules: &SuffixRules) -> Result<NormalizedToken, DetectError> {
    let token = normalize(raw);
    if token.is_empty() {
        return Err(DetectError::Degenerate(raw.to_owned()));
    }
    Ok(stem(&token, rules))
}

/// Runs the four stages on an already preprocessed token.
pub fn classify(
    token: &NormalizedToken,
    lex: &PolarityLexicon,
    exc: &ExceptionList,
    table: &PrefixTable,
) -> Rationale {
    if let Some(matched_length) = lex.longest_negative_leading_match(token) {
        return Rationale::PolarityMatch { matched_length };
    }
    if exc.contains(token.as_str()) {
        return Rationale::ExceptionHit;
    }
    if let Some(m) = table.leading_prefix_match(token) {
        return Rationale::PrefixHit {
            prefix: m.prefix.to_owned(),
        };
    }
    Rationale::NoMatch
}

pub fn detect(
    raw: &str,
    lex: &PolarityLexicon,
    exc: &ExceptionList,
    table: &PrefixTable,
    rules: &SuffixRules,
) -> Result<DetectionVerdict, DetectError> {
    let canonical = preprocess(raw, rules)?;
    let rationale = classify(&canonical, lex, exc, table);
    Ok(DetectionVerdict {
        input_surface: raw.to_owned(),
        input_canonical: canonical,
        rationale,
    })
}

/// All four stores bundled, immutable once built.
#[derive(Debug, Clone)]
pub struct Detector {
    pub lexicon: PolarityLexicon,
    pub exceptions: ExceptionList,
    pub prefixes: PrefixTable,
    pub rules: SuffixRules,
}

impl Detector {
    pub fn new(
        lexicon: PolarityLexicon,
        exceptions: ExceptionList,
        prefixes: PrefixTable,
        rules: SuffixRules,
    ) -> Self {
        Detector {
            lexicon,
            exceptions,
            prefixes,
            rules,
        }
    }

    /// Detector over the data files bundled with the crate.
    pub fn with_defaults() -> Self {
        use crate::defaults;
        Detector::new(
            defaults::lexicon(),
            defaults::exceptions(),
            defaults::prefix_table(),
            defaults::suffix_rules(),
        )
    }

    pub fn detect(&self, raw: &str) -> Result<DetectionVerdict, DetectError> {
        detect(
            raw,
            &self.lexicon,
            &self.exceptions,
            &self.prefixes,
            &self.rules,
        )
    }

    pub fn detect_batch<R: BufRead>(&self, input: R) -> DetectBatch<'_, R> {
        DetectBatch {
            detector: self,
            lines: TextLines::new(input),
        }
    }
}

/// One output record of [`Detector::detect_batch`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BatchRecord {
    Verdict {
        line: usize,
        verdict: DetectionVerdict,
    },
    /// Whitespace-only (or otherwise degenerate) input line.
    Skipped { line: usize, surface: String },
}

impl BatchRecord {
    pub fn line(&self) -> usize {
        match self {
            BatchRecord::Verdict { line, .. } | BatchRecord::Skipped { line, .. } => *line,
        }
    }
}

/// Iterator over verdicts, one per non-empty input line, in input order.
/// Ends after the first read or decode error.
pub struct DetectBatch<'d, R> {
    detector: &'d Detector,
    lines: TextLines<R>,
}

impl<R: BufRead> Iterator for DetectBatch<'_, R> {
    type Item = Result<BatchRecord, TextError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let (line, text) = match self.lines.next()? {
                Ok(pair) => pair,
                Err(e) => return Some(Err(e)),
            };
            if text.is_empty() {
                continue;
            }
            return Some(Ok(match self.detector.detect(&text) {
                Ok(verdict) => BatchRecord::Verdict { line, verdict },
                Err(DetectError::Degenerate(surface)) => BatchRecord::Skipped { line, surface },
            }));
        }
    }
}
