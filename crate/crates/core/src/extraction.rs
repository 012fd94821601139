//! Offline construction of the exceptions list.
//!
//! Pipeline: harvest prefix-led words from a word source, count corpus
//! unigrams, then split the candidates on how often their base (the word
//! with its prefix removed) occurs in the corpus. Rare bases suggest the
//! "prefix" is really part of the word.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::num::NonZeroU64;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::io::{TextError, TextLines};
use crate::lexicon::{write_wordlist, PrefixTable};
use crate::textnorm::{normalize, NormalizedToken};

#[derive(Debug, Error)]
pub enum ExtractionError {
    #[error("candidate {0:?} is not led by any prefix in the table")]
    NoPrefix(String),
    #[error("threshold must be at least 1")]
    ZeroThreshold,
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

/// Token frequencies over a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UnigramModel {
    counts: HashMap<NormalizedToken, u64>,
    total_tokens: u64,
}

impl UnigramModel {
    /// Counts whitespace-delimited tokens, each normalized first. Tokens
    /// that normalize to nothing (a lone diacritic, say) are not counted.
    pub fn build<R: BufRead>(corpus: R) -> Result<Self, TextError> {
        let mut model = UnigramModel::default();
        for line in TextLines::new(corpus) {
            let (_, line) = line?;
            model.add_tokens(line.split_whitespace());
        }
        Ok(model)
    }

    pub fn from_tokens<'a, I: IntoIterator<Item = &'a str>>(tokens: I) -> Self {
        let mut model = UnigramModel::default();
        model.add_tokens(tokens);
        model
    }

    fn add_tokens<'a, I: IntoIterator<Item = &'a str>>(&mut self, tokens: I) {
        for raw in tokens {
            let token = normalize(raw);
            if token.is_empty() {
                continue;
            }
            *self.counts.entry(token).or_insert(0) += 1;
            self.total_tokens += 1;
        }
    }

    pub fn count(&self, token: &str) -> u64 {
        self.counts.get(token).copied().unwrap_or(0)
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Number of distinct tokens.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn vocabulary(&self) -> BTreeSet<NormalizedToken> {
        self.counts.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NormalizedToken, u64)> {
        self.counts.iter().map(|(k, &v)| (k, v))
    }
}

/// Minimum base frequency, exclusive, for a candidate to count as validly
/// prefixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Threshold(NonZeroU64);

impl Threshold {
    pub const DEFAULT: Threshold = Threshold(match NonZeroU64::new(5) {
        Some(n) => n,
        None => unreachable!(),
    });

    pub fn new(value: u64) -> Result<Self, ExtractionError> {
        NonZeroU64::new(value)
            .map(Threshold)
            .ok_or(ExtractionError::ZeroThreshold)
    }

    pub fn get(self) -> u64 {
        self.0.get()
    }

    /// Strictly greater: a base seen exactly `threshold` times is an
    /// exception.
    pub fn is_valid_base(self, base_count: u64) -> bool {
        base_count > self.get()
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold::DEFAULT
    }
}

/// Every word in `words` led by a prefix of `table`.
pub fn harvest_candidates<'a, I>(words: I, table: &PrefixTable) -> BTreeSet<NormalizedToken>
where
    I: IntoIterator<Item = &'a NormalizedToken>,
{
    words
        .into_iter()
        .filter(|w| table.leading_prefix_match(w).is_some())
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Evidence {
    pub word: NormalizedToken,
    pub prefix: String,
    pub base: NormalizedToken,
    pub base_count: u64,
}

/// Outcome of splitting candidates on base frequency.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartitionReport {
    pub valid_affixed: BTreeSet<NormalizedToken>,
    pub exceptions: BTreeSet<NormalizedToken>,
    /// One row per candidate, sorted by word.
    pub evidence: Vec<Evidence>,
}

impl PartitionReport {
    pub fn candidate_count(&self) -> usize {
        self.valid_affixed.len() + self.exceptions.len()
    }

    /// Union of two reports built against the same model and table.
    pub fn merge(&self, other: &PartitionReport) -> PartitionReport {
        let rows: BTreeMap<&NormalizedToken, &Evidence> = self
            .evidence
            .iter()
            .chain(&other.evidence)
            .map(|e| (&e.word, e))
            .collect();
        PartitionReport {
            valid_affixed: self
                .valid_affixed
                .union(&other.valid_affixed)
                .cloned()
                .collect(),
            exceptions: self.exceptions.union(&other.exceptions).cloned().collect(),
            evidence: rows.into_values().cloned().collect(),
        }
    }

    /// Evidence as TSV: `word<TAB>prefix<TAB>base<TAB>count`.
    pub fn write_evidence<W: Write>(&self, mut out: W) -> io::Result<()> {
        for row in &self.evidence {
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                row.word, row.prefix, row.base, row.base_count
            )?;
        }
        out.flush()
    }
}

/// Strips the longest prefix from each candidate and looks the base up in
/// `model`. Bases seen more than `threshold` times mark the word as validly
/// prefixed; the rest become exceptions.
pub fn partition_candidates<'a, I>(
    candidates: I,
    model: &UnigramModel,
    table: &PrefixTable,
    threshold: Threshold,
) -> Result<PartitionReport, ExtractionError>
where
    I: IntoIterator<Item = &'a NormalizedToken>,
{
    let mut report = PartitionReport::default();
    let mut rows = Vec::new();
    for word in candidates {
        let m = table
            .leading_prefix_match(word)
            .ok_or_else(|| ExtractionError::NoPrefix(word.to_string()))?;
        let base_count = model.count(m.base.as_str());
        if threshold.is_valid_base(base_count) {
            report.valid_affixed.insert(word.clone());
        } else {
            report.exceptions.insert(word.clone());
        }
        rows.push(Evidence {
            word: word.clone(),
            prefix: m.prefix.to_owned(),
            base: m.base,
            base_count,
        });
    }
    rows.sort();
    rows.dedup_by(|a, b| a.word == b.word);
    report.evidence = rows;
    Ok(report)
}

fn create(path: &Path) -> Result<BufWriter<File>, ExtractionError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| ExtractionError::Write {
            path: path.to_owned(),
            source,
        })
}

fn write_with<F>(path: &Path, f: F) -> Result<(), ExtractionError>
where
    F: FnOnce(BufWriter<File>) -> io::Result<()>,
{
    f(create(path)?).map_err(|source| ExtractionError::Write {
        path: path.to_owned(),
        source,
    })
}

/// Writes the two wordlists (sorted, one word per line) and the evidence
/// TSV.
pub fn emit_partition(
    report: &PartitionReport,
    out_valid: &Path,
    out_exceptions: &Path,
    out_evidence: &Path,
) -> Result<(), ExtractionError> {
    write_with(out_valid, |w| write_wordlist(w, &report.valid_affixed))?;
    write_with(out_exceptions, |w| write_wordlist(w, &report.exceptions))?;
    write_with(out_evidence, |w| report.write_evidence(w))?;
    Ok(())
}

/// Per-source partition counts, shaped like a "source / file / count"
/// table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSummary {
    pub source: String,
    pub exceptions: usize,
    pub valid_affixed: usize,
}

/// Result of running the whole pipeline over several word sources.
#[derive(Debug, Clone, Default)]
pub struct PipelineOutput {
    pub per_source: Vec<(String, PartitionReport)>,
    pub merged: PartitionReport,
}

impl PipelineOutput {
    pub fn summary(&self) -> Vec<SourceSummary> {
        self.per_source
            .iter()
            .map(|(name, r)| SourceSummary {
                source: name.clone(),
                exceptions: r.exceptions.len(),
                valid_affixed: r.valid_affixed.len(),
            })
            .collect()
    }

    /// Summary TSV `source<TAB>file<TAB>count`, exceptions row first for
    /// each source, then the merged totals.
    pub fn write_summary<W: Write>(&self, mut out: W) -> io::Result<()> {
        for s in self.summary() {
            writeln!(out, "{}\texceptions\t{}", s.source, s.exceptions)?;
            writeln!(out, "{}\tvalid_affixed\t{}", s.source, s.valid_affixed)?;
        }
        writeln!(out, "merged\texceptions\t{}", self.merged.exceptions.len())?;
        writeln!(
            out,
            "merged\tvalid_affixed\t{}",
            self.merged.valid_affixed.len()
        )?;
        out.flush()
    }
}

/// Harvests and partitions each named word source against one model, then
/// merges the results by set union.
pub fn run_pipeline<'a, I>(
    sources: I,
    model: &UnigramModel,
    table: &PrefixTable,
    threshold: Threshold,
) -> Result<PipelineOutput, ExtractionError>
where
    I: IntoIterator<Item = (&'a str, &'a BTreeSet<NormalizedToken>)>,
{
    let mut output = PipelineOutput::default();
    for (name, words) in sources {
        let candidates = harvest_candidates(words, table);
        let report = partition_candidates(&candidates, model, table, threshold)?;
        output.merged = output.merged.merge(&report);
        output.per_source.push((name.to_owned(), report));
    }
    Ok(output)
}

/// Difference between a generated wordlist and its hand-edited version.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordlistDiff {
    /// In the edited list only.
    pub added: BTreeSet<NormalizedToken>,
    /// In the generated list only.
    pub removed: BTreeSet<NormalizedToken>,
}

impl WordlistDiff {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty()
    }

    /// `+word` / `-word` lines, removals first.
    pub fn write<W: Write>(&self, mut out: W) -> io::Result<()> {
        for w in &self.removed {
            writeln!(out, "-{w}")?;
        }
        for w in &self.added {
            writeln!(out, "+{w}")?;
        }
        out.flush()
    }
}

pub fn diff_wordlists(
    generated: &BTreeSet<NormalizedToken>,
    edited: &BTreeSet<NormalizedToken>,
) -> WordlistDiff {
    WordlistDiff {
        added: edited.difference(generated).cloned().collect(),
        removed: generated.difference(edited).cloned().collect(),
    }
}
