//! Scoring the detector against hand-labelled word lists.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::io::{self, BufRead, Write};

use num_rational::Ratio;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::detector::{DetectError, Detector};
use crate::io::{TextError, TextLines};
use crate::textnorm::{normalize, NormalizedToken};

#[derive(Debug, Error)]
pub enum EvaluationError {
    #[error(transparent)]
    Text(#[from] TextError),
    #[error("gold row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("gold row {row}: duplicate word {word:?}")]
    DuplicateWord { row: usize, word: String },
    #[error("gold sample is empty")]
    EmptySample,
    #[error("sample size must be positive")]
    ZeroSampleSize,
    #[error("cannot sample {k} words from a pool of {pool}")]
    SampleTooLarge { k: usize, pool: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldItem {
    pub word: String,
    pub is_negative: bool,
}

/// Hand-labelled words. Non-empty and free of duplicates (compared after
/// normalization).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldSample {
    items: Vec<GoldItem>,
}

impl GoldSample {
    pub fn new(items: Vec<GoldItem>) -> Result<Self, EvaluationError> {
        if items.is_empty() {
            return Err(EvaluationError::EmptySample);
        }
        let mut seen = HashSet::new();
        for (i, item) in items.iter().enumerate() {
            let key = normalize(&item.word);
            if !key.is_empty() && !seen.insert(key) {
                return Err(EvaluationError::DuplicateWord {
                    row: i + 1,
                    word: item.word.clone(),
                });
            }
        }
        Ok(GoldSample { items })
    }

    /// Parses `word<TAB>label` rows, `label` in `{0,1}`. Blank lines and
    /// `#` comments are ignored; rows are numbered by physical line.
    pub fn read<R: BufRead>(reader: R) -> Result<Self, EvaluationError> {
        let mut items = Vec::new();
        let mut seen = HashSet::new();
        for line in TextLines::new(reader) {
            let (row, line) = line?;
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let malformed = |reason: &str| EvaluationError::MalformedRow {
                row,
                reason: reason.to_owned(),
            };
            let (word, label) = line
                .rsplit_once('\t')
                .ok_or_else(|| malformed("expected word<TAB>label"))?;
            let is_negative = match label.trim() {
                "1" => true,
                "0" => false,
                "" => return Err(malformed("missing label")),
                other => return Err(malformed(&format!("label must be 0 or 1, got {other:?}"))),
            };
            let key = normalize(word);
            if !key.is_empty() && !seen.insert(key) {
                return Err(EvaluationError::DuplicateWord {
                    row,
                    word: word.to_owned(),
                });
            }
            items.push(GoldItem {
                word: word.to_owned(),
                is_negative,
            });
        }
        GoldSample::new(items)
    }

    pub fn items(&self) -> &[GoldItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// A ratio that may be undefined because its denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Defined(Ratio<u64>),
    Undefined,
}

impl Metric {
    pub fn ratio(numerator: u64, denominator: u64) -> Metric {
        if denominator == 0 {
            Metric::Undefined
        } else {
            Metric::Defined(Ratio::new(numerator, denominator))
        }
    }

    pub fn value(self) -> Option<Ratio<u64>> {
        match self {
            Metric::Defined(r) => Some(r),
            Metric::Undefined => None,
        }
    }

    pub fn to_f64(self) -> Option<f64> {
        self.value().map(|r| *r.numer() as f64 / *r.denom() as f64)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_f64() {
            Some(v) => write!(f, "{v:.4}"),
            None => f.write_str("undefined"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn record(&mut self, predicted_negative: bool, gold_negative: bool) {
        match (predicted_negative, gold_negative) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, false) => self.tn += 1,
            (false, true) => self.fn_ += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn precision(&self) -> Metric {
        Metric::ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> Metric {
        Metric::ratio(self.tp, self.tp + self.fn_)
    }

    /// `2tp / (2tp + fp + fn)`, defined only when precision and recall are.
    pub fn f1(&self) -> Metric {
        match (self.precision(), self.recall()) {
            (Metric::Defined(_), Metric::Defined(_)) => {
                Metric::ratio(2 * self.tp, 2 * self.tp + self.fp + self.fn_)
            }
            _ => Metric::Undefined,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationReport {
    pub matrix: ConfusionMatrix,
    pub precision: Metric,
    pub recall: Metric,
    pub f1: Metric,
    /// Sample words that were empty after preprocessing.
    pub skipped: usize,
}

impl EvaluationReport {
    pub fn from_matrix(matrix: ConfusionMatrix, skipped: usize) -> Self {
        EvaluationReport {
            precision: matrix.precision(),
            recall: matrix.recall(),
            f1: matrix.f1(),
            matrix,
            skipped,
        }
    }

    /// Aligned table for people.
    pub fn write_human<W: Write>(&self, mut out: W) -> io::Result<()> {
        let m = &self.matrix;
        writeln!(out, "                 gold negative  gold other")?;
        writeln!(out, "detected negative {:>13}  {:>10}", m.tp, m.fp)?;
        writeln!(out, "detected other    {:>13}  {:>10}", m.fn_, m.tn)?;
        writeln!(out)?;
        writeln!(
            out,
            "scored words: {} (skipped {})",
            m.total(),
            self.skipped
        )?;
        writeln!(out, "precision:    {}", self.precision)?;
        writeln!(out, "recall:       {}", self.recall)?;
        writeln!(out, "f1:           {}", self.f1)
    }

    /// `key=value` block, one pair per line.
    pub fn write_key_values<W: Write>(&self, mut out: W) -> io::Result<()> {
        let m = &self.matrix;
        writeln!(out, "tp={}", m.tp)?;
        writeln!(out, "fp={}", m.fp)?;
        writeln!(out, "fn={}", m.fn_)?;
        writeln!(out, "tn={}", m.tn)?;
        writeln!(out, "precision={}", self.precision)?;
        writeln!(out, "recall={}", self.recall)?;
        writeln!(out, "f1={}", self.f1)?;
        writeln!(out, "skipped={}", self.skipped)
    }
}

/// Runs the detector over every sample word and tallies the result.
pub fn evaluate(sample: &GoldSample, detector: &Detector) -> EvaluationReport {
    let mut matrix = ConfusionMatrix::default();
    let mut skipped = 0;
    for item in sample.items() {
        match detector.detect(&item.word) {
            Ok(verdict) => matrix.record(verdict.is_negative(), item.is_negative),
            Err(DetectError::Degenerate(_)) => skipped += 1,
        }
    }
    EvaluationReport::from_matrix(matrix, skipped)
}

/// Seeded `k`-subset of `pool`, returned in pool order.
pub fn sample_words(
    pool: &BTreeSet<NormalizedToken>,
    k: usize,
    seed: u64,
) -> Result<Vec<NormalizedToken>, EvaluationError> {
    if k == 0 {
        return Err(EvaluationError::ZeroSampleSize);
    }
    if k > pool.len() {
        return Err(EvaluationError::SampleTooLarge {
            k,
            pool: pool.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, pool.len(), k).into_vec();
    picked.sort_unstable();
    let words: Vec<&NormalizedToken> = pool.iter().collect();
    Ok(picked.into_iter().map(|i| words[i].clone()).collect())
}

/// Writes a labelling skeleton: `word<TAB>` per line.
pub fn write_skeleton<W: Write>(mut out: W, words: &[NormalizedToken]) -> io::Result<()> {
    for w in words {
        writeln!(out, "{w}\t")?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn matrix(tp: u64, fp: u64, tn: u64, fn_: u64) -> ConfusionMatrix {
        ConfusionMatrix { tp, fp, tn, fn_ }
    }

    #[test]
    fn metrics_for_reported_counts() {
        let m = matrix(14, 6, 78, 2);
        assert_eq!(m.total(), 100);
        assert_eq!(m.precision(), Metric::Defined(Ratio::new(7, 10)));
        assert_eq!(m.recall(), Metric::Defined(Ratio::new(7, 8)));
        assert_eq!(m.f1(), Metric::Defined(Ratio::new(28, 36)));
    }

    #[test]
    fn perfect_detector() {
        let m = matrix(5, 0, 9, 0);
        assert_eq!(m.precision().value(), Some(Ratio::from_integer(1)));
        assert_eq!(m.recall().value(), Some(Ratio::from_integer(1)));
    }

    #[test]
    fn nothing_predicted_negative() {
        let m = matrix(0, 0, 4, 3);
        assert_eq!(m.precision(), Metric::Undefined);
        assert_eq!(m.recall(), Metric::Defined(Ratio::from_integer(0)));
        assert_eq!(m.f1(), Metric::Undefined);
    }

    #[test]
    fn key_value_block() {
        let report = EvaluationReport::from_matrix(matrix(14, 6, 78, 2), 1);
        let mut buf = Vec::new();
        report.write_key_values(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "tp=14\nfp=6\nfn=2\ntn=78\nprecision=0.7000\nrecall=0.8750\nf1=0.7778\nskipped=1\n"
        );
        let report = EvaluationReport::from_matrix(matrix(0, 0, 1, 1), 0);
        let mut buf = Vec::new();
        report.write_key_values(&mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .contains("precision=undefined\n"));
    }

    #[test]
    fn gold_parsing() {
        let gold =
            GoldSample::read("# header\nبی\u{200C}ادب\t1\r\nکتاب\t0\n\n".as_bytes()).unwrap();
        assert_eq!(gold.len(), 2);
        assert!(gold.items()[0].is_negative);
    }

    #[test]
    fn gold_rejects_bad_label() {
        let err = GoldSample::read("کتاب\t0\nبد\t2\n".as_bytes()).unwrap_err();
        assert!(
            matches!(err, EvaluationError::MalformedRow { row: 2, .. }),
            "{err}"
        );
        let err = GoldSample::read("کتاب\n".as_bytes()).unwrap_err();
        assert!(matches!(err, EvaluationError::MalformedRow { row: 1, .. }));
        let err = GoldSample::read("کتاب\t\n".as_bytes()).unwrap_err();
        assert!(matches!(err, EvaluationError::MalformedRow { row: 1, .. }));
    }

    #[test]
    fn gold_rejects_duplicates_and_emptiness() {
        let err = GoldSample::read("علي\t0\nعلی\t0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, EvaluationError::DuplicateWord { row: 2, .. }));
        assert!(matches!(
            GoldSample::read("# nothing\n".as_bytes()),
            Err(EvaluationError::EmptySample)
        ));
    }

    #[test]
    fn evaluate_counts_skips() {
        let gold = GoldSample::new(vec![
            GoldItem {
                word: "غیرقانونی".into(),
                is_negative: true,
            },
            GoldItem {
                word: "\u{064B}".into(),
                is_negative: false,
            },
            GoldItem {
                word: "کتاب".into(),
                is_negative: false,
            },
        ])
        .unwrap();
        let report = evaluate(&gold, &Detector::with_defaults());
        assert_eq!(report.skipped, 1);
        assert_eq!(report.matrix, matrix(1, 0, 1, 0));
    }

    fn pool(n: usize) -> BTreeSet<NormalizedToken> {
        (0..n).map(|i| normalize(&format!("w{i}"))).collect()
    }

    #[test]
    fn sampling() {
        let p = pool(100);
        let all = sample_words(&p, 100, 1).unwrap();
        assert_eq!(all, p.iter().cloned().collect::<Vec<_>>());
        assert_eq!(
            sample_words(&p, 10, 42).unwrap(),
            sample_words(&p, 10, 42).unwrap()
        );
        assert_ne!(
            sample_words(&p, 10, 42).unwrap(),
            sample_words(&p, 10, 43).unwrap()
        );
        assert!(matches!(
            sample_words(&p, 0, 1),
            Err(EvaluationError::ZeroSampleSize)
        ));
        assert!(matches!(
            sample_words(&p, 101, 1),
            Err(EvaluationError::SampleTooLarge { k: 101, pool: 100 })
        ));
    }

    #[test]
    fn skeleton_round_trip_needs_labels() {
        let words = sample_words(&pool(5), 3, 7).unwrap();
        let mut buf = Vec::new();
        write_skeleton(&mut buf, &words).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap().lines().count(), 3);
        assert!(GoldSample::read(&buf[..]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn metric_algebra(tp in 0u64..500, fp in 0u64..500, tn in 0u64..500, fn_ in 0u64..500) {
            let m = matrix(tp, fp, tn, fn_);
            prop_assert_eq!(m.total(), tp + fp + tn + fn_);
            // harmonic mean of precision and recall, as floats
            if let (Some(p), Some(r), Some(f)) = (m.precision().to_f64(), m.recall().to_f64(), m.f1().to_f64()) {
                let harmonic = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
                prop_assert!((harmonic - f).abs() <= 1e-12);
                prop_assert!((p - tp as f64 / (tp + fp) as f64).abs() <= 1e-12);
                prop_assert!((r - tp as f64 / (tp + fn_) as f64).abs() <= 1e-12);
            }
            prop_assert_eq!(m.precision() == Metric::Undefined, tp + fp == 0);
            prop_assert_eq!(m.recall() == Metric::Undefined, tp + fn_ == 0);
        }
    }
}
