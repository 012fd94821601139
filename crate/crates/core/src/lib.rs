//! Rule-based detection of Persian words with negative polarity.
//!
//! A word is judged negative when a leading part of it is a known negative
//! word, or when it starts with one of the negative prefixes (پاد، نا، بی،
//! ضد، غیر، لا، ن) and is not listed as an exception. The [`extraction`]
//! module builds the exceptions list from corpus statistics, and
//! [`evaluation`] scores the detector against labelled words.

pub mod defaults;
pub mod detector;
pub mod evaluation;
pub mod extraction;
pub mod io;
pub mod lexicon;
pub mod textnorm;

pub use detector::{
    detect, preprocess, BatchRecord, DetectError, DetectionVerdict, Detector, Rationale,
};
pub use evaluation::{
    evaluate, sample_words, ConfusionMatrix, EvaluationError, EvaluationReport, GoldItem,
    GoldSample, Metric,
};
pub use extraction::{
    diff_wordlists, emit_partition, harvest_candidates, partition_candidates, run_pipeline,
    ExtractionError, PartitionReport, Threshold, UnigramModel,
};
pub use io::TextError;
pub use lexicon::{
    load_wordlist, write_wordlist, ExceptionList, LexiconError, PolarityLexicon, PrefixTable,
    Wordlist,
};
pub use textnorm::{normalize, stem, NormalizedToken, SuffixRule, SuffixRules, ZWNJ};
