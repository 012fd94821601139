//! Data files shipped with the crate.
//!
//! The prefix table and suffix rules are the production defaults. The
//! lexicon and exceptions list are fixture-scale samples; real runs point
//! at user-supplied files.

use crate::lexicon::{load_wordlist, ExceptionList, PolarityLexicon, PrefixTable};
use crate::textnorm::SuffixRules;

pub const PREFIXES_TXT: &str = include_str!("../data/prefixes.txt");
pub const SUFFIX_RULES_TXT: &str = include_str!("../data/suffix_rules.txt");
pub const LEXICON_TXT: &str = include_str!("../data/lexicon.txt");
pub const EXCEPTIONS_TXT: &str = include_str!("../data/exceptions.txt");

/// File names looked up under a data directory.
pub const PREFIXES_FILE: &str = "prefixes.txt";
pub const SUFFIX_RULES_FILE: &str = "suffix_rules.txt";
pub const LEXICON_FILE: &str = "lexicon.txt";
pub const EXCEPTIONS_FILE: &str = "exceptions.txt";

pub fn prefix_table() -> PrefixTable {
    PrefixTable::load(PREFIXES_TXT.as_bytes()).expect("shipped prefix table parses")
}

pub fn suffix_rules() -> SuffixRules {
    SuffixRules::parse(SUFFIX_RULES_TXT).expect("shipped suffix rules parse")
}

pub fn lexicon() -> PolarityLexicon {
    PolarityLexicon::from_entries(
        load_wordlist(LEXICON_TXT.as_bytes())
            .expect("shipped lexicon parses")
            .entries,
    )
}

pub fn exceptions() -> ExceptionList {
    ExceptionList::from_entries(
        load_wordlist(EXCEPTIONS_TXT.as_bytes())
            .expect("shipped exceptions parse")
            .entries,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textnorm::{normalize, stem};

    #[test]
    fn shipped_files_parse() {
        assert_eq!(prefix_table().len(), 7);
        assert_eq!(suffix_rules().len(), 13);
        assert!(!lexicon().is_empty());
        assert!(exceptions().irregular_entries(&prefix_table()).is_empty());
    }

    #[test]
    fn shipped_exceptions_survive_stemming() {
        // otherwise the detector could never reach them
        let rules = suffix_rules();
        for entry in exceptions().iter() {
            assert_eq!(
                &stem(entry, &rules),
                entry,
                "{entry} is altered by the stemmer"
            );
        }
    }

    #[test]
    fn shipped_lexicon_entries_are_canonical() {
        for entry in lexicon().iter() {
            assert_eq!(&normalize(entry.as_str()), entry);
        }
    }
}
