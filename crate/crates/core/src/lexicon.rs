//! The three lexical stores: negative-polarity lexicon, exceptions list and
//! negative prefix table.

use std::collections::{BTreeSet, HashSet};
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::io::{TextError, TextLines};
use crate::textnorm::{normalize, NormalizedToken, ZWNJ};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error(transparent)]
    Text(#[from] TextError),
    #[error("prefix table is empty")]
    EmptyPrefixTable,
    #[error("duplicate prefix {0:?}")]
    DuplicatePrefix(String),
}

/// A wordlist file after loading.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Wordlist {
    pub entries: BTreeSet<NormalizedToken>,
    /// Physical lines in the source, comments and blanks included.
    pub lines_read: usize,
}

impl Wordlist {
    pub fn kept(&self) -> usize {
        self.entries.len()
    }
}

/// Loads a one-token-per-line wordlist.
///
/// Lines whose first non-blank character is `#` are comments. Every other
/// line is normalized; lines that normalize to nothing are dropped and
/// duplicates collapse.
pub fn load_wordlist<R: BufRead>(reader: R) -> Result<Wordlist, TextError> {
    let mut list = Wordlist::default();
    for line in TextLines::new(reader) {
        let (_, line) = line?;
        list.lines_read += 1;
        if line.trim_start().starts_with('#') {
            continue;
        }
        let token = normalize(&line);
        if !token.is_empty() {
            list.entries.insert(token);
        }
    }
    Ok(list)
}

/// Writes one token per line in lexicographic (code point) order.
pub fn write_wordlist<'a, W, I>(mut out: W, entries: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a NormalizedToken>,
{
    let sorted: BTreeSet<&NormalizedToken> = entries.into_iter().collect();
    for token in sorted {
        writeln!(out, "{token}")?;
    }
    out.flush()
}

/// Character-keyed prefix tree over lexicon entries.
#[derive(Debug, Clone, Default)]
struct CharTrie {
    nodes: Vec<TrieNode>,
}

#[derive(Debug, Clone, Default)]
struct TrieNode {
    children: Vec<(char, usize)>,
    terminal: bool,
}

impl CharTrie {
    fn new() -> Self {
        CharTrie {
            nodes: vec![TrieNode::default()],
        }
    }

    fn insert(&mut self, word: &str) {
        let mut node = 0;
        for c in word.chars() {
            node = match self.nodes[node]
                .children
                .binary_search_by_key(&c, |&(k, _)| k)
            {
                Ok(i) => self.nodes[node].children[i].1,
                Err(i) => {
                    let id = self.nodes.len();
                    self.nodes.push(TrieNode::default());
                    self.nodes[node].children.insert(i, (c, id));
                    id
                }
            };
        }
        self.nodes[node].terminal = true;
    }

    /// Scalar length of the longest entry that leads `word`.
    fn longest_leading(&self, word: &str) -> Option<usize> {
        let mut node = 0;
        let mut best = None;
        for (depth, c) in word.chars().enumerate() {
            let children = &self.nodes[node].children;
            match children.binary_search_by_key(&c, |&(k, _)| k) {
                Ok(i) => node = children[i].1,
                Err(_) => break,
            }
            if self.nodes[node].terminal {
                best = Some(depth + 1);
            }
        }
        best
    }
}

/// Hand-tagged negative words.
///
/// Entries are normalized but not stemmed.
#[derive(Debug, Clone)]
pub struct PolarityLexicon {
    entries: HashSet<NormalizedToken>,
    trie: CharTrie,
}

impl Default for PolarityLexicon {
    fn default() -> Self {
        PolarityLexicon::from_entries(std::iter::empty())
    }
}

impl PolarityLexicon {
    pub fn from_entries<I: IntoIterator<Item = NormalizedToken>>(entries: I) -> Self {
        let entries: HashSet<NormalizedToken> =
            entries.into_iter().filter(|t| !t.is_empty()).collect();
        let mut trie = CharTrie::new();
        for entry in &entries {
            trie.insert(entry.as_str());
        }
        PolarityLexicon { entries, trie }
    }

    pub fn load<R: BufRead>(reader: R) -> Result<Self, TextError> {
        Ok(PolarityLexicon::from_entries(
            load_wordlist(reader)?.entries,
        ))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(word)
    }

    pub fn iter(&self) -> impl Iterator<Item = &NormalizedToken> {
        self.entries.iter()
    }

    /// Largest `n` such that the first `n` scalar values of `word` form a
    /// lexicon entry.
    ///
    /// Same result as checking `n = |word|, |word|-1, ..., 1` in turn and
    /// stopping at the first hit.
    pub fn longest_negative_leading_match(&self, word: &NormalizedToken) -> Option<usize> {
        self.trie.longest_leading(word.as_str())
    }
}

/// Words exempt from the prefix rule.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExceptionList {
    entries: HashSet<NormalizedToken>,
}

impl ExceptionList {
    pub fn from_entries<I: IntoIterator<Item = NormalizedToken>>(entries: I) -> Self {
        ExceptionList {
            entries: entries.into_iter().filter(|t| !t.is_empty()).collect(),
        }
    }

    pub fn load<R: BufRead>(reader: R) -> Result<Self, TextError> {
        Ok(ExceptionList::from_entries(load_wordlist(reader)?.entries))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(word)
    }

    pub fn iter(&self) -> impl Iterator<Item = &NormalizedToken> {
        self.entries.iter()
    }

    /// Entries that no prefix in `table` leads, sorted. Hand edits can
    /// introduce these; they are worth a warning but are kept.
    pub fn irregular_entries(&self, table: &PrefixTable) -> Vec<&NormalizedToken> {
        let mut out: Vec<_> = self
            .entries
            .iter()
            .filter(|e| !table.iter().any(|p| e.as_str().starts_with(p)))
            .collect();
        out.sort();
        out
    }
}

/// Negative prefixes, longest first, ties broken lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixTable {
    prefixes: Vec<String>,
}

impl PrefixTable {
    pub fn new<I, S>(prefixes: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for p in prefixes {
            let token = normalize(p.as_ref());
            if token.is_empty() {
                continue;
            }
            if !seen.insert(token.clone()) {
                return Err(LexiconError::DuplicatePrefix(token.into_string()));
            }
            out.push(token.into_string());
        }
        PrefixTable::from_sorted(out)
    }

    fn from_sorted(mut prefixes: Vec<String>) -> Result<Self, LexiconError> {
        if prefixes.is_empty() {
            return Err(LexiconError::EmptyPrefixTable);
        }
        prefixes.sort_by(|a, b| {
            b.chars()
                .count()
                .cmp(&a.chars().count())
                .then_with(|| a.cmp(b))
        });
        Ok(PrefixTable { prefixes })
    }

    /// Reads a prefix file. Line order is irrelevant.
    pub fn load<R: BufRead>(reader: R) -> Result<Self, LexiconError> {
        let list = load_wordlist(reader)?;
        PrefixTable::from_sorted(list.entries.into_iter().map(|t| t.into_string()).collect())
    }

    /// Table with the given prefixes removed. Unknown names are ignored.
    pub fn without<S: AsRef<str>>(&self, excluded: &[S]) -> Result<Self, LexiconError> {
        let excluded: HashSet<NormalizedToken> =
            excluded.iter().map(|s| normalize(s.as_ref())).collect();
        PrefixTable::from_sorted(
            self.prefixes
                .iter()
                .filter(|p| !excluded.contains(p.as_str()))
                .cloned()
                .collect(),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.prefixes.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }

    pub fn contains(&self, prefix: &str) -> bool {
        self.prefixes.iter().any(|p| p == prefix)
    }

    /// Longest prefix leading `word`, with the remaining base.
    ///
    /// One ZWNJ right after the prefix is absorbed. Returns `None` when no
    /// prefix leads the word or when the longest one leaves an empty base.
    pub fn leading_prefix_match<'t>(&'t self, word: &NormalizedToken) -> Option<PrefixMatch<'t>> {
        let (prefix, rest) = self
            .prefixes
            .iter()
            .find_map(|p| word.as_str().strip_prefix(p.as_str()).map(|rest| (p, rest)))?;
        let base = rest.strip_prefix(ZWNJ).unwrap_or(rest);
        if base.is_empty() {
            return None;
        }
        Some(PrefixMatch {
            prefix,
            base: NormalizedToken::from_canonical(base),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixMatch<'t> {
    pub prefix: &'t str,
    pub base: NormalizedToken,
}
