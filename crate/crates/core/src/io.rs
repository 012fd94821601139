//! Line-oriented UTF-8 input shared by all file formats.

use std::io::{self, BufRead};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TextError {
    #[error("invalid UTF-8 at byte offset {offset} (line {line})")]
    InvalidUtf8 { offset: u64, line: usize },
    #[error("read failed at line {line}: {source}")]
    Io {
        line: usize,
        #[source]
        source: io::Error,
    },
}

impl PartialEq for TextError {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (
                TextError::InvalidUtf8 { offset, line },
                TextError::InvalidUtf8 {
                    offset: o2,
                    line: l2,
                },
            ) => offset == o2 && line == l2,
            _ => false,
        }
    }
}

impl TextError {
    pub fn line(&self) -> usize {
        match self {
            TextError::InvalidUtf8 { line, .. } | TextError::Io { line, .. } => *line,
        }
    }
}

/// Streams decoded lines from a reader.
///
/// Accepts LF or CRLF, strips a leading byte-order mark, and reports the
/// absolute byte offset of the first malformed sequence.
pub struct TextLines<R> {
    reader: R,
    offset: u64,
    line: usize,
    buf: Vec<u8>,
    failed: bool,
}

impl<R: BufRead> TextLines<R> {
    pub fn new(reader: R) -> Self {
        TextLines {
            reader,
            offset: 0,
            line: 0,
            buf: Vec::new(),
            failed: false,
        }
    }
}

impl<R: BufRead> Iterator for TextLines<R> {
    /// `(1-based line number, line without terminator)`
    type Item = Result<(usize, String), TextError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        self.buf.clear();
        let line_no = self.line + 1;
        let read = match self.reader.read_until(b'\n', &mut self.buf) {
            Ok(0) => return None,
            Ok(n) => n,
            Err(source) => {
                self.failed = true;
                return Some(Err(TextError::Io {
                    line: line_no,
                    source,
                }));
            }
        };
        let start = self.offset;
        self.offset += read as u64;
        self.line = line_no;

        let mut bytes = &self.buf[..];
        let mut skipped = 0u64;
        if line_no == 1 {
            if let Some(rest) = bytes.strip_prefix(b"\xEF\xBB\xBF") {
                bytes = rest;
                skipped = 3;
            }
        }
        if let Some(rest) = bytes.strip_suffix(b"\n") {
            bytes = rest;
        }
        if let Some(rest) = bytes.strip_suffix(b"\r") {
            bytes = rest;
        }
        match std::str::from_utf8(bytes) {
            Ok(s) => Some(Ok((line_no, s.to_owned()))),
            Err(e) => {
                self.failed = true;
                Some(Err(TextError::InvalidUtf8 {
                    offset: start + skipped + e.valid_up_to() as u64,
                    line: line_no,
                }))
            }
        }
    }
}

/// Reads every line of `reader`.
pub fn read_text_lines<R: BufRead>(reader: R) -> Result<Vec<String>, TextError> {
    TextLines::new(reader)
        .map(|r| r.map(|(_, line)| line))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_bom_and_crlf() {
        let lines = read_text_lines(&b"\xEF\xBB\xBFab\r\ncd\nef"[..]).unwrap();
        assert_eq!(lines, vec!["ab", "cd", "ef"]);
    }

    #[test]
    fn reports_byte_offset_of_bad_utf8() {
        let err = read_text_lines(&b"ok\nab\xFFcd\n"[..]).unwrap_err();
        assert_eq!(err, TextError::InvalidUtf8 { offset: 5, line: 2 });
    }

    #[test]
    fn offset_counts_the_bom() {
        let err = read_text_lines(&b"\xEF\xBB\xBFa\xC3"[..]).unwrap_err();
        assert_eq!(err, TextError::InvalidUtf8 { offset: 4, line: 1 });
    }

    #[test]
    fn empty_input_has_no_lines() {
        assert!(read_text_lines(&b""[..]).unwrap().is_empty());
    }
}
