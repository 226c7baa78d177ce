//! Line-oriented configuration tables.
//!
//! All shipped text configuration uses the same shape: one record per line,
//! fields separated by a single tab, `#` starting a comment line. Blank lines
//! are ignored. The literal sequences `\n` and `\t` inside a field are
//! unescaped.

use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

/// One data line: its 1-based line number and unescaped fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub line: usize,
    pub fields: Vec<String>,
}

/// Split `src` into records, requiring exactly `arity` fields per line.
pub fn records(src: &str, arity: usize) -> Result<Vec<Record>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim_end_matches('\r');
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<String> = trimmed.split('\t').map(unescape).collect();
        if fields.len() != arity {
            return Err(ConfigError::new(
                line,
                alloc::format!("expected {arity} tab-separated fields, found {}", fields.len()),
            ));
        }
        out.push(Record { line, fields });
    }
    Ok(out)
}

fn unescape(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                Some('\\') => out.push('\\'),
                Some(other) => {
                    out.push('\\');
                    out.push(other);
                }
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skips_comments_and_blanks() {
        let src = "# header\n\na\tb\n  # indented comment\nc\td\n";
        let recs = records(src, 2).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].line, 3);
        assert_eq!(recs[1].fields, ["c", "d"]);
    }

    #[test]
    fn arity_mismatch_names_line() {
        let err = records("a\tb\nc\n", 2).unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn unescapes_newlines() {
        let recs = records("k\tone\\ntwo\n", 2).unwrap();
        assert_eq!(recs[0].fields[1], "one\ntwo");
    }
}
