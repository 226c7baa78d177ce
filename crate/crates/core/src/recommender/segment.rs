//! Review sentence segmentation.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Words ending in `.` that never close a sentence.
pub const ABBREVIATIONS: [&str; 8] = ["mr.", "mrs.", "dr.", "st.", "vs.", "etc.", "e.g.", "i.e."];

/// Fragments with fewer tokens than this are dropped.
pub const MIN_TOKENS: usize = 3;

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | '\u{201d}' | '\u{2019}')
}

fn is_opener(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '\u{201c}' | '\u{2018}')
}

/// Tokens for the fragment filter: runs of letters/digits/apostrophes, and
/// runs of any other non-space characters.
pub fn token_count(s: &str) -> usize {
    #[derive(PartialEq)]
    enum K {
        Space,
        Word,
        Punct,
    }
    let mut n = 0;
    let mut prev = K::Space;
    for c in s.chars() {
        let k = if c.is_whitespace() {
            K::Space
        } else if c.is_alphanumeric() || c == '\'' || c == '\u{2019}' {
            K::Word
        } else {
            K::Punct
        };
        if k != K::Space && k != prev {
            n += 1;
        }
        prev = k;
    }
    n
}

fn ends_with_abbreviation(s: &str) -> bool {
    let last = s.rsplit(char::is_whitespace).next().unwrap_or("");
    let last = last.trim_start_matches(|c: char| !c.is_alphanumeric());
    let lower = last.to_lowercase();
    ABBREVIATIONS.contains(&lower.as_str())
}

/// Split review text into trimmed sentences.
///
/// A boundary is a run of `.`, `!` or `?` (plus closing quotes) followed by
/// end of text, or by whitespace and an uppercase letter (opening quotes
/// may precede it). A period ending a guarded abbreviation is not a
/// boundary.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        let (_, c) = chars[i];
        if !is_terminal(c) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < chars.len() && is_terminal(chars[j].1) {
            j += 1;
        }
        let single_period = c == '.' && j == i + 1;
        while j < chars.len() && is_closer(chars[j].1) {
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |&(b, _)| b);
        let mut k = j;
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        let at_end = k == chars.len();
        let mut m = k;
        while m < chars.len() && is_opener(chars[m].1) {
            m += 1;
        }
        let next_upper = k > j && chars.get(m).is_some_and(|&(_, n)| n.is_uppercase());
        let candidate = &text[start..end];
        let guarded = single_period && ends_with_abbreviation(&text[start..chars[i].0 + 1]);
        if (at_end || next_upper) && !guarded {
            push(&mut out, candidate);
            start = chars.get(k).map_or(text.len(), |&(b, _)| b);
        }
        i = j;
    }
    if start < text.len() {
        push(&mut out, &text[start..]);
    }
    out
}

fn push(out: &mut Vec<String>, s: &str) {
    let s = s.trim();
    if token_count(s) >= MIN_TOKENS {
        out.push(s.to_string());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_periods() {
        assert_eq!(split_sentences("Great food. Terrible parking."), ["Great food.", "Terrible parking."]);
    }

    #[test]
    fn abbreviation_guard() {
        assert_eq!(
            split_sentences("We met Dr. Smith. Food was amazing!"),
            ["We met Dr. Smith.", "Food was amazing!"]
        );
        assert_eq!(split_sentences("Good vs. bad is subjective here."), ["Good vs. bad is subjective here."]);
    }

    #[test]
    fn short_fragments_dropped() {
        assert!(split_sentences("Wow!").is_empty());
        assert_eq!(split_sentences("Wow! The pasta was superb."), ["The pasta was superb."]);
    }

    #[test]
    fn lowercase_continuation_is_not_a_boundary() {
        assert_eq!(split_sentences("Prices are ok. mostly fair."), ["Prices are ok. mostly fair."]);
    }

    #[test]
    fn runs_and_quotes() {
        assert_eq!(
            split_sentences("Loved it!!! \"Best tacos ever.\" We will return"),
            ["Loved it!!!", "\"Best tacos ever.\"", "We will return"]
        );
    }

    #[test]
    fn token_counts() {
        assert_eq!(token_count("Great food."), 3);
        assert_eq!(token_count("Wow!"), 2);
        assert_eq!(token_count("isn't it"), 2);
        assert_eq!(token_count(""), 0);
    }
}
