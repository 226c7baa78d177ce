//! Word tokenization shared by the scorers and classifiers.

use alloc::string::String;
use alloc::vec::Vec;

/// Lowercase words. Letters, digits and inner apostrophes are kept
/// (`isn't` stays one token); typographic apostrophes fold to `'`.
pub fn words(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        let c = if c == '\u{2019}' || c == '\u{2018}' { '\'' } else { c };
        if c.is_alphanumeric() || c == '\'' {
            cur.extend(c.to_lowercase());
        } else if !cur.is_empty() {
            push_word(&mut out, &mut cur);
        }
    }
    if !cur.is_empty() {
        push_word(&mut out, &mut cur);
    }
    out
}

fn push_word(out: &mut Vec<String>, cur: &mut String) {
    let w = cur.trim_matches('\'');
    if !w.is_empty() {
        out.push(String::from(w));
    }
    cur.clear();
}

/// Words joined by single spaces, used for phrase matching.
pub fn normalized(text: &str) -> String {
    words(text).join(" ")
}

/// True when `phrase` (already normalized) occurs in `haystack` on word
/// boundaries.
pub fn contains_phrase(haystack: &str, phrase: &str) -> bool {
    if phrase.is_empty() {
        return false;
    }
    let mut start = 0;
    while let Some(pos) = haystack[start..].find(phrase) {
        let at = start + pos;
        let end = at + phrase.len();
        let left_ok = at == 0 || haystack.as_bytes()[at - 1] == b' ';
        let right_ok = end == haystack.len() || haystack.as_bytes()[end] == b' ';
        if left_ok && right_ok {
            return true;
        }
        start = at + 1;
        while !haystack.is_char_boundary(start) {
            start += 1;
        }
    }
    false
}
