//! Positive-affect ("joy") scoring from a weighted lexicon.
//!
//! The score of a text is the largest contribution of any of its tokens.
//! A token's contribution is its lexicon weight, multiplied by the negation
//! penalty when a negator appears within the preceding window.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::text::words;
use super::ProviderError;
use crate::table::{records, ConfigError};

/// A joy score in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct JoyScore(f64);

impl JoyScore {
    pub const ZERO: JoyScore = JoyScore(0.0);

    /// Clamps into `[0, 1]`; non-finite input becomes zero.
    pub fn new(value: f64) -> Self {
        if value.is_finite() {
            JoyScore(value.clamp(0.0, 1.0))
        } else {
            JoyScore(0.0)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub trait JoyScorer: Send + Sync {
    fn joy_score(&self, text: &str) -> Result<JoyScore, ProviderError>;
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    weights: BTreeMap<String, f64>,
}

impl Lexicon {
    /// Parse `token<TAB>weight` lines; weights must lie in `[0, 1]`.
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        let mut weights = BTreeMap::new();
        for rec in records(src, 2)? {
            let token = rec.fields[0].trim().to_lowercase();
            let weight: f64 = rec.fields[1]
                .trim()
                .parse()
                .map_err(|_| ConfigError::new(rec.line, "weight is not a number"))?;
            if !(0.0..=1.0).contains(&weight) {
                return Err(ConfigError::new(rec.line, "weight outside [0, 1]"));
            }
            if token.is_empty() {
                return Err(ConfigError::new(rec.line, "empty token"));
            }
            weights.insert(token, weight);
        }
        Ok(Self { weights })
    }

    pub fn weight(&self, token: &str) -> f64 {
        self.weights.get(token).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegationRule {
    pub negators: BTreeSet<String>,
    /// How many tokens before a scored token are searched for a negator.
    pub window: usize,
    pub penalty: f64,
}

impl Default for NegationRule {
    fn default() -> Self {
        let negators = ["not", "never", "no", "hardly", "barely", "isn't", "wasn't", "don't"]
            .into_iter()
            .map(String::from)
            .collect();
        Self {
            negators,
            window: 3,
            penalty: 0.2,
        }
    }
}

impl NegationRule {
    pub fn is_negated(&self, tokens: &[String], at: usize) -> bool {
        let from = at.saturating_sub(self.window);
        tokens[from..at].iter().any(|t| self.negators.contains(t))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexiconJoyScorer {
    lexicon: Lexicon,
    negation: NegationRule,
}

impl LexiconJoyScorer {
    pub fn new(lexicon: Lexicon, negation: NegationRule) -> Self {
        Self { lexicon, negation }
    }

    /// Scorer over the shipped lexicon and default negation rule.
    pub fn builtin() -> Self {
        let lexicon = Lexicon::parse(crate::assets::JOY_LEXICON).expect("shipped joy lexicon parses");
        Self::new(lexicon, NegationRule::default())
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    fn score_tokens(&self, tokens: &[String]) -> f64 {
        tokens
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let w = self.lexicon.weight(t);
                if w > 0.0 && self.negation.is_negated(tokens, i) {
                    w * self.negation.penalty
                } else {
                    w
                }
            })
            .fold(0.0, f64::max)
    }
}

impl JoyScorer for LexiconJoyScorer {
    fn joy_score(&self, text: &str) -> Result<JoyScore, ProviderError> {
        if text.trim().is_empty() {
            return Err(ProviderError::EmptyInput);
        }
        let tokens: Vec<String> = words(text);
        Ok(JoyScore::new(self.score_tokens(&tokens)))
    }
}
