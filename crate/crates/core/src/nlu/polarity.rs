use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::providers::text::words;
use crate::providers::NegationRule;
use crate::table::{records, ConfigError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

/// Feedback polarity from word lists. A negated positive word counts as
/// negative evidence; any negative evidence wins over positive evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarityLexicon {
    positive: BTreeSet<String>,
    negative: BTreeSet<String>,
    negation: NegationRule,
}

impl PolarityLexicon {
    /// Parse `token<TAB>positive|negative|negator` lines.
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        let mut positive = BTreeSet::new();
        let mut negative = BTreeSet::new();
        let mut negators = BTreeSet::new();
        for rec in records(src, 2)? {
            let token = rec.fields[0].trim().to_lowercase();
            let set = match rec.fields[1].trim() {
                "positive" => &mut positive,
                "negative" => &mut negative,
                "negator" => &mut negators,
                other => {
                    return Err(ConfigError::new(
                        rec.line,
                        alloc::format!("unknown polarity label `{other}`"),
                    ))
                }
            };
            set.insert(token);
        }
        Ok(Self {
            positive,
            negative,
            negation: NegationRule {
                negators,
                window: 3,
                penalty: 0.0,
            },
        })
    }

    pub fn builtin() -> Self {
        Self::parse(crate::assets::POLARITY_LEXICON).expect("shipped polarity lexicon parses")
    }

    pub fn classify(&self, text: &str) -> Polarity {
        let tokens: Vec<String> = words(text);
        let mut pos = 0usize;
        let mut neg = 0usize;
        for (i, t) in tokens.iter().enumerate() {
            if self.negative.contains(t) {
                neg += 1;
            } else if self.positive.contains(t) {
                if self.negation.is_negated(&tokens, i) {
                    neg += 1;
                } else {
                    pos += 1;
                }
            }
        }
        if neg > 0 {
            Polarity::Negative
        } else if pos > 0 {
            Polarity::Positive
        } else {
            Polarity::Neutral
        }
    }
}
