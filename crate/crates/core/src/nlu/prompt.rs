use alloc::string::String;
use alloc::vec::Vec;

use super::Critique;
use crate::table::{records, ConfigError};

/// Conditioning-example counts the prompt builder accepts.
pub const SUPPORTED_SHOTS: [usize; 4] = [1, 3, 5, 7];
pub const DEFAULT_SHOTS: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub critique: String,
    pub preference: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PromptError {
    #[error("{0} conditioning examples requested; supported counts are 1, 3, 5, 7")]
    UnsupportedCount(usize),
    #[error("{requested} conditioning examples requested but only {available} available")]
    NotEnoughExamples { requested: usize, available: usize },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Few-shot prompt: the first `n` examples, then the critique to transform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    examples: Vec<Example>,
    n: usize,
    critique_label: String,
    preference_label: String,
}

impl PromptTemplate {
    pub fn new(examples: Vec<Example>, n: usize) -> Result<Self, PromptError> {
        if !SUPPORTED_SHOTS.contains(&n) {
            return Err(PromptError::UnsupportedCount(n));
        }
        if n > examples.len() {
            return Err(PromptError::NotEnoughExamples {
                requested: n,
                available: examples.len(),
            });
        }
        Ok(Self {
            examples,
            n,
            critique_label: "Critique:".into(),
            preference_label: "Preference:".into(),
        })
    }

    /// Parse `critique<TAB>preference` lines.
    pub fn parse_examples(src: &str) -> Result<Vec<Example>, ConfigError> {
        Ok(records(src, 2)?
            .into_iter()
            .map(|r| {
                let mut f = r.fields.into_iter();
                Example {
                    critique: f.next().unwrap_or_default(),
                    preference: f.next().unwrap_or_default(),
                }
            })
            .collect())
    }

    pub fn builtin(n: usize) -> Result<Self, PromptError> {
        Self::new(Self::parse_examples(crate::assets::CONDITIONING_EXAMPLES)?, n)
    }

    pub fn shots(&self) -> usize {
        self.n
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples[..self.n]
    }

    pub fn critique_label(&self) -> &str {
        &self.critique_label
    }

    pub fn build(&self, critique: &Critique) -> String {
        let mut out = String::new();
        for ex in self.examples() {
            self.push_pair(&mut out, &ex.critique, Some(&ex.preference));
        }
        self.push_pair(&mut out, &critique.text, None);
        out
    }

    fn push_pair(&self, out: &mut String, critique: &str, preference: Option<&str>) {
        out.push_str(&self.critique_label);
        out.push(' ');
        out.push_str(&single_line(critique));
        out.push('\n');
        out.push_str(&self.preference_label);
        if let Some(p) = preference {
            out.push(' ');
            out.push_str(&single_line(p));
            out.push_str("\n\n");
        }
    }
}

fn single_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
