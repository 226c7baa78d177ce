//! Text completion for few-shot critique transformation.

use alloc::string::{String, ToString};

use super::ProviderError;
use crate::nlu::AspectTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionRequest {
    prompt: String,
    max_tokens: u32,
    stop: Option<String>,
}

impl CompletionRequest {
    pub fn new(
        prompt: impl Into<String>,
        max_tokens: u32,
        stop: Option<String>,
    ) -> Result<Self, ProviderError> {
        let prompt = prompt.into();
        if prompt.trim().is_empty() {
            return Err(ProviderError::EmptyInput);
        }
        if max_tokens == 0 {
            return Err(ProviderError::Malformed("max_tokens must be positive".into()));
        }
        Ok(Self {
            prompt,
            max_tokens,
            stop,
        })
    }

    pub fn prompt(&self) -> &str {
        &self.prompt
    }

    pub fn max_tokens(&self) -> u32 {
        self.max_tokens
    }

    pub fn stop(&self) -> Option<&str> {
        self.stop.as_deref()
    }

    /// Cut `text` at the stop sequence and at `max_tokens` whitespace tokens.
    pub fn truncate(&self, text: &str) -> String {
        let cut = match self.stop.as_deref() {
            Some(stop) if !stop.is_empty() => text.split(stop).next().unwrap_or(""),
            _ => text,
        };
        let mut taken = 0u32;
        let mut end = cut.len();
        let mut in_word = false;
        for (i, c) in cut.char_indices() {
            if c.is_whitespace() {
                in_word = false;
            } else if !in_word {
                in_word = true;
                if taken == self.max_tokens {
                    end = i;
                    break;
                }
                taken += 1;
            }
        }
        cut[..end].trim_end().to_string()
    }
}

pub trait CompletionProvider: Send + Sync {
    fn complete(&self, request: &CompletionRequest) -> Result<String, ProviderError>;
}

/// Offline completion: reads the last `Critique:` line of the prompt and
/// answers with the aspect table's mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleCompletion {
    aspects: AspectTable,
    critique_label: String,
}

impl RuleCompletion {
    pub fn new(aspects: AspectTable) -> Self {
        Self {
            aspects,
            critique_label: "Critique:".into(),
        }
    }

    pub fn builtin() -> Self {
        Self::new(AspectTable::builtin())
    }
}

impl CompletionProvider for RuleCompletion {
    fn complete(&self, request: &CompletionRequest) -> Result<String, ProviderError> {
        let critique = request
            .prompt()
            .lines()
            .rev()
            .find_map(|l| l.trim_start().strip_prefix(self.critique_label.as_str()))
            .map(str::trim)
            .filter(|c| !c.is_empty())
            .ok_or_else(|| ProviderError::TransformationFailed("prompt has no critique line".into()))?;
        let aspect = self
            .aspects
            .lookup(critique)
            .ok_or_else(|| ProviderError::TransformationFailed("no aspect matches".into()))?;
        let mut text = String::from(" I prefer ");
        text.push_str(aspect);
        Ok(request.truncate(&text))
    }
}
