//! Critique → positive preference transformation.
//!
//! The primary path sends a few-shot prompt to the configured completion
//! provider and parses the first line it returns. When the provider is
//! unavailable or its answer cannot be parsed, the aspect table maps
//! critique keywords to a positive aspect phrase directly.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::prompt::PromptTemplate;
use super::NluError;
use crate::catalog::View;
use crate::providers::text::words;
use crate::providers::{CompletionProvider, CompletionRequest};
use crate::table::{records, ConfigError};

pub const PREFERENCE_PREFIX: &str = "I prefer ";
/// Used when nothing recognizable can be extracted from a critique.
pub const LOW_CONFIDENCE_ASPECT: &str = "something different";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Critique {
    pub text: String,
    pub context_view: View,
    pub restaurant_id: String,
    pub turn: u64,
}

impl Critique {
    pub fn new(
        text: impl Into<String>,
        context_view: View,
        restaurant_id: impl Into<String>,
        turn: u64,
    ) -> Result<Self, NluError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(NluError::EmptyCritique);
        }
        Ok(Self {
            text,
            context_view,
            restaurant_id: restaurant_id.into(),
            turn,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreferenceOrigin {
    /// Parsed from the completion provider's answer.
    Completion,
    /// Produced by the aspect table after the provider failed.
    Fallback,
    /// Neither path recognized the critique.
    LowConfidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preference {
    statement: String,
    source: Critique,
    origin: PreferenceOrigin,
}

impl Preference {
    fn from_aspect(aspect: &str, source: Critique, origin: PreferenceOrigin) -> Self {
        let mut statement = String::from(PREFERENCE_PREFIX);
        statement.push_str(aspect);
        Self {
            statement,
            source,
            origin,
        }
    }

    /// A preference not tied to a dialog critique (diagnostics, tests).
    pub fn from_statement(statement: &str, turn: u64) -> Option<Self> {
        let aspect = parse_statement(statement)?;
        let source = Critique {
            text: statement.to_string(),
            context_view: View::Overview,
            restaurant_id: String::new(),
            turn,
        };
        Some(Self::from_aspect(&aspect, source, PreferenceOrigin::Completion))
    }

    /// Always begins with `"I prefer "`.
    pub fn statement(&self) -> &str {
        &self.statement
    }

    /// The statement without its prefix.
    pub fn aspect(&self) -> &str {
        &self.statement[PREFERENCE_PREFIX.len()..]
    }

    pub fn source(&self) -> &Critique {
        &self.source
    }

    pub fn turn(&self) -> u64 {
        self.source.turn
    }

    pub fn origin(&self) -> PreferenceOrigin {
        self.origin
    }

    pub fn is_low_confidence(&self) -> bool {
        self.origin == PreferenceOrigin::LowConfidence
    }
}

/// Normalize a completion line to its aspect: drop any `Preference:` label,
/// the `I prefer` prefix (any case) and trailing sentence punctuation.
pub fn parse_statement(line: &str) -> Option<String> {
    let mut s = line.lines().next().unwrap_or("").trim();
    if let Some(rest) = s.strip_prefix("Preference:") {
        s = rest.trim();
    }
    let lower = s.to_lowercase();
    if lower.starts_with("i prefer ") {
        s = &s["i prefer ".len()..];
    } else if lower.starts_with("prefer ") {
        s = &s["prefer ".len()..];
    }
    let s = s.trim().trim_end_matches(['.', '!', '?', ',', ';']).trim();
    if s.is_empty() || s.eq_ignore_ascii_case("i prefer") {
        None
    } else {
        Some(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum PatternToken {
    Exact(String),
    Prefix(String),
}

impl PatternToken {
    fn matches(&self, word: &str) -> bool {
        match self {
            PatternToken::Exact(w) => w == word,
            PatternToken::Prefix(p) => word.starts_with(p.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct AspectRule {
    tokens: Vec<PatternToken>,
    pattern_len: usize,
    aspect: String,
}

/// Keyword pattern → aspect phrase. A pattern is a space-separated token
/// sequence matched contiguously against the critique's words; a token
/// ending in `*` matches by prefix. Longest pattern wins (token count, then
/// character length, then file order).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AspectTable {
    rules: Vec<AspectRule>,
}

impl AspectTable {
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        let mut rules = Vec::new();
        for rec in records(src, 2)? {
            let pattern = rec.fields[0].trim();
            let aspect = rec.fields[1].trim();
            if pattern.is_empty() || aspect.is_empty() {
                return Err(ConfigError::new(rec.line, "empty pattern or aspect"));
            }
            let tokens: Vec<PatternToken> = pattern
                .split_whitespace()
                .map(|t| {
                    let t = t.to_lowercase();
                    match t.strip_suffix('*') {
                        Some(p) => PatternToken::Prefix(p.to_string()),
                        None => PatternToken::Exact(t),
                    }
                })
                .collect();
            rules.push(AspectRule {
                tokens,
                pattern_len: pattern.len(),
                aspect: aspect.to_string(),
            });
        }
        Ok(Self { rules })
    }

    pub fn builtin() -> Self {
        Self::parse(crate::assets::ASPECT_MAP).expect("shipped aspect map parses")
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn lookup(&self, critique: &str) -> Option<&str> {
        let ws = words(critique);
        let mut best: Option<&AspectRule> = None;
        for rule in &self.rules {
            let n = rule.tokens.len();
            let hit = n <= ws.len()
                && ws
                    .windows(n)
                    .any(|win| win.iter().zip(&rule.tokens).all(|(w, t)| t.matches(w)));
            if !hit {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => (n, rule.pattern_len) > (b.tokens.len(), b.pattern_len),
            };
            if better {
                best = Some(rule);
            }
        }
        best.map(|r| r.aspect.as_str())
    }
}

/// Completion budget for one preference line.
const PREFERENCE_MAX_TOKENS: u32 = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct CritiqueTransformer {
    template: PromptTemplate,
    aspects: AspectTable,
}

impl CritiqueTransformer {
    pub fn new(template: PromptTemplate, aspects: AspectTable) -> Self {
        Self { template, aspects }
    }

    pub fn template(&self) -> &PromptTemplate {
        &self.template
    }

    pub fn aspects(&self) -> &AspectTable {
        &self.aspects
    }

    /// Total: every non-empty critique yields a preference.
    pub fn to_preference(
        &self,
        critique: &Critique,
        completion: &dyn CompletionProvider,
    ) -> Preference {
        let prompt = self.template.build(critique);
        let answer = CompletionRequest::new(prompt, PREFERENCE_MAX_TOKENS, Some("\n".into()))
            .and_then(|req| completion.complete(&req));
        if let Some(aspect) = answer.ok().as_deref().and_then(parse_statement) {
            return Preference::from_aspect(&aspect, critique.clone(), PreferenceOrigin::Completion);
        }
        self.fallback(critique)
    }

    /// Aspect-table transformation without consulting any provider.
    pub fn fallback(&self, critique: &Critique) -> Preference {
        match self.aspects.lookup(&critique.text) {
            Some(aspect) => Preference::from_aspect(aspect, critique.clone(), PreferenceOrigin::Fallback),
            None => Preference::from_aspect(
                LOW_CONFIDENCE_ASPECT,
                critique.clone(),
                PreferenceOrigin::LowConfidence,
            ),
        }
    }
}
