//! Utterance understanding: intents, feedback polarity, and critique
//! transformation.

mod critique;
mod intent;
mod polarity;
mod prompt;

pub use critique::{
    parse_statement, AspectTable, Critique, CritiqueTransformer, Preference, PreferenceOrigin,
    LOW_CONFIDENCE_ASPECT, PREFERENCE_PREFIX,
};
pub use intent::{
    Intent, IntentClassifier, IntentContext, IntentKind, IntentRules, OptionRef, SHORT_UTTERANCE,
};
pub use polarity::{Polarity, PolarityLexicon};
pub use prompt::{Example, PromptError, PromptTemplate, DEFAULT_SHOTS, SUPPORTED_SHOTS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NluError {
    #[error("critique text is empty")]
    EmptyCritique,
}
