//! Scoring services behind stable interfaces: joy, embeddings, completion.
//!
//! Each trait has a deterministic built-in implementation driven only by the
//! shipped configuration. Remote implementations live in the `crs` crate.

mod completion;
mod embed;
mod joy;
pub mod text;

use alloc::boxed::Box;
use alloc::string::String;

pub use completion::{CompletionProvider, CompletionRequest, RuleCompletion};
pub use embed::{
    cosine, fnv1a64, parse_stopwords, EmbeddingVector, Embedder, HashingConfig, HashingEmbedder,
    DEFAULT_DIMENSION,
};
pub use joy::{JoyScore, JoyScorer, Lexicon, LexiconJoyScorer, NegationRule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProviderError {
    #[error("input text is empty")]
    EmptyInput,
    #[error("embedding dimensions differ ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },
    #[error("provider unavailable: {0}")]
    Unavailable(String),
    #[error("transformation failed: {0}")]
    TransformationFailed(String),
    #[error("malformed provider data: {0}")]
    Malformed(String),
}

/// The three services an engine needs.
pub struct Providers {
    pub joy: Box<dyn JoyScorer>,
    pub embedder: Box<dyn Embedder>,
    pub completion: Box<dyn CompletionProvider>,
}

impl Providers {
    pub fn builtin() -> Self {
        Self {
            joy: Box::new(LexiconJoyScorer::builtin()),
            embedder: Box::new(HashingEmbedder::builtin()),
            completion: Box::new(RuleCompletion::builtin()),
        }
    }
}

impl core::fmt::Debug for Providers {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Providers")
            .field("embedding_dimension", &self.embedder.dimension())
            .finish_non_exhaustive()
    }
}
