//! HTTP implementations of the completion and embedding providers.

use std::time::Duration;

use crs_core::providers::{
    CompletionProvider, CompletionRequest, Embedder, EmbeddingVector, ProviderError,
};
use serde::{Deserialize, Serialize};
use ureq::Agent;

fn agent(timeout: Duration) -> Agent {
    Agent::config_builder()
        .timeout_global(Some(timeout))
        .build()
        .into()
}

fn unavailable(e: ureq::Error) -> ProviderError {
    ProviderError::Unavailable(e.to_string())
}

#[derive(Serialize)]
struct CompletionBody<'a> {
    prompt: &'a str,
    max_tokens: u32,
    stop: Option<&'a str>,
}

#[derive(Deserialize)]
struct CompletionReply {
    text: String,
}

/// Posts `{prompt, max_tokens, stop}` and reads `{text}`.
pub struct RemoteCompletion {
    url: String,
    agent: Agent,
}

impl RemoteCompletion {
    pub fn new(url: impl Into<String>, timeout: Duration) -> Self {
        Self {
            url: url.into(),
            agent: agent(timeout),
        }
    }
}

impl CompletionProvider for RemoteCompletion {
    fn complete(&self, request: &CompletionRequest) -> Result<String, ProviderError> {
        let body = CompletionBody {
            prompt: request.prompt(),
            max_tokens: request.max_tokens(),
            stop: request.stop(),
        };
        let reply: CompletionReply = self
            .agent
            .post(&self.url)
            .send_json(&body)
            .map_err(unavailable)?
            .body_mut()
            .read_json()
            .map_err(|e| ProviderError::Malformed(e.to_string()))?;
        Ok(request.truncate(&reply.text))
    }
}

#[derive(Serialize)]
struct EmbedBody<'a> {
    texts: &'a [&'a str],
}

#[derive(Deserialize)]
struct EmbedReply {
    vectors: Vec<Vec<f64>>,
}

/// Posts `{texts}` and reads `{vectors}`; vectors are re-normalized.
pub struct RemoteEmbedder {
    url: String,
    agent: Agent,
    dimension: usize,
}

impl RemoteEmbedder {
    pub fn new(url: impl Into<String>, timeout: Duration, dimension: usize) -> Self {
        Self {
            url: url.into(),
            agent: agent(timeout),
            dimension,
        }
    }

    pub fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, ProviderError> {
        if texts.iter().any(|t| t.trim().is_empty()) {
            return Err(ProviderError::EmptyInput);
        }
        let reply: EmbedReply = self
            .agent
            .post(&self.url)
            .send_json(EmbedBody { texts })
            .map_err(unavailable)?
            .body_mut()
            .read_json()
            .map_err(|e| ProviderError::Malformed(e.to_string()))?;
        if reply.vectors.len() != texts.len() {
            return Err(ProviderError::Malformed(format!(
                "{} vectors for {} texts",
                reply.vectors.len(),
                texts.len()
            )));
        }
        reply
            .vectors
            .into_iter()
            .map(|v| {
                if v.len() != self.dimension {
                    return Err(ProviderError::DimensionMismatch {
                        left: self.dimension,
                        right: v.len(),
                    });
                }
                Ok(EmbeddingVector::from_raw(v))
            })
            .collect()
    }
}

impl Embedder for RemoteEmbedder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn embed(&self, text: &str) -> Result<EmbeddingVector, ProviderError> {
        Ok(self.embed_batch(&[text])?.remove(0))
    }
}
