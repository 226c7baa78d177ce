//! Feature-hashed sentence embeddings.
//!
//! Text is case-folded and split into words; stopwords are dropped and each
//! remaining word is lightly stemmed (possessive and plural `s` removed,
//! then truncated to [`HashingConfig::stem_len`] characters). Every stem
//! (unigram) and every pair of adjacent stems (bigram, joined by a space) is
//! hashed with 64-bit FNV-1a. Bits `1..` of the hash select the bucket and
//! bit 0 the sign. Buckets accumulate term frequency times the feature
//! weight and the vector is L2-normalized.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::text::words;
use super::ProviderError;

pub const DEFAULT_DIMENSION: usize = 256;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(FNV_PRIME))
}

/// A unit-length vector. Degenerate vectors (nothing to embed) are the
/// first basis vector and carry a flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVector {
    components: Vec<f64>,
    degenerate: bool,
}

impl EmbeddingVector {
    /// Normalize raw weights. All-zero or non-finite input yields the
    /// zero-guard vector.
    pub fn from_raw(raw: Vec<f64>) -> Self {
        let dim = raw.len().max(1);
        let finite = raw.iter().all(|v| v.is_finite());
        let norm = libm::sqrt(raw.iter().map(|v| v * v).sum::<f64>());
        if !finite || !norm.is_finite() || norm <= 0.0 {
            return Self::zero_guard(dim);
        }
        Self {
            components: raw.into_iter().map(|v| v / norm).collect(),
            degenerate: false,
        }
    }

    pub fn zero_guard(dimension: usize) -> Self {
        let mut components = vec![0.0; dimension.max(1)];
        components[0] = 1.0;
        Self {
            components,
            degenerate: true,
        }
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.components.iter().map(|v| v * v).sum())
    }
}

/// Cosine similarity of two unit vectors, clamped to `[-1, 1]`.
pub fn cosine(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<f64, ProviderError> {
    if a.dimension() != b.dimension() {
        return Err(ProviderError::DimensionMismatch {
            left: a.dimension(),
            right: b.dimension(),
        });
    }
    let dot: f64 = a
        .components
        .iter()
        .zip(&b.components)
        .map(|(x, y)| x * y)
        .sum();
    Ok(dot.clamp(-1.0, 1.0))
}

pub trait Embedder: Send + Sync {
    fn dimension(&self) -> usize;
    fn embed(&self, text: &str) -> Result<EmbeddingVector, ProviderError>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct HashingConfig {
    pub dimension: usize,
    pub stem_len: usize,
    pub unigram_weight: f64,
    pub bigram_weight: f64,
    pub stopwords: BTreeSet<String>,
}

impl HashingConfig {
    pub fn builtin() -> Self {
        Self {
            dimension: DEFAULT_DIMENSION,
            stem_len: 5,
            unigram_weight: 1.0,
            bigram_weight: 1.0,
            stopwords: parse_stopwords(crate::assets::STOPWORDS),
        }
    }
}

/// One word per line; `#` comments and blank lines ignored.
pub fn parse_stopwords(src: &str) -> BTreeSet<String> {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HashingEmbedder {
    config: HashingConfig,
}

impl HashingEmbedder {
    pub fn new(config: HashingConfig) -> Self {
        assert!(config.dimension > 0, "embedding dimension must be positive");
        assert!(config.stem_len > 0, "stem length must be positive");
        Self { config }
    }

    pub fn builtin() -> Self {
        Self::new(HashingConfig::builtin())
    }

    pub fn config(&self) -> &HashingConfig {
        &self.config
    }

    /// Stems of the content words of `text`, in order.
    pub fn stems(&self, text: &str) -> Vec<String> {
        words(text)
            .into_iter()
            .filter(|w| !self.config.stopwords.contains(w))
            .map(|w| stem(&w, self.config.stem_len))
            .filter(|s| !s.is_empty())
            .collect()
    }

    /// Every hashed feature as `(feature, weight)` before bucketing.
    pub fn features(&self, text: &str) -> Vec<(String, f64)> {
        let stems = self.stems(text);
        let mut out: Vec<(String, f64)> = stems
            .iter()
            .map(|s| (s.clone(), self.config.unigram_weight))
            .collect();
        for pair in stems.windows(2) {
            let mut f = pair[0].clone();
            f.push(' ');
            f.push_str(&pair[1]);
            out.push((f, self.config.bigram_weight));
        }
        out
    }
}

fn stem(word: &str, len: usize) -> String {
    let mut w: String = word.strip_suffix("'s").unwrap_or(word).chars().filter(|c| *c != '\'').collect();
    if w.chars().count() > 3 && w.ends_with('s') && !w.ends_with("ss") {
        w.pop();
    }
    w.chars().take(len).collect()
}

impl Embedder for HashingEmbedder {
    fn dimension(&self) -> usize {
        self.config.dimension
    }

    fn embed(&self, text: &str) -> Result<EmbeddingVector, ProviderError> {
        if text.trim().is_empty() {
            return Err(ProviderError::EmptyInput);
        }
        let dim = self.config.dimension;
        let mut raw = vec![0.0; dim];
        for (feature, weight) in self.features(text) {
            let h = fnv1a64(feature.as_bytes());
            let bucket = ((h >> 1) % dim as u64) as usize;
            let sign = if h & 1 == 0 { 1.0 } else { -1.0 };
            raw[bucket] += sign * weight;
        }
        Ok(EmbeddingVector::from_raw(raw))
    }
}
