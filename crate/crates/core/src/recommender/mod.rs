//! Argument-backed recommendation.
//!
//! Review sentences are segmented, joy-scored and embedded once per catalog.
//! For each preference the best-aligned joy-passing sentence is a candidate
//! argument; the candidate with the highest alignment wins and its
//! restaurant is recommended.

mod segment;

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

pub use segment::{split_sentences, token_count, ABBREVIATIONS, MIN_TOKENS};

use crate::catalog::{Catalog, Review};
use crate::nlu::Preference;
use crate::providers::{cosine, EmbeddingVector, Embedder, JoyScore, JoyScorer, ProviderError};

pub const JOY_THRESHOLD: f64 = 0.85;
/// Quoted sentences longer than this many characters are clipped.
pub const QUOTE_LIMIT: usize = 220;
pub const DEFAULT_EXPLANATION: &str =
    "I hear you. You prefer {aspect}. How about {name}? One reviewer said: \"{sentence}\"";

#[derive(Debug, Clone, PartialEq)]
pub struct ReviewSentence {
    pub review_id: String,
    pub restaurant_id: String,
    pub index: usize,
    pub text: String,
    pub joy: JoyScore,
    pub embedding: EmbeddingVector,
}

impl ReviewSentence {
    fn key(&self) -> (&str, &str, usize) {
        (&self.restaurant_id, &self.review_id, self.index)
    }
}

/// Segment one review and score every sentence.
pub fn parse_sentences(
    review: &Review,
    joy: &dyn JoyScorer,
    embedder: &dyn Embedder,
) -> Result<Vec<ReviewSentence>, ProviderError> {
    split_sentences(&review.text)
        .into_iter()
        .enumerate()
        .map(|(index, text)| {
            Ok(ReviewSentence {
                review_id: review.id.clone(),
                restaurant_id: review.restaurant_id.clone(),
                index,
                joy: joy.joy_score(&text)?,
                embedding: embedder.embed(&text)?,
                text,
            })
        })
        .collect()
}

/// Sentences with `joy >= threshold`, order preserved.
pub fn filter_positive<'a, I>(sentences: I, threshold: f64) -> Vec<&'a ReviewSentence>
where
    I: IntoIterator<Item = &'a ReviewSentence>,
{
    sentences
        .into_iter()
        .filter(|s| s.joy.value() >= threshold)
        .collect()
}

/// Sentences by descending alignment with `preference`; ties by
/// `(restaurant_id, review_id, index)`.
pub fn rank_semantic<'a>(
    preference: &EmbeddingVector,
    sentences: &[&'a ReviewSentence],
) -> Result<Vec<(&'a ReviewSentence, f64)>, ProviderError> {
    let mut out = sentences
        .iter()
        .map(|s| Ok((*s, cosine(preference, &s.embedding)?)))
        .collect::<Result<Vec<_>, ProviderError>>()?;
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.key().cmp(&b.0.key())));
    Ok(out)
}

/// A preference statement with its embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceVector {
    pub statement: String,
    pub embedding: EmbeddingVector,
}

impl PreferenceVector {
    pub fn embed(statement: &str, embedder: &dyn Embedder) -> Result<Self, ProviderError> {
        Ok(Self {
            statement: statement.to_string(),
            embedding: embedder.embed(statement)?,
        })
    }
}

/// Identifies a review sentence without carrying its embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRef {
    pub restaurant_id: String,
    pub review_id: String,
    pub index: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Argument {
    pub sentence: SentenceRef,
    pub preference: String,
    /// Position of the preference in the list it was selected from.
    pub preference_index: usize,
    pub alignment: f64,
    pub joy: JoyScore,
}

/// Best argument over all `(preference, passing sentence)` pairs.
///
/// Ordered by alignment, then earlier preference, then
/// `(restaurant_id, review_id, index)`.
pub fn extract_best_argument(
    preferences: &[PreferenceVector],
    candidates: &[&ReviewSentence],
    threshold: f64,
) -> Result<Option<Argument>, ProviderError> {
    let positive = filter_positive(candidates.iter().copied(), threshold);
    if positive.is_empty() {
        return Ok(None);
    }
    let mut best: Option<(usize, &ReviewSentence, f64)> = None;
    for (pi, pref) in preferences.iter().enumerate() {
        let ranked = rank_semantic(&pref.embedding, &positive)?;
        let Some(&(s, a)) = ranked.first() else {
            continue;
        };
        // earlier preferences win ties, so only a strictly higher alignment replaces
        if best.is_none_or(|(_, _, b)| a.total_cmp(&b) == Ordering::Greater) {
            best = Some((pi, s, a));
        }
    }
    Ok(best.map(|(pi, s, alignment)| Argument {
        sentence: SentenceRef {
            restaurant_id: s.restaurant_id.clone(),
            review_id: s.review_id.clone(),
            index: s.index,
            text: s.text.clone(),
        },
        preference: preferences[pi].statement.clone(),
        preference_index: pi,
        alignment,
        joy: s.joy,
    }))
}

/// Every review sentence of a catalog, scored once.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceIndex {
    sentences: Vec<ReviewSentence>,
}

impl SentenceIndex {
    pub fn build(
        catalog: &Catalog,
        joy: &dyn JoyScorer,
        embedder: &dyn Embedder,
    ) -> Result<Self, ProviderError> {
        let mut sentences = Vec::new();
        for r in catalog.restaurants() {
            for review in &r.reviews {
                sentences.extend(parse_sentences(review, joy, embedder)?);
            }
        }
        Ok(Self { sentences })
    }

    pub fn sentences(&self) -> &[ReviewSentence] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn excluding(&self, exclude: &BTreeSet<String>) -> Vec<&ReviewSentence> {
        self.sentences
            .iter()
            .filter(|s| !exclude.contains(&s.restaurant_id))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub restaurant_id: String,
    pub restaurant_name: String,
    pub aspect: String,
    pub argument: Argument,
    pub explanation: String,
}

/// Clip to at most `limit` characters, cutting at a word boundary and
/// appending an ellipsis.
pub fn clip_quote(text: &str, limit: usize) -> String {
    if text.chars().count() <= limit {
        return text.to_string();
    }
    let budget: String = text.chars().take(limit.saturating_sub(1)).collect();
    let cut = match budget.rfind(char::is_whitespace) {
        Some(at) if at > 0 => &budget[..at],
        _ => budget.as_str(),
    };
    let mut out = cut.trim_end().to_string();
    out.push('\u{2026}');
    out
}

pub fn render_explanation(template: &str, aspect: &str, name: &str, sentence: &str) -> String {
    template
        .replace("{aspect}", aspect)
        .replace("{name}", name)
        .replace("{sentence}", &clip_quote(sentence, QUOTE_LIMIT))
}

/// One row of the `explain` audit table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainRow {
    pub restaurant_id: String,
    pub review_id: String,
    pub index: usize,
    pub text: String,
    pub joy: f64,
    pub passes: bool,
    pub alignment: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recommender {
    index: SentenceIndex,
    threshold: f64,
    template: String,
}

impl Recommender {
    pub fn new(index: SentenceIndex, threshold: f64, template: impl Into<String>) -> Self {
        assert!((0.0..=1.0).contains(&threshold), "joy threshold must be in [0, 1]");
        Self {
            index,
            threshold,
            template: template.into(),
        }
    }

    pub fn index(&self) -> &SentenceIndex {
        &self.index
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Recommend a restaurant outside `exclude`. The explanation names the
    /// newest preference's aspect.
    pub fn recommend(
        &self,
        catalog: &Catalog,
        preferences: &[Preference],
        embedder: &dyn Embedder,
        exclude: &BTreeSet<String>,
    ) -> Result<Option<Recommendation>, ProviderError> {
        let Some(newest) = preferences.last() else {
            return Ok(None);
        };
        let vectors = preferences
            .iter()
            .map(|p| PreferenceVector::embed(p.statement(), embedder))
            .collect::<Result<Vec<_>, _>>()?;
        let candidates = self.index.excluding(exclude);
        let Some(argument) = extract_best_argument(&vectors, &candidates, self.threshold)? else {
            return Ok(None);
        };
        let Some(restaurant) = catalog.get(&argument.sentence.restaurant_id) else {
            return Ok(None);
        };
        let explanation = render_explanation(
            &self.template,
            newest.aspect(),
            &restaurant.name,
            &argument.sentence.text,
        );
        Ok(Some(Recommendation {
            restaurant_id: restaurant.id.clone(),
            restaurant_name: restaurant.name.clone(),
            aspect: newest.aspect().to_string(),
            argument,
            explanation,
        }))
    }

    /// Every sentence scored against one preference: passing rows first,
    /// then by alignment, then by sentence key.
    pub fn explain(
        &self,
        preference: &str,
        embedder: &dyn Embedder,
    ) -> Result<Vec<ExplainRow>, ProviderError> {
        let pref = embedder.embed(preference)?;
        let mut rows = self
            .index
            .sentences()
            .iter()
            .map(|s| {
                Ok(ExplainRow {
                    restaurant_id: s.restaurant_id.clone(),
                    review_id: s.review_id.clone(),
                    index: s.index,
                    text: s.text.clone(),
                    joy: s.joy.value(),
                    passes: s.joy.value() >= self.threshold,
                    alignment: cosine(&pref, &s.embedding)?,
                })
            })
            .collect::<Result<Vec<_>, ProviderError>>()?;
        rows.sort_by(|a, b| {
            b.passes
                .cmp(&a.passes)
                .then_with(|| b.alignment.total_cmp(&a.alignment))
                .then_with(|| a.restaurant_id.cmp(&b.restaurant_id))
                .then_with(|| a.review_id.cmp(&b.review_id))
                .then_with(|| a.index.cmp(&b.index))
        });
        Ok(rows)
    }
}
