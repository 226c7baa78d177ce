//! Shipped configuration and fixture data, embedded at compile time.
//!
//! The tab-separated files are parsed in this crate; the JSON fixture is
//! exposed as text and parsed by callers that carry a JSON implementation.

/// Joy lexicon, `token<TAB>weight`.
pub const JOY_LEXICON: &str = include_str!("../data/joy_lexicon.tsv");
/// Positive and negative feedback words, `token<TAB>positive|negative|negator`.
pub const POLARITY_LEXICON: &str = include_str!("../data/polarity_lexicon.tsv");
/// Stopwords dropped before embedding.
pub const STOPWORDS: &str = include_str!("../data/stopwords.txt");
/// Ordered few-shot examples, `critique<TAB>preference`.
pub const CONDITIONING_EXAMPLES: &str = include_str!("../data/conditioning_examples.tsv");
/// Critique keyword to positive aspect table, `pattern<TAB>aspect phrase`.
pub const ASPECT_MAP: &str = include_str!("../data/aspect_map.tsv");
/// Intent keyword rules, `intent<TAB>exact|contains<TAB>phrase`.
pub const INTENT_RULES: &str = include_str!("../data/intent_rules.tsv");
/// System response templates, `key<TAB>template`.
pub const RESPONSE_TEMPLATES: &str = include_str!("../data/responses.tsv");
/// The ten-restaurant desk fixture catalog (JSON).
pub const FIXTURE_CATALOG_JSON: &str = include_str!("../data/fixture_catalog.json");
/// Simulator scenarios, `tag<TAB>key<TAB>attribute<TAB>value`.
pub const SCENARIOS: &str = include_str!("../data/scenarios.tsv");
